#pragma once

// Numerical kernels: companion-matrix univariate roots, Newton refinement,
// predictor-corrector path tracking, straight-line and parameter homotopies,
// and the built-in total-degree base solver.
//
// Residuals are measured relative to the size of the terms at the point:
//   max_i |f_i(x)| / (1 + sum_a |c_a| |x^a|),
// so tolerances mean the same thing for large and small coefficients.

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <numbers>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace sparsedecomp {

struct TrackerConfig {
  double initial_step = 0.1;
  double min_step = 1e-7;
  double max_step = 0.25;
  double newton_tol = 1e-10;
  int max_corrector_iters = 3;
  double divergence_bound = 1e8;
  std::size_t max_steps = 10000;
  std::uint64_t seed = 42;
  // Corrector acceptance along the path: |dx| <= path_tol * (1 + |x|).
  double path_tol = 1e-8;
  // 0 means std::thread::hardware_concurrency().
  std::size_t workers = 0;

  void validate() const {
    if (!(0 < min_step && min_step <= initial_step && initial_step <= max_step && max_step < 1))
      throw std::invalid_argument("tracker steps must satisfy 0 < min <= initial <= max < 1");
    if (!(newton_tol > 0 && path_tol > 0 && divergence_bound > 0) || max_corrector_iters < 1)
      throw std::invalid_argument("tracker tolerances must be positive");
  }
};

enum class PathStatus { Converged, Diverged, Truncated };

struct PathResult {
  PathStatus status = PathStatus::Diverged;
  Point endpoint;  // Converged: the solution; otherwise the last accepted point
  double t = 0.0;  // homotopy parameter reached
  std::size_t steps_taken = 0;
};

// A solution together with how many endpoints collapsed onto it.
struct Root {
  Point x;
  std::size_t multiplicity = 1;
};

namespace detail {

// Flattened system for fast value/Jacobian evaluation. Tolerates zero
// coordinates for nonnegative exponents (start systems live in C^n).
class CompiledSystem {
 public:
  CompiledSystem() = default;
  explicit CompiledSystem(const SparseSystem& s) : n_(s.size()) {
    for (const auto& p : s.polynomials()) {
      std::vector<CTerm> terms;
      for (const auto& t : p.terms()) terms.push_back({t.coeff, t.exponent});
      polys_.push_back(std::move(terms));
    }
  }

  std::size_t size() const { return n_; }

  // value, Jacobian and per-row term magnitude sum.
  void eval(const Point& x, Eigen::VectorXcd& f, Eigen::MatrixXcd& J, Eigen::VectorXd& mag) const {
    const auto n = static_cast<Eigen::Index>(n_);
    f.setZero(n);
    J.setZero(n, n);
    mag.setZero(n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (const auto& t : polys_[static_cast<std::size_t>(r)]) {
        const Complex m = monomial(x, t.e);
        f[r] += t.c * m;
        mag[r] += std::abs(t.c) * std::abs(m);
        for (Eigen::Index c = 0; c < n; ++c) {
          const auto a = t.e[static_cast<std::size_t>(c)];
          if (a == 0) continue;
          Complex dm;
          if (x[c] != Complex(0.0)) {
            dm = m / x[c];
          } else {
            Exponent e = t.e;
            e[static_cast<std::size_t>(c)] -= 1;
            dm = monomial(x, e);
          }
          J(r, c) += t.c * static_cast<double>(a) * dm;
        }
      }
  }

  void value(const Point& x, Eigen::VectorXcd& f, Eigen::VectorXd& mag) const {
    const auto n = static_cast<Eigen::Index>(n_);
    f.setZero(n);
    mag.setZero(n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (const auto& t : polys_[static_cast<std::size_t>(r)]) {
        const Complex m = monomial(x, t.e);
        f[r] += t.c * m;
        mag[r] += std::abs(t.c) * std::abs(m);
      }
  }

 private:
  struct CTerm {
    Complex c;
    Exponent e;
  };
  std::size_t n_ = 0;
  std::vector<std::vector<CTerm>> polys_;
};

inline double scaled_residual(const Eigen::VectorXcd& f, const Eigen::VectorXd& mag) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i]) / (1.0 + mag[i]));
  return worst;
}

inline bool finite(const Eigen::VectorXcd& v) { return v.allFinite(); }

// Solves J dx = rhs; nullopt when J is numerically singular.
inline std::optional<Eigen::VectorXcd> linear_solve(const Eigen::MatrixXcd& J, const Eigen::VectorXcd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
  if (!(lu.rcond() > 1e-14)) return std::nullopt;
  Eigen::VectorXcd dx = lu.solve(rhs);
  if (!finite(dx)) return std::nullopt;
  return dx;
}

inline std::size_t worker_count(std::size_t requested, std::size_t tasks) {
  std::size_t w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(w, tasks));
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. The first
// exception (by index) is rethrown after all tasks finish.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  if (count == 0) return;
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t w = worker_count(workers, count);
  if (w == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < w; ++k) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline Complex random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, angle(rng));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ordering and deduplication

inline double quantize(double v) { return std::round(v * 1e10); }

// Lexicographic by (real, imag) of each coordinate, compared after rounding to 1e-10.
inline bool canonical_less(const Point& a, const Point& b) {
  const Eigen::Index n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ar = quantize(a[i].real()), br = quantize(b[i].real());
    if (ar != br) return ar < br;
    const double ai = quantize(a[i].imag()), bi = quantize(b[i].imag());
    if (ai != bi) return ai < bi;
  }
  return a.size() < b.size();
}

inline bool same_point(const Point& a, const Point& b, double rel = 1e-8) {
  return (a - b).norm() <= rel * (1.0 + a.norm());
}

// Merges clusters (|x - y| <= 1e-8 (1 + |x|)), summing multiplicities, and
// returns them in canonical order. Input order must be deterministic.
inline std::vector<Root> deduplicate(const std::vector<Root>& roots) {
  std::vector<Root> kept;
  for (const auto& r : roots) {
    auto it = std::find_if(kept.begin(), kept.end(), [&](const Root& k) { return same_point(k.x, r.x); });
    if (it == kept.end())
      kept.push_back(r);
    else
      it->multiplicity += r.multiplicity;
  }
  std::sort(kept.begin(), kept.end(), [](const Root& a, const Root& b) { return canonical_less(a.x, b.x); });
  return kept;
}

inline std::vector<Point> points_of(const std::vector<Root>& roots) {
  std::vector<Point> out;
  for (const auto& r : roots) out.push_back(r.x);
  return out;
}

inline bool in_torus(const Point& x, double tolerance) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(std::abs(x[i]) > tolerance)) return false;
  return x.allFinite();
}

// ---------------------------------------------------------------------------
// Univariate

namespace detail {

inline Complex horner(const std::vector<Complex>& c, Complex z, Complex* derivative = nullptr) {
  Complex p = c.back(), dp = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
  if (derivative) *derivative = dp;
  return p;
}

}  // namespace detail

// Roots of c_0 + c_1 z + ... + c_d z^d (c_d != 0), with multiplicity: the
// eigenvalues of the companion matrix, each polished by Newton on the
// original coefficients.
inline std::vector<Complex> univariate_roots(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && coeffs.back() == Complex(0.0)) coeffs.pop_back();
  if (coeffs.size() < 2) throw DegreeZero();
  const std::size_t d = coeffs.size() - 1;

  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i)
    C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -coeffs[i] / coeffs[d];

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(C, false);
  if (eig.info() != Eigen::Success) throw SolverFailure("companion eigenvalue iteration did not converge");

  std::vector<Complex> roots;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    Complex z = eig.eigenvalues()[i];
    double best = std::abs(detail::horner(coeffs, z));
    for (int it = 0; it < 8 && best > 0; ++it) {
      Complex dp;
      const Complex p = detail::horner(coeffs, z, &dp);
      if (dp == Complex(0.0)) break;
      const Complex candidate = z - p / dp;
      const double r = std::abs(detail::horner(coeffs, candidate));
      if (!(r < best)) break;
      z = candidate;
      best = r;
    }
    roots.push_back(z);
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Newton

struct NewtonResult {
  Point x;
  bool converged = false;
  double residual = 0.0;  // scaled residual at x
  int iterations = 0;
};

// Newton's method on a square system. Converged means scaled residual <= tol
// and no coordinate is zero. Throws SingularJacobian when a step cannot be solved.
inline NewtonResult newton_refine(const SparseSystem& F, Point x, double tol, int max_iters) {
  const detail::CompiledSystem sys(F);
  Eigen::VectorXcd f;
  Eigen::MatrixXcd J;
  Eigen::VectorXd mag;
  NewtonResult out;
  for (int it = 0;; ++it) {
    sys.eval(x, f, J, mag);
    out.residual = detail::scaled_residual(f, mag);
    if (out.residual <= tol || it == max_iters || !x.allFinite()) {
      out.iterations = it;
      break;
    }
    auto dx = detail::linear_solve(J, f);
    if (!dx) throw SingularJacobian();
    x -= *dx;
  }
  out.converged = out.residual <= tol && in_torus(x, 0.0);
  out.x = std::move(x);
  return out;
}

// Extra Newton steps while the residual keeps dropping; never makes x worse.
inline Point polish(const SparseSystem& F, Point x, int max_iters = 4) {
  const detail::CompiledSystem sys(F);
  Eigen::VectorXcd f;
  Eigen::MatrixXcd J;
  Eigen::VectorXd mag;
  sys.eval(x, f, J, mag);
  double best = detail::scaled_residual(f, mag);
  for (int it = 0; it < max_iters && best > 0; ++it) {
    auto dx = detail::linear_solve(J, f);
    if (!dx) break;
    Point candidate = x - *dx;
    sys.eval(candidate, f, J, mag);
    const double r = detail::scaled_residual(f, mag);
    if (!(r < best)) break;
    x = std::move(candidate);
    best = r;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Homotopies and tracking

// H(x, t) = gamma (1 - t) S(x) + t T(x). With S and T on the same supports
// this is a parameter homotopy along a gamma-deformed coefficient segment.
class LinearHomotopy {
 public:
  LinearHomotopy(const SparseSystem& start, const SparseSystem& target, Complex gamma)
      : start_(start), target_(target), gamma_(gamma) {
    if (start.size() != target.size()) throw std::invalid_argument("homotopy endpoints differ in size");
  }

  std::size_t dimension() const { return start_.size(); }

  void eval(const Point& x, double t, Eigen::VectorXcd& h, Eigen::MatrixXcd& hx, Eigen::VectorXcd& ht,
            Eigen::VectorXd& mag) const {
    Eigen::VectorXcd fs, ft;
    Eigen::MatrixXcd js, jt;
    Eigen::VectorXd ms, mt;
    start_.eval(x, fs, js, ms);
    target_.eval(x, ft, jt, mt);
    const Complex a = gamma_ * (1.0 - t);
    h = a * fs + t * ft;
    hx = a * js + t * jt;
    ht = ft - gamma_ * fs;
    mag = (1.0 - t) * ms + t * mt;
  }

 private:
  detail::CompiledSystem start_;
  detail::CompiledSystem target_;
  Complex gamma_;
};

// H(x, t) = F(x) for all t.
class ConstantHomotopy {
 public:
  explicit ConstantHomotopy(const SparseSystem& F) : f_(F) {}
  std::size_t dimension() const { return f_.size(); }
  void eval(const Point& x, double, Eigen::VectorXcd& h, Eigen::MatrixXcd& hx, Eigen::VectorXcd& ht,
            Eigen::VectorXd& mag) const {
    f_.eval(x, h, hx, mag);
    ht.setZero(h.size());
  }

 private:
  detail::CompiledSystem f_;
};

template <typename H>
concept Homotopy = requires(const H& h, const Point& x, double t, Eigen::VectorXcd& v, Eigen::MatrixXcd& m,
                            Eigen::VectorXd& mag) {
  { h.dimension() } -> std::convertible_to<std::size_t>;
  h.eval(x, t, v, m, v, mag);
};

namespace detail {

// dx/dt = -H_x^{-1} H_t
template <Homotopy H>
std::optional<Eigen::VectorXcd> tangent(const H& h, const Point& x, double t) {
  Eigen::VectorXcd v, ht;
  Eigen::MatrixXcd hx;
  Eigen::VectorXd mag;
  h.eval(x, t, v, hx, ht, mag);
  auto dx = linear_solve(hx, ht);
  if (!dx) return std::nullopt;
  return Eigen::VectorXcd(-*dx);
}

template <Homotopy H>
std::optional<Point> rk4_predict(const H& h, const Point& x, double t, double dt) {
  auto k1 = tangent(h, x, t);
  if (!k1) return std::nullopt;
  auto k2 = tangent(h, Point(x + 0.5 * dt * *k1), t + 0.5 * dt);
  if (!k2) return std::nullopt;
  auto k3 = tangent(h, Point(x + 0.5 * dt * *k2), t + 0.5 * dt);
  if (!k3) return std::nullopt;
  auto k4 = tangent(h, Point(x + dt * *k3), t + dt);
  if (!k4) return std::nullopt;
  return Point(x + dt / 6.0 * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4));
}

// Newton at fixed t; success needs a contracting sequence ending below path_tol.
template <Homotopy H>
std::optional<Point> correct(const H& h, Point x, double t, const TrackerConfig& cfg) {
  Eigen::VectorXcd v, ht;
  Eigen::MatrixXcd hx;
  Eigen::VectorXd mag;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_corrector_iters; ++it) {
    h.eval(x, t, v, hx, ht, mag);
    auto dx = linear_solve(hx, v);
    if (!dx) return std::nullopt;
    const double step = dx->norm();
    if (it > 0 && step > 0.5 * previous) return std::nullopt;
    x -= *dx;
    if (!x.allFinite()) return std::nullopt;
    if (step <= cfg.path_tol * (1.0 + x.norm())) return x;
    previous = step;
  }
  return std::nullopt;
}

}  // namespace detail

// Adaptive RK4 predictor on the Davidenko equation with a Newton corrector,
// from t = 0 to t = 1. Step halves on corrector failure and grows 1.5x after
// four consecutive successes.
template <Homotopy H>
PathResult track_path(const H& h, const Point& start, const TrackerConfig& cfg) {
  cfg.validate();
  {
    Eigen::VectorXcd v, ht;
    Eigen::MatrixXcd hx;
    Eigen::VectorXd mag;
    h.eval(start, 0.0, v, hx, ht, mag);
    const double r = detail::scaled_residual(v, mag);
    if (!(r <= cfg.newton_tol)) throw InvalidStart(r);
  }

  PathResult result;
  Point x = start;
  double t = 0.0, dt = cfg.initial_step;
  int successes = 0;
  auto stop = [&](PathStatus status) {
    result.status = status;
    result.endpoint = x;
    result.t = t;
    return result;
  };
  while (t < 1.0) {
    if (result.steps_taken >= cfg.max_steps) return stop(PathStatus::Truncated);
    ++result.steps_taken;
    const double step = std::min(dt, 1.0 - t);
    const double t_next = (step == 1.0 - t) ? 1.0 : t + step;
    std::optional<Point> corrected;
    if (auto predicted = detail::rk4_predict(h, x, t, step)) corrected = detail::correct(h, *predicted, t_next, cfg);
    if (corrected) {
      x = std::move(*corrected);
      t = t_next;
      if (++successes >= 4) {
        dt = std::min(1.5 * dt, cfg.max_step);
        successes = 0;
      }
      if (x.cwiseAbs().maxCoeff() > cfg.divergence_bound) return stop(PathStatus::Diverged);
    } else {
      successes = 0;
      dt *= 0.5;
      if (dt < cfg.min_step) return stop(PathStatus::Diverged);
    }
  }

  // Endgame-free finish: Newton at t = 1 down to newton_tol.
  Eigen::VectorXcd v, ht;
  Eigen::MatrixXcd hx;
  Eigen::VectorXd mag;
  for (int it = 0; it < 8; ++it) {
    h.eval(x, 1.0, v, hx, ht, mag);
    if (detail::scaled_residual(v, mag) <= cfg.newton_tol) break;
    auto dx = detail::linear_solve(hx, v);
    if (!dx) break;
    x -= *dx;
    if (!x.allFinite()) return stop(PathStatus::Diverged);
  }
  h.eval(x, 1.0, v, hx, ht, mag);
  return stop(detail::scaled_residual(v, mag) <= cfg.newton_tol ? PathStatus::Converged : PathStatus::Diverged);
}

struct PathStats {
  std::size_t paths = 0;
  std::size_t converged = 0;
  std::size_t diverged = 0;
  std::size_t truncated = 0;
  std::size_t failed = 0;  // tracker threw
};

namespace detail {

inline std::optional<Point> keep_endpoint(const Point& x) { return x; }

constexpr double kEndgameStart = 0.99;

// Tracks every start point, then keeps converged torus endpoints that polish
// to a solution of `target`, merged into clusters. `finish` maps a tracked
// endpoint to target coordinates or rejects it.
template <Homotopy H, typename Finish = std::optional<Point> (*)(const Point&)>
std::vector<Root> track_all(const H& h, const std::vector<Point>& starts, const SparseSystem& target,
                            const TrackerConfig& cfg, double tolerance, PathStats* stats,
                            Finish finish = keep_endpoint) {
  std::vector<std::optional<PathResult>> results(starts.size());
  std::vector<char> failed(starts.size(), 0);
  parallel_for(starts.size(), cfg.workers, [&](std::size_t i) {
    try {
      results[i] = track_path(h, starts[i], cfg);
    } catch (const Error&) {
      failed[i] = 1;
    }
  });

  PathStats local;
  local.paths = starts.size();
  std::vector<Root> endpoints;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (failed[i]) {
      ++local.failed;
      continue;
    }
    const PathResult& path = *results[i];
    switch (path.status) {
      case PathStatus::Converged: ++local.converged; break;
      case PathStatus::Diverged: ++local.diverged; break;
      case PathStatus::Truncated: ++local.truncated; continue;
    }
    // A path that stalls just short of t = 1 (typically crowded by paths
    // heading to a singular endpoint) gets a Newton endgame on the target.
    const bool endgame = path.status == PathStatus::Diverged;
    if (endgame && !(path.t >= kEndgameStart && path.endpoint.allFinite())) continue;
    const std::optional<Point> mapped = finish(path.endpoint);
    if (!mapped) continue;
    const Point& x = *mapped;
    if (!in_torus(x, tolerance)) continue;
    try {
      auto refined = newton_refine(target, x, cfg.newton_tol, endgame ? 30 : 5);
      if (!refined.converged || !in_torus(refined.x, tolerance)) continue;
      endpoints.push_back({polish(target, refined.x), 1});
    } catch (const SingularJacobian&) {
    }
  }
  if (stats) *stats = local;
  if (local.paths > 0 && local.failed == local.paths) throw SolverFailure("every path failed to track");
  return deduplicate(endpoints);
}

}  // namespace detail

// Total-degree start system g_i = x_i^{d_i} - 1 with d_i the degree of f_i
// after shifting its support into the nonnegative orthant.
struct TotalDegreeStart {
  SparseSystem shifted;
  SparseSystem start;
  std::vector<Point> solutions;
};

inline TotalDegreeStart total_degree_start(const SparseSystem& F) {
  const std::size_t n = F.size();
  std::vector<SparsePolynomial> shifted, start;
  std::vector<std::int64_t> degrees;
  for (const auto& p : F.polynomials()) {
    Exponent lo(n, std::numeric_limits<std::int64_t>::max());
    for (const auto& t : p.terms())
      for (std::size_t i = 0; i < n; ++i) lo[i] = std::min(lo[i], t.exponent[i]);
    std::vector<Term> terms;
    for (const auto& t : p.terms()) {
      Exponent e = t.exponent;
      for (std::size_t i = 0; i < n; ++i) e[i] -= lo[i];
      terms.push_back({t.coeff, std::move(e)});
    }
    shifted.emplace_back(n, terms);
    degrees.push_back(std::max<std::int64_t>(1, shifted.back().total_degree()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Exponent e(n, 0);
    e[i] = degrees[i];
    start.emplace_back(n, std::vector<Term>{{Complex(1.0), e}, {Complex(-1.0), Exponent(n, 0)}});
  }

  std::size_t total = 1;
  for (auto d : degrees) total *= static_cast<std::size_t>(d);
  std::vector<Point> sols;
  sols.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point x(static_cast<Eigen::Index>(n));
    std::size_t rem = idx;
    for (std::size_t i = n; i-- > 0;) {
      const auto d = static_cast<std::size_t>(degrees[i]);
      const std::size_t k = rem % d;
      rem /= d;
      x[static_cast<Eigen::Index>(i)] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
    }
    sols.push_back(std::move(x));
  }
  return {SparseSystem(std::move(shifted), F.variables()), SparseSystem(std::move(start), F.variables()),
          std::move(sols)};
}

// Total-degree homotopy on a random affine chart of projective space. With
// X = (x0, x1, ..., xn), each shifted f_i of degree d_i is homogenized and the
// chart equation a . X = 1 is appended. Paths heading to infinity stay bounded
// (x0 -> 0) instead of crowding the finite endpoints.
struct ProjectiveStart {
  SparseSystem start;
  SparseSystem target;
  std::vector<Point> solutions;
};

inline ProjectiveStart projective_total_degree_start(const SparseSystem& F, std::mt19937_64& rng) {
  const std::size_t n = F.size();
  const auto td = total_degree_start(F);
  std::vector<Complex> chart(n + 1);
  for (auto& a : chart) a = detail::random_unit(rng);
  std::vector<Term> chart_terms;
  for (std::size_t j = 0; j <= n; ++j) {
    Exponent e(n + 1, 0);
    e[j] = 1;
    chart_terms.push_back({chart[j], std::move(e)});
  }
  chart_terms.push_back({Complex(-1.0), Exponent(n + 1, 0)});

  auto homogenize = [n](const SparsePolynomial& p, std::int64_t degree) {
    std::vector<Term> terms;
    for (const auto& t : p.terms()) {
      Exponent e(n + 1, 0);
      std::int64_t total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        e[i + 1] = t.exponent[i];
        total += t.exponent[i];
      }
      e[0] = degree - total;
      terms.push_back({t.coeff, std::move(e)});
    }
    return SparsePolynomial(n + 1, terms);
  };

  std::vector<SparsePolynomial> start, target;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t d = td.start[i].terms()[0].exponent[i];
    target.push_back(homogenize(td.shifted[i], d));
    start.push_back(homogenize(td.start[i], d));
  }
  start.emplace_back(n + 1, chart_terms);
  target.emplace_back(n + 1, chart_terms);

  std::vector<Point> sols;
  sols.reserve(td.solutions.size());
  for (const auto& x : td.solutions) {
    Point X(static_cast<Eigen::Index>(n + 1));
    X[0] = 1.0;
    X.tail(static_cast<Eigen::Index>(n)) = x;
    Complex dot(0.0);
    for (std::size_t j = 0; j <= n; ++j) dot += chart[j] * X[static_cast<Eigen::Index>(j)];
    sols.push_back(X / dot);
  }
  std::vector<std::string> names{"x0"};
  for (const auto& v : F.variables()) names.push_back(v);
  return {SparseSystem(std::move(start), names), SparseSystem(std::move(target), names), std::move(sols)};
}

// Built-in base solver: gamma-trick total-degree homotopy over all Bezout
// paths in projective coordinates, keeping converged finite torus endpoints.
inline std::vector<Root> solve_base_system_roots(const SparseSystem& F, const TrackerConfig& cfg,
                                                 double tolerance = 1e-5, PathStats* stats = nullptr) {
  std::mt19937_64 rng(cfg.seed);
  const Complex gamma = detail::random_unit(rng);
  const auto ps = projective_total_degree_start(F, rng);
  const LinearHomotopy h(ps.start, ps.target, gamma);
  const auto n = static_cast<Eigen::Index>(F.size());
  auto to_affine = [n](const Point& X) -> std::optional<Point> {
    if (!(std::abs(X[0]) > 1e-8 * X.norm())) return std::nullopt;
    return Point(X.tail(n) / X[0]);
  };
  return detail::track_all(h, ps.solutions, F, cfg, tolerance, stats, to_affine);
}

inline std::vector<Point> solve_base_system(const SparseSystem& F, const TrackerConfig& cfg, double tolerance = 1e-5) {
  return points_of(solve_base_system_roots(F, cfg, tolerance));
}

inline bool same_supports(const SparseSystem& a, const SparseSystem& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].exponents() != b[i].exponents()) return false;
  return true;
}

// Moves known solutions of `start` to solutions of `target` (same supports)
// along gamma (1 - t) start + t target.
inline std::vector<Root> parameter_homotopy_roots(const SparseSystem& start, const std::vector<Point>& start_solutions,
                                                  const SparseSystem& target, const TrackerConfig& cfg,
                                                  double tolerance = 1e-5, PathStats* stats = nullptr) {
  if (!same_supports(start, target)) throw std::invalid_argument("parameter homotopy needs identical supports");
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const Complex gamma = detail::random_unit(rng);
  const LinearHomotopy h(start, target, gamma);
  return detail::track_all(h, start_solutions, target, cfg, tolerance, stats);
}

inline std::vector<Point> parameter_homotopy(const SparseSystem& start, const std::vector<Point>& start_solutions,
                                             const SparseSystem& target, const TrackerConfig& cfg,
                                             double tolerance = 1e-5) {
  return points_of(parameter_homotopy_roots(start, start_solutions, target, cfg, tolerance));
}

}  // namespace sparsedecomp
