#pragma once

// Recursive solver for decomposable sparse systems. Each node translates its
// system to the origin and then
//   - n = 1:       companion-matrix roots,
//   - lacunary:    solves G and pulls every solution back through phi,
//   - triangular:  solves the k-variable subsystem, solves one residual
//                  system directly and moves its solutions to the other
//                  residual instances by parameter homotopy,
//   - otherwise:   calls the base solver (built-in or external).
// Every node polishes, drops points with a coordinate within `tolerance`
// of zero, and merges duplicates.

#include "sparsedecomp/decompose.hpp"
#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/external.hpp"
#include "sparsedecomp/mixed_volume.hpp"
#include "sparsedecomp/numeric.hpp"
#include "sparsedecomp/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sparsedecomp {

enum class Strategy { Direct, FromGeneric };

struct SolveOptions {
  double tolerance = 1e-5;  // coordinates with |x_i| <= tolerance are treated as zero
  bool verify = false;
  Strategy strategy = Strategy::Direct;
  std::string external_command;  // empty: built-in base solver
  double external_timeout = 600.0;
  TrackerConfig tracker;
  std::size_t max_verify_retries = 3;
  BranchOrder branch_order = BranchOrder::LacunaryFirst;

  void validate() const {
    if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
    tracker.validate();
  }
};

struct TraceNode {
  enum class Kind { Lacunary, Triangular, Base, Univariate };
  Kind kind = Kind::Base;
  std::int64_t value = 0;  // index, k, n or degree
  std::size_t solutions = 0;
  std::vector<TraceNode> children;
};

inline const char* to_string(TraceNode::Kind k) {
  switch (k) {
    case TraceNode::Kind::Lacunary: return "lacunary";
    case TraceNode::Kind::Triangular: return "triangular";
    case TraceNode::Kind::Base: return "base";
    case TraceNode::Kind::Univariate: return "univariate";
  }
  return "?";
}

struct TorusSolution {
  Point point;
  double residual = 0.0;  // max_i |f_i(point)| on the input system
  std::size_t multiplicity_hint = 1;
};

struct SolveReport {
  std::vector<TorusSolution> solutions;
  std::optional<Integer> mixed_volume;
  std::optional<std::int64_t> deficiency;
  std::size_t verify_retries = 0;
  TraceNode trace;
};

// Fibre of phi over z: exactly |det phi| points p with map_point(phi, p) = z.
inline std::vector<Point> preimages(const MonomialMap& phi, const Point& z) {
  require_torus(z);
  const std::size_t n = phi.dimension();
  const auto snf = smith_normal_form(phi.matrix());
  // phi = U^-1 D V^-1: w = map_point(U^-1, x) has w_j^{d_j} = map_point(V, z)_j.
  const Point u = map_point(MonomialMap(snf.V), z);
  std::vector<std::vector<Complex>> roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto d = to_int64(snf.D(j, j));
    const Complex uj = u[static_cast<Eigen::Index>(j)];
    const Complex principal = std::polar(std::pow(std::abs(uj), 1.0 / static_cast<double>(d)),
                                         std::arg(uj) / static_cast<double>(d));
    for (std::int64_t k = 0; k < d; ++k)
      roots[j].push_back(principal * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                                         static_cast<double>(d)));
  }
  std::vector<Point> out;
  const MonomialMap back(snf.U);
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Point w(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) w[static_cast<Eigen::Index>(j)] = roots[j][idx[j]];
    out.push_back(map_point(back, w));
    std::size_t j = n;
    while (j > 0 && ++idx[j - 1] == roots[j - 1].size()) idx[--j] = 0;
    if (j == 0) break;
  }
  return out;
}

// Substitutes the first k coordinates by z in polynomials of n variables.
inline SparseSystem residual_system(const std::vector<SparsePolynomial>& remainder, const Point& z, std::size_t k,
                                    const std::vector<std::string>& names) {
  std::vector<SparsePolynomial> polys;
  for (const auto& p : remainder) {
    const std::size_t n = p.dimension();
    std::vector<Term> terms;
    for (const auto& t : p.terms()) {
      Exponent head(t.exponent.begin(), t.exponent.begin() + static_cast<long>(k));
      Exponent tail(t.exponent.begin() + static_cast<long>(k), t.exponent.end());
      terms.push_back({t.coeff * monomial(z, head), std::move(tail)});
    }
    polys.emplace_back(n - k, terms);
  }
  return SparseSystem(std::move(polys), names);
}

namespace detail {

constexpr double kNodeResidual = 1e-6;
constexpr double kFinalResidual = 1e-8;

inline std::uint64_t retry_seed(std::uint64_t seed, std::size_t attempt) {
  return seed + 0x2545f4914f6cdd1dULL * static_cast<std::uint64_t>(attempt);
}

// Polish against T, keep torus points with small scaled residual, merge.
inline std::vector<Root> clean(const SparseSystem& T, const std::vector<Root>& roots, double tolerance,
                               double max_residual) {
  std::vector<Root> kept;
  for (const auto& r : roots) {
    if (!in_torus(r.x, tolerance)) continue;
    Point x = polish(T, r.x);
    if (!in_torus(x, tolerance)) continue;
    if (!(relative_residual(T, x) <= max_residual)) continue;
    kept.push_back({std::move(x), r.multiplicity});
  }
  return deduplicate(kept);
}

inline std::vector<Root> merge(std::vector<Root> a, const std::vector<Root>& b) {
  for (const auto& r : b)
    if (std::none_of(a.begin(), a.end(), [&](const Root& k) { return same_point(k.x, r.x); })) a.push_back(r);
  return deduplicate(a);
}

inline std::vector<Root> base_stage(const SparseSystem& T, const SolveOptions& opts) {
  if (opts.external_command.empty()) return solve_base_system_roots(T, opts.tracker, opts.tolerance);
  std::vector<Root> roots;
  for (auto& p : external_solver_adapter(opts.external_command, T, opts.tolerance, opts.external_timeout))
    roots.push_back({std::move(p), 1});
  return roots;
}

inline std::vector<Root> solve_node(const SparseSystem& F, const SolveOptions& opts, TraceNode& trace);

inline std::vector<Root> solve_univariate(const SparseSystem& T, const SolveOptions& opts, TraceNode& trace) {
  // Support already starts at exponent 0 after translation.
  std::int64_t degree = 0;
  for (const auto& t : T[0].terms()) degree = std::max(degree, t.exponent[0]);
  std::vector<Complex> coeffs(static_cast<std::size_t>(degree) + 1, Complex(0.0));
  for (const auto& t : T[0].terms()) coeffs[static_cast<std::size_t>(t.exponent[0])] += t.coeff;
  trace.kind = TraceNode::Kind::Univariate;
  trace.value = degree;
  if (degree == 0) throw RankDeficient(0, 1);
  std::vector<Root> roots;
  for (const Complex& r : univariate_roots(coeffs)) {
    Point x(1);
    x[0] = r;
    roots.push_back({x, 1});
  }
  return roots;
}

inline std::vector<Root> solve_lacunary(const LacunaryDecomposition& dec, const SolveOptions& opts,
                                        TraceNode& trace) {
  trace.kind = TraceNode::Kind::Lacunary;
  trace.value = to_int64(dec.index);
  trace.children.emplace_back();
  const auto inner = solve_node(dec.inner, opts, trace.children.back());
  std::vector<Root> roots;
  for (const auto& z : inner) {
    if (!in_torus(z.x, 0.0)) continue;
    for (auto& p : preimages(dec.phi, z.x)) roots.push_back({std::move(p), z.multiplicity});
  }
  return roots;
}

inline std::vector<Root> solve_triangular(const TriangularDecomposition& dec, const SolveOptions& opts,
                                          TraceNode& trace) {
  const std::size_t n = dec.change.dimension(), k = dec.k;
  trace.kind = TraceNode::Kind::Triangular;
  trace.value = static_cast<std::int64_t>(k);
  trace.children.emplace_back();
  const auto heads = solve_node(dec.subsystem, opts, trace.children.back());

  std::vector<std::string> tail_names;
  for (std::size_t i = k; i < n; ++i) tail_names.push_back("y" + std::to_string(i + 1));

  // Residual instances that cannot be formed (all terms cancel) or are
  // degenerate carry no isolated solutions.
  auto residual_for = [&](const Root& z) -> std::optional<SparseSystem> {
    try {
      return residual_system(dec.remainder, z.x, k, tail_names);
    } catch (const EmptyPolynomial&) {
      return std::nullopt;
    }
  };
  auto solve_direct = [&](const SparseSystem& R, TraceNode& node) -> std::vector<Root> {
    try {
      return solve_node(R, opts, node);
    } catch (const RankDeficient&) {
      return {};
    }
  };

  std::vector<Root> assembled;
  auto assemble = [&](const Root& z, const std::vector<Root>& tails) {
    for (const auto& w : tails) {
      Point y(static_cast<Eigen::Index>(n));
      y << z.x, w.x;
      assembled.push_back({map_point(dec.change, y), z.multiplicity * w.multiplicity});
    }
  };

  std::optional<SparseSystem> anchor;
  std::vector<Root> anchor_roots;
  for (const auto& z : heads) {
    auto R = residual_for(z);
    if (!R) continue;
    if (!anchor) {
      trace.children.emplace_back();
      anchor_roots = solve_direct(*R, trace.children.back());
      if (anchor_roots.empty()) continue;  // try the next instance as anchor
      anchor = *R;
      assemble(z, anchor_roots);
      continue;
    }
    std::vector<Root> tails;
    if (same_supports(*anchor, *R)) {
      tails = parameter_homotopy_roots(*anchor, points_of(anchor_roots), *R, opts.tracker, opts.tolerance);
      tails = clean(*R, tails, opts.tolerance, kNodeResidual);
    }
    if (tails.size() < anchor_roots.size()) {
      // Support changed (a coefficient vanished) or paths were lost: solve from scratch.
      TraceNode scratch;
      tails = merge(tails, solve_direct(*R, scratch));
    }
    assemble(z, tails);
  }
  return assembled;
}

// Same supports as F, coefficients uniformly random on the unit circle.
inline SparseSystem random_instance(const SparseSystem& F, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto coeffs = F.coefficients();
  for (auto& row : coeffs)
    for (auto& c : row) c = random_unit(rng);
  return F.with_coefficients(coeffs);
}

// Solves a random instance on T's supports and moves its roots to T. Recovers
// badly scaled roots of T that total-degree paths cannot separate.
inline std::vector<Root> generic_stage(const SparseSystem& T, const SolveOptions& opts) {
  const SparseSystem G = random_instance(T, opts.tracker.seed ^ 0xbb67ae8584caa73bULL);
  std::vector<Point> starts;
  for (const auto& r : clean(G, base_stage(G, opts), opts.tolerance, kNodeResidual)) starts.push_back(r.x);
  return parameter_homotopy_roots(G, starts, T, opts.tracker, opts.tolerance);
}

inline std::vector<Root> solve_base(const SparseSystem& T, const SolveOptions& opts, TraceNode& trace) {
  trace.kind = TraceNode::Kind::Base;
  trace.value = static_cast<std::int64_t>(T.size());
  auto roots = clean(T, base_stage(T, opts), opts.tolerance, kNodeResidual);
  const Integer bound = mixed_volume(exponents(T));
  if (Integer(roots.size()) < bound) roots = merge(roots, clean(T, generic_stage(T, opts), opts.tolerance, kNodeResidual));
  if (!opts.verify) return roots;
  for (std::size_t attempt = 1; attempt <= opts.max_verify_retries && Integer(roots.size()) < bound; ++attempt) {
    SolveOptions retry = opts;
    retry.tracker.seed = retry_seed(opts.tracker.seed, attempt);
    roots = merge(roots, clean(T, base_stage(T, retry), opts.tolerance, kNodeResidual));
  }
  return roots;
}

inline std::vector<Root> solve_node(const SparseSystem& F, const SolveOptions& opts, TraceNode& trace) {
  const SparseSystem T = translate_to_origin(F).system;
  std::vector<Root> roots;
  if (T.size() == 1) {
    roots = solve_univariate(T, opts, trace);
  } else {
    const Decomposition dec = decompose(T, opts.branch_order);
    if (const auto* lac = std::get_if<LacunaryDecomposition>(&dec))
      roots = solve_lacunary(*lac, opts, trace);
    else if (const auto* tri = std::get_if<TriangularDecomposition>(&dec))
      roots = solve_triangular(*tri, opts, trace);
    else
      roots = solve_base(T, opts, trace);
  }
  roots = clean(T, roots, opts.tolerance, kNodeResidual);
  trace.solutions = roots.size();
  return roots;
}

inline SolveReport make_report(const SparseSystem& F, const std::vector<Root>& roots, const SolveOptions& opts) {
  SolveReport report;
  for (const auto& r : clean(F, roots, opts.tolerance, kFinalResidual))
    report.solutions.push_back({r.x, residual(F, r.x), r.multiplicity});
  return report;
}

inline std::vector<Root> roots_of(const SolveReport& report) {
  std::vector<Root> out;
  for (const auto& s : report.solutions) out.push_back({s.point, s.multiplicity_hint});
  return out;
}

inline SolveReport solve_direct(const SparseSystem& F, const SolveOptions& opts) {
  TraceNode trace;
  const auto roots = solve_node(F, opts, trace);
  SolveReport report = make_report(F, roots, opts);
  report.trace = std::move(trace);
  return report;
}

}  // namespace detail

inline SolveReport verify_count(const SparseSystem& F, const SolveReport& found, const SolveOptions& opts);

// Solves a random instance on F's supports, then moves its solutions to F by
// parameter homotopy.
inline SolveReport solve_from_generic(const SparseSystem& F, const SolveOptions& opts) {
  opts.validate();
  const SparseSystem generic = detail::random_instance(F, opts.tracker.seed ^ 0x6a09e667f3bcc909ULL);
  SolveOptions direct = opts;
  direct.strategy = Strategy::Direct;
  direct.verify = false;
  const SolveReport start = detail::solve_direct(generic, direct);
  std::vector<Point> starts;
  for (const auto& s : start.solutions) starts.push_back(s.point);
  const auto moved = parameter_homotopy_roots(generic, starts, F, opts.tracker, opts.tolerance);
  SolveReport report = detail::make_report(F, moved, opts);
  report.trace = start.trace;
  return opts.verify ? verify_count(F, report, opts) : report;
}

// Compares the count against the mixed volume; while short, re-solves with
// fresh gamma values and merges new distinct solutions. A remaining shortfall
// is reported as the deficiency.
inline SolveReport verify_count(const SparseSystem& F, const SolveReport& found, const SolveOptions& opts) {
  SolveReport report = found;
  const Integer mv = mixed_volume(exponents(F));
  report.mixed_volume = mv;
  auto roots = detail::roots_of(report);
  for (std::size_t attempt = 1; attempt <= opts.max_verify_retries && Integer(roots.size()) < mv; ++attempt) {
    SolveOptions retry = opts;
    retry.verify = false;
    retry.tracker.seed = detail::retry_seed(opts.tracker.seed, 1000 + attempt);
    const SolveReport extra =
        opts.strategy == Strategy::FromGeneric ? solve_from_generic(F, retry) : detail::solve_direct(F, retry);
    roots = detail::merge(roots, detail::roots_of(extra));
    ++report.verify_retries;
  }
  if (report.verify_retries > 0) {
    auto trace = std::move(report.trace);
    const auto retries = report.verify_retries;
    report = detail::make_report(F, roots, opts);
    report.trace = std::move(trace);
    report.verify_retries = retries;
    report.mixed_volume = mv;
  }
  report.deficiency = to_int64(mv) - static_cast<std::int64_t>(report.solutions.size());
  return report;
}

inline SolveReport solve_decomposable_system(const SparseSystem& F, const SolveOptions& opts = {}) {
  opts.validate();
  if (opts.strategy == Strategy::FromGeneric) return solve_from_generic(F, opts);
  SolveReport report = detail::solve_direct(F, opts);
  return opts.verify ? verify_count(F, report, opts) : report;
}

}  // namespace sparsedecomp
