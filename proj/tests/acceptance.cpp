// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>

using namespace sparsedecomp;
namespace ts = testing_support;

namespace {

// Pinned tolerances and budgets.
constexpr int kSnfTrials = 500;
constexpr double kSnfSeconds = 10.0;
constexpr double kRoundTripTol = 1e-10;
constexpr double kSolutionResidual = 1e-8;
constexpr double kPointSetTol = 1e-6;
constexpr double kThreeVarSeconds = 60.0;
constexpr int kGenericTrials = 20;
constexpr int kGenericRequired = 19;
constexpr double kFibreTol = 1e-10;
constexpr double kRootTol = 1e-10;
constexpr double kUnivariateBound = 1e-8;

const std::string kCli = CLI_PATH;
const std::string kData = FIXTURE_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double relative_gap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).norm() / (1.0 + a.norm());
}

// 1. SNF identity, unimodularity and divisibility on random matrices.
Outcome snf_suite() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  const auto start = Clock::now();
  int bad = 0;
  std::string why;
  for (int t = 0; t < kSnfTrials; ++t) {
    const auto A = ts::random_matrix(rng, dim(rng), dim(rng), -20, 20);
    if (!ts::valid_smith(A, smith_normal_form(A), &why)) ++bad;
  }
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << kSnfTrials - bad << "/" << kSnfTrials << " valid in " << std::fixed << std::setprecision(2) << secs << " s";
  if (bad) os << " (last: " << why << ")";
  return {bad == 0 && secs < kSnfSeconds, os.str()};
}

// 2. Lacunary example: detection, index and decomposition round trip.
Outcome lacunary_example() {
  const auto F = ts::fixture("lacunary");
  const auto supports = exponents(F);
  const auto check = is_lacunary(supports);

  // Oracle: every support difference (a, b) satisfies a + b = 0 mod 3.
  bool in_sublattice = true;
  for (const auto& S : supports)
    for (std::size_t j = 0; j < S.cols(); ++j)
      for (std::size_t k = 0; k < S.cols(); ++k)
        if (((S(0, j) - S(0, k)) + (S(1, j) - S(1, k))) % 3 != 0) in_sublattice = false;

  const auto dec = lacunary_decomposition(F);
  const auto shifts = translate_to_origin(F).translations;
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Point x = ts::random_torus_point(rng, 2);
    const Eigen::VectorXcd direct = evaluate(F, x);
    Eigen::VectorXcd composed = evaluate(dec.inner, map_point(dec.phi, x));
    for (Eigen::Index j = 0; j < composed.size(); ++j) composed[j] *= monomial(x, shifts[static_cast<std::size_t>(j)]);
    worst = std::max(worst, relative_gap(direct, composed));
  }
  std::ostringstream os;
  os << "lacunary=" << check.lacunary << " index=" << check.index << " oracle_membership=" << in_sublattice
     << " round_trip_err=" << std::scientific << std::setprecision(2) << worst;
  return {check.lacunary && check.index == 3 && in_sublattice && worst <= kRoundTripTol, os.str()};
}

// 3. Triangular example: subset {second polynomial}, rank 1, univariate after the change.
Outcome triangular_example() {
  const auto F = ts::fixture("triangular");
  const auto check = is_triangular(exponents(F));
  if (!check) return {false, "not detected as triangular"};
  const auto dec = triangular_decomposition(F);
  const auto changed = apply_monomial_substitution(translate_to_origin(F).system, dec.change);
  bool zero_rows = true;
  for (std::size_t i : dec.subset)
    for (const auto& t : changed[i].terms())
      for (std::size_t r = dec.k; r < F.size(); ++r) zero_rows = zero_rows && t.exponent[r] == 0;
  std::ostringstream os;
  os << "subset={" << check->subset[0] << "} (0-based) rank=" << check->rank << " trailing_rows_zero=" << zero_rows;
  return {check->subset == std::vector<std::size_t>{1} && check->rank == 1 && zero_rows &&
              dec.subsystem.size() == 1,
          os.str()};
}

// 4. Three-variable example: both structures, full solve against the raw base solver.
Outcome threevar() {
  const auto start = Clock::now();
  const auto F = ts::fixture("threevar");
  const auto supports = exponents(F);
  const bool decomposable = is_decomposable(supports);
  const auto lac = is_lacunary(supports);
  const auto tri = is_triangular(supports);
  const auto mv = mixed_volume(supports);

  SolveOptions opts;
  const auto report = solve_decomposable_system(F, opts);
  double worst = 0.0;
  for (const auto& s : report.solutions) worst = std::max(worst, s.residual);
  const auto raw = solve_base_system(F, opts.tracker, opts.tolerance);
  const bool agree = ts::same_point_sets(ts::points(report), raw, kPointSetTol);
  const double secs = seconds_since(start);

  const bool subset_ok = tri && tri->subset == std::vector<std::size_t>{0, 2};
  std::ostringstream os;
  os << "decomposable=" << decomposable << " index=" << lac.index << " triangular_subset_ok=" << subset_ok
     << " count=" << report.solutions.size() << " mv=" << mv << " raw=" << raw.size() << " agree=" << agree
     << " max_residual=" << std::scientific << std::setprecision(2) << worst << std::fixed << " time=" << secs << "s";
  // Mixed volume 12 is the value of an independent hull-based computation.
  return {decomposable && lac.index == 3 && subset_ok && mv == 12 && Integer(report.solutions.size()) == mv &&
              raw.size() == report.solutions.size() && agree && worst <= kSolutionResidual &&
              secs < kThreeVarSeconds,
          os.str()};
}

// 5. Random coefficients on fixed supports reach the mixed volume and never exceed it.
Outcome generic_counts() {
  std::mt19937_64 rng(5150);
  std::ostringstream os;
  bool pass = true;
  for (const char* name : {"shared15", "lacunary", "triangular", "threevar"}) {
    const auto F = ts::fixture(name);
    const auto mv = mixed_volume(exponents(F));
    int hits = 0, over = 0;
    for (int t = 0; t < kGenericTrials; ++t) {
      const auto G = ts::randomize(F, rng);
      SolveOptions opts;
      opts.tracker.seed = 1000 + static_cast<std::uint64_t>(t);
      const auto count = Integer(solve_decomposable_system(G, opts).solutions.size());
      if (count == mv) ++hits;
      if (count > mv) ++over;
    }
    os << name << "=" << hits << "/" << kGenericTrials << (over ? " OVER" : "") << " ";
    pass = pass && hits >= kGenericRequired && over == 0;
  }
  return {pass, os.str()};
}

// Twice the area of the convex hull of integer points (monotone chain + shoelace).
long long twice_area(std::vector<std::pair<long long, long long>> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return 0;
  auto cross = [](auto o, auto a, auto b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<long long, long long>> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  long long a = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& u = h[i];
    const auto& v = h[(i + 1) % h.size()];
    a += u.first * v.second - v.first * u.second;
  }
  return a < 0 ? -a : a;
}

// 6. Mixed volume against planar areas, simplices and segments.
Outcome mixed_volume_suite() {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> coord(0, 6), count(2, 6);
  int planar_ok = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::pair<long long, long long>> P, Q, PQ;
    for (int i = count(rng); i > 0; --i) P.push_back({coord(rng), coord(rng)});
    for (int i = count(rng); i > 0; --i) Q.push_back({coord(rng), coord(rng)});
    for (auto a : P)
      for (auto b : Q) PQ.push_back({a.first + b.first, a.second + b.second});
    const long long twice = twice_area(PQ) - twice_area(P) - twice_area(Q);
    auto to_matrix = [](const std::vector<std::pair<long long, long long>>& pts) {
      std::vector<std::vector<long long>> cols;
      for (auto [a, b] : pts) cols.push_back({a, b});
      return IntMatrix::from_columns(2, cols);
    };
    if (twice % 2 == 0 && mixed_volume({to_matrix(P), to_matrix(Q)}) == twice / 2) ++planar_ok;
  }
  int simplex_ok = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    IntMatrix S(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) S(i, i + 1) = 1;
    if (mixed_volume(std::vector<IntMatrix>(n, S)) == 1) ++simplex_ok;
  }
  int segment_ok = 0;
  for (long long d = 1; d <= 10; ++d)
    if (mixed_volume({IntMatrix{{0, d}}}) == d) ++segment_ok;
  std::ostringstream os;
  os << "planar " << planar_ok << "/50, simplices " << simplex_ok << "/4, segments " << segment_ok << "/10";
  return {planar_ok == 50 && simplex_ok == 4 && segment_ok == 10, os.str()};
}

// 7. Fibres of random monomial maps.
Outcome fibres() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> entry(-3, 3), dim(2, 3);
  int ok = 0, trials = 0;
  double worst = 0.0;
  while (trials < 100) {
    const auto n = static_cast<std::size_t>(dim(rng));
    IntMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) M(i, j) = entry(rng);
    const Integer det = determinant(M);
    const Integer size = det < 0 ? Integer(-det) : det;
    if (size == 0 || size > 12) continue;
    ++trials;
    const MonomialMap phi(M);
    const Point z = ts::random_torus_point(rng, n);
    const auto pts = preimages(phi, z);
    bool distinct = true;
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) distinct = distinct && (pts[a] - pts[b]).norm() > 1e-8;
    double err = 0.0;
    for (const auto& p : pts) err = std::max(err, relative_gap(z, map_point(phi, p)));
    worst = std::max(worst, err);
    if (Integer(pts.size()) == size && distinct && err <= kFibreTol) ++ok;
  }
  std::ostringstream os;
  os << ok << "/100 exact fibres, max forward err " << std::scientific << std::setprecision(2) << worst;
  return {ok == 100, os.str()};
}

// 8. Companion-matrix roots.
Outcome univariate() {
  int cyclo_ok = 0;
  for (int d = 1; d <= 16; ++d) {
    std::vector<Complex> c(static_cast<std::size_t>(d) + 1, Complex(0.0));
    c.front() = -1.0;
    c.back() = 1.0;
    const auto roots = univariate_roots(c);
    bool all = roots.size() == static_cast<std::size_t>(d);
    for (int k = 0; k < d && all; ++k) {
      const Complex exact = std::polar(1.0, 2.0 * std::numbers::pi * k / d);
      double best = 1.0;
      for (const auto& r : roots) best = std::min(best, std::abs(r - exact));
      all = best <= kRootTol;
    }
    if (all) ++cyclo_ok;
  }
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> radius(0.0, 1.0), angle(0.0, 2.0 * std::numbers::pi);
  int random_ok = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<Complex> c(13);
    for (auto& v : c) v = std::polar(std::sqrt(radius(rng)), angle(rng));
    double cmax = 0.0;
    for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
    const auto roots = univariate_roots(c);
    bool all = roots.size() == 12;
    for (const auto& r : roots) {
      Complex p(0.0);
      for (std::size_t i = c.size(); i-- > 0;) p = p * r + c[i];
      all = all && std::abs(p) <= kUnivariateBound * cmax * std::pow(std::max(1.0, std::abs(r)), 12);
    }
    if (all) ++random_ok;
  }
  std::ostringstream os;
  os << "cyclotomic " << cyclo_ok << "/16, random degree-12 " << random_ok << "/200";
  return {cyclo_ok == 16 && random_ok == 200, os.str()};
}

// 9. Direct and from-generic strategies agree.
Outcome strategies() {
  std::mt19937_64 rng(909);
  int ok = 0;
  std::ostringstream os;
  for (int t = 0; t < 10; ++t) {
    const auto F = ts::random_decomposable_system(rng, t % 2 ? 3 : 2, 30);
    SolveOptions direct, generic;
    generic.strategy = Strategy::FromGeneric;
    const auto a = solve_decomposable_system(F, direct);
    const auto b = solve_decomposable_system(F, generic);
    const bool same = ts::same_point_sets(ts::points(a), ts::points(b), kPointSetTol);
    if (same) ++ok;
    os << a.solutions.size() << (same ? "=" : "!=") << b.solutions.size() << " ";
  }
  return {ok == 10, std::to_string(ok) + "/10 identical (" + os.str() + ")"};
}

// 10. Byte-identical CLI output across runs and worker counts.
Outcome determinism() {
  bool same = true;
  std::ostringstream os;
  for (const char* name : {"generic", "threevar", "shared15"}) {
    const std::string base = kCli + " solve --seed 42 --verify --trace -i " + kData + "/" + name + ".txt";
    const auto a = ts::run(base + " --workers 1");
    const auto b = ts::run(base + " --workers 1");
    const auto c = ts::run(base + " --workers 4");
    const bool ok = a.status == 0 && !a.output.empty() && a.output == b.output && a.output == c.output;
    same = same && ok;
    os << name << (ok ? " identical " : " DIFFERS ");
  }
  return {same, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"SNF property suite", snf_suite},
      {"lacunary example", lacunary_example},
      {"triangular example", triangular_example},
      {"three-variable example", threevar},
      {"generic root count equals mixed volume", generic_counts},
      {"mixed volume correctness", mixed_volume_suite},
      {"fibre extraction", fibres},
      {"univariate solver", univariate},
      {"strategy equivalence", strategies},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto start = Clock::now();
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << i + 1 << ". " << criteria[i].first << ": "
              << out.detail << std::fixed << std::setprecision(1) << " [" << seconds_since(start) << " s]" << std::endl;
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed" : "acceptance: all passed")
            << std::endl;
  return failures ? 1 : 0;
}
