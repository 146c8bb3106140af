#pragma once

// Helpers shared by the unit tests and the acceptance driver.

#include "sparsedecomp/sparsedecomp.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing_support {

namespace sd = sparsedecomp;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline sd::SparseSystem fixture(const std::string& name) {
  return sd::parse_system(read_file(std::string(FIXTURE_DIR) + "/" + name + ".txt"));
}

inline sd::IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> entry(lo, hi);
  sd::IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = entry(rng);
  return m;
}

inline bool is_unimodular(const sd::IntMatrix& M) {
  const auto d = sd::determinant(M);
  return d == 1 || d == -1;
}

// D = U A V, U and V unimodular, D diagonal with d_1 | d_2 | ... and d_i >= 0.
inline bool valid_smith(const sd::IntMatrix& A, const sd::SmithDecomposition& s, std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!(s.U * A * s.V == s.D)) return fail("D != U A V");
  if (!is_unimodular(s.U) || !is_unimodular(s.V)) return fail("transform not unimodular");
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j && s.D(i, j) != 0) return fail("off-diagonal entry");
  const auto d = s.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 0) return fail("negative diagonal entry");
    if (i + 1 < d.size()) {
      if (d[i] == 0 && d[i + 1] != 0) return fail("zero before nonzero");
      if (d[i] != 0 && d[i + 1] % d[i] != 0) return fail("divisibility chain broken");
    }
  }
  return true;
}

inline sd::Point random_torus_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> radius(0.5, 2.0), angle(0.0, 6.283185307179586);
  sd::Point x(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = std::polar(radius(rng), angle(rng));
  return x;
}

// Same supports, coefficients drawn from a complex Gaussian.
inline sd::SparseSystem randomize(const sd::SparseSystem& F, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  auto c = F.coefficients();
  for (auto& row : c)
    for (auto& v : row) v = {g(rng), g(rng)};
  return F.with_coefficients(c);
}

// Every point of `a` has a partner in `b` within `tol` (and vice versa, same size).
inline bool same_point_sets(const std::vector<sd::Point>& a, const std::vector<sd::Point>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<char> used(b.size(), 0);
  for (const auto& x : a) {
    bool hit = false;
    for (std::size_t j = 0; j < b.size() && !hit; ++j)
      if (!used[j] && (x - b[j]).norm() <= tol * (1.0 + x.norm())) used[j] = hit = true;
    if (!hit) return false;
  }
  return true;
}

inline std::vector<sd::Point> points(const sd::SolveReport& r) {
  std::vector<sd::Point> out;
  for (const auto& s : r.solutions) out.push_back(s.point);
  return out;
}

// Random square system with a lacunary or triangular structure, random complex
// coefficients and mixed volume in [1, max_mv]. Supports live in a small box and
// are pushed through a random monomial map.
inline sd::SparseSystem random_decomposable_system(std::mt19937_64& rng, std::size_t n, int max_mv) {
  std::uniform_int_distribution<int> coord(0, 2), pick(0, 1), small(-1, 1), scale(2, 3);
  std::normal_distribution<double> g;
  while (true) {
    const bool lacunary = pick(rng) == 1;
    std::vector<std::vector<sd::Exponent>> supports(n);
    for (std::size_t i = 0; i < n; ++i) {
      supports[i].push_back(sd::Exponent(n, 0));
      for (int t = 0; t < 3; ++t) {
        sd::Exponent e(n);
        for (auto& v : e) v = coord(rng);
        // Triangular: the first polynomial only involves the first variable.
        if (!lacunary && i == 0)
          for (std::size_t r = 1; r < n; ++r) e[r] = 0;
        supports[i].push_back(e);
      }
    }
    sd::IntMatrix M = sd::IntMatrix::identity(n);
    if (lacunary) M(n - 1, n - 1) = scale(rng);
    sd::IntMatrix mix = sd::IntMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) mix(i, j) = small(rng);
    sd::IntMatrix shuffle = sd::IntMatrix::identity(n);
    if (pick(rng)) shuffle.swap_rows(0, n - 1);
    const sd::IntMatrix map = shuffle * mix * M;

    std::vector<sd::SparsePolynomial> polys;
    for (const auto& S : supports) {
      std::vector<sd::Term> terms;
      for (const auto& e : S) terms.push_back({{g(rng), g(rng)}, sd::to_exponent(map * sd::to_integers(e))});
      polys.emplace_back(n, terms);
    }
    sd::SparseSystem F(std::move(polys));
    try {
      if (!sd::is_decomposable(sd::exponents(F))) continue;
      const auto mv = sd::mixed_volume(sd::exponents(F));
      if (mv >= 1 && mv <= max_mv) return F;
    } catch (const sd::RankDeficient&) {
    }
  }
}

struct CommandResult {
  int status = -1;
  std::string output;
};

inline CommandResult run(const std::string& command) {
  CommandResult r;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  const int status = ::pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace testing_support
