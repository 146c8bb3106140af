#pragma once

// Lacunary / triangular detection and construction. A square sparse system is
// decomposable exactly when one of the two applies.

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/lattice.hpp"
#include "sparsedecomp/polynomial.hpp"

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace sparsedecomp {

namespace detail {

inline std::size_t check_square(const std::vector<IntMatrix>& supports) {
  const std::size_t n = supports.size();
  if (n == 0) throw std::invalid_argument("no supports given");
  for (const auto& A : supports)
    if (A.rows() != n) throw std::invalid_argument("supports do not describe a square system");
  return n;
}

// Columns A_i - a_i for i in subset, a_i the lexicographically smallest column
// of A_i. A single zero column stands in when there are no differences.
inline IntMatrix difference_matrix(const std::vector<IntMatrix>& supports, const std::vector<std::size_t>& subset) {
  const std::size_t n = supports.front().rows();
  std::vector<std::vector<Integer>> cols;
  for (std::size_t i : subset) {
    const IntMatrix& A = supports[i];
    std::size_t base = 0;
    for (std::size_t c = 1; c < A.cols(); ++c)
      if (A.column(c) < A.column(base)) base = c;
    const auto a = A.column(base);
    for (std::size_t c = 0; c < A.cols(); ++c) {
      if (c == base) continue;
      auto col = A.column(c);
      for (std::size_t r = 0; r < n; ++r) col[r] -= a[r];
      cols.push_back(std::move(col));
    }
  }
  if (cols.empty()) cols.emplace_back(n, Integer(0));
  return IntMatrix::from_columns(n, cols);
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Calls visit(subset) on every k-subset of {0..n-1} in lexicographic order
// until it returns true.
template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    if (visit(s)) return true;
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

}  // namespace detail

struct LacunaryCheck {
  bool lacunary = false;
  Integer index = 1;
};

// Full difference lattice must have rank n (else RankDeficient); the system is
// lacunary when its index in Z^n exceeds 1.
inline LacunaryCheck is_lacunary(const std::vector<IntMatrix>& supports) {
  const std::size_t n = detail::check_square(supports);
  const auto snf = smith_normal_form(detail::difference_matrix(supports, detail::all_indices(n)));
  if (snf.rank() < n) throw RankDeficient(snf.rank(), n);
  Integer index = 1;
  for (const auto& d : snf.diagonal())
    if (d != 0) index *= d;
  return {index > 1, index};
}

struct TriangularCheck {
  std::vector<std::size_t> subset;  // 0-based polynomial indices
  std::size_t rank = 0;
};

// First proper subset I (by size, then lexicographically) whose differences
// span a lattice of rank |I|. A subset of smaller rank means the family is not
// dominant and raises RankDeficient.
inline std::optional<TriangularCheck> is_triangular(const std::vector<IntMatrix>& supports) {
  const std::size_t n = detail::check_square(supports);
  const std::size_t full = lattice_rank(detail::difference_matrix(supports, detail::all_indices(n)));
  if (full < n) throw RankDeficient(full, n);
  std::optional<TriangularCheck> found;
  for (std::size_t k = 1; k < n && !found; ++k) {
    detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& s) {
      const std::size_t r = lattice_rank(detail::difference_matrix(supports, s));
      if (r < k) throw RankDeficient(r, k);
      if (r == k) found = TriangularCheck{s, r};
      return found.has_value();
    });
  }
  return found;
}

inline bool is_decomposable(const std::vector<IntMatrix>& supports) {
  return is_lacunary(supports).lacunary || is_triangular(supports).has_value();
}

// F (translated to the origin) equals G composed with phi: the exponents of F
// are phi * (exponents of G).
struct LacunaryDecomposition {
  MonomialMap phi;
  SparseSystem inner;
  Integer index;
  SparseSystem translated;  // F after translate_to_origin
};

inline LacunaryDecomposition lacunary_decomposition(const SparseSystem& system) {
  const auto supports = exponents(system);
  const std::size_t n = system.size();
  if (!is_lacunary(supports).lacunary) throw NotLacunary();

  Translated t = translate_to_origin(system);
  const auto snf = smith_normal_form(detail::difference_matrix(supports, detail::all_indices(n)));
  // A = U^-1 D V^-1, so the lattice spanned by A has basis U^-1 diag(d). An
  // LLL-reduced basis keeps the exponents of the inner system small.
  const IntMatrix raw = inverse_unimodular(snf.U);
  std::vector<std::vector<Integer>> columns(n, std::vector<Integer>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) columns[j][i] = raw(i, j) * snf.D(j, j);
  MonomialMap phi(IntMatrix::from_columns(n, lll_reduce(std::move(columns))));

  std::vector<SparsePolynomial> inner;
  for (const auto& p : t.system.polynomials()) {
    std::vector<Term> terms;
    for (const auto& term : p.terms()) {
      auto beta = solve_integer(phi.matrix(), to_integers(term.exponent));
      if (!beta) throw std::logic_error("exponent outside the support lattice");
      terms.push_back({term.coeff, to_exponent(*beta)});
    }
    inner.emplace_back(n, terms);
  }
  Integer index = phi.det() < 0 ? Integer(-phi.det()) : phi.det();
  return {std::move(phi), SparseSystem(std::move(inner), system.variables()), std::move(index), std::move(t.system)};
}

namespace detail {

// Shortens the rows of a unimodular U whose last n - k rows annihilate the
// subset differences, keeping that block structure: each block is LLL-reduced
// and the leading rows are size-reduced against the trailing ones.
inline IntMatrix reduce_change(const IntMatrix& U, std::size_t k) {
  const std::size_t n = U.rows();
  std::vector<std::vector<Integer>> head, tail;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Integer> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = U(i, j);
    (i < k ? head : tail).push_back(std::move(row));
  }
  tail = lll_reduce(std::move(tail));
  for (auto& h : head) {
    // Babai rounding against the trailing block, last vector first.
    using Q = boost::multiprecision::cpp_rational;
    std::vector<std::vector<Q>> star;
    for (const auto& t : tail) {
      std::vector<Q> v(t.begin(), t.end());
      for (const auto& s : star) {
        Q num = 0, den = 0;
        for (std::size_t c = 0; c < n; ++c) {
          num += Q(t[c]) * s[c];
          den += s[c] * s[c];
        }
        for (std::size_t c = 0; c < n; ++c) v[c] -= num / den * s[c];
      }
      star.push_back(std::move(v));
    }
    for (std::size_t j = tail.size(); j-- > 0;) {
      Q num = 0, den = 0;
      for (std::size_t c = 0; c < n; ++c) {
        num += Q(h[c]) * star[j][c];
        den += star[j][c] * star[j][c];
      }
      const Integer q = round_rational(num / den);
      for (std::size_t c = 0; c < n; ++c) h[c] -= q * tail[j][c];
    }
  }
  head = lll_reduce(std::move(head));
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = i < k ? head[i][j] : tail[i - k][j];
  return out;
}

}  // namespace detail

// After the unimodular exponent change, the polynomials in `subset` only
// involve the first k variables. Solutions of the original system are
// map_point(change, y) for solutions y of the changed system.
struct TriangularDecomposition {
  std::vector<std::size_t> subset;
  std::vector<std::size_t> rest;
  std::size_t k = 0;
  MonomialMap change;
  SparseSystem subsystem;                  // k polynomials in k variables
  std::vector<SparsePolynomial> remainder;  // n - k polynomials in n variables
};

inline TriangularDecomposition triangular_decomposition(const SparseSystem& system) {
  const auto supports = exponents(system);
  const std::size_t n = system.size();
  const auto check = n >= 2 ? is_triangular(supports) : std::nullopt;
  if (!check) throw NotTriangular();
  const std::size_t k = check->rank;

  const auto snf = smith_normal_form(detail::difference_matrix(supports, check->subset));
  MonomialMap change(detail::reduce_change(snf.U, k));
  const SparseSystem changed = apply_monomial_substitution(translate_to_origin(system).system, change);

  std::vector<SparsePolynomial> sub;
  std::vector<std::string> sub_names(system.variables().begin(), system.variables().begin() + static_cast<long>(k));
  for (std::size_t i : check->subset) {
    std::vector<Term> terms;
    for (const auto& t : changed[i].terms()) {
      for (std::size_t r = k; r < n; ++r)
        if (t.exponent[r] != 0) throw std::logic_error("triangular change left a trailing exponent");
      terms.push_back({t.coeff, Exponent(t.exponent.begin(), t.exponent.begin() + static_cast<long>(k))});
    }
    sub.emplace_back(k, terms);
  }

  std::vector<std::size_t> rest;
  std::vector<SparsePolynomial> remainder;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(check->subset.begin(), check->subset.end(), i) != check->subset.end()) continue;
    rest.push_back(i);
    remainder.push_back(changed[i]);
  }
  return {check->subset, std::move(rest), k, std::move(change), SparseSystem(std::move(sub), std::move(sub_names)),
          std::move(remainder)};
}

struct Indecomposable {};

using Decomposition = std::variant<LacunaryDecomposition, TriangularDecomposition, Indecomposable>;

enum class BranchOrder { LacunaryFirst, TriangularFirst };

inline Decomposition decompose(const SparseSystem& system, BranchOrder order = BranchOrder::LacunaryFirst) {
  const auto supports = exponents(system);
  const bool lacunary = is_lacunary(supports).lacunary;
  const bool triangular = system.size() >= 2 && is_triangular(supports).has_value();
  if (order == BranchOrder::TriangularFirst && triangular) return triangular_decomposition(system);
  if (lacunary) return lacunary_decomposition(system);
  if (triangular) return triangular_decomposition(system);
  return Indecomposable{};
}

}  // namespace sparsedecomp
