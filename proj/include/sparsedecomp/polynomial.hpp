#pragma once

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/lattice.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sparsedecomp {

using Complex = std::complex<double>;
using Exponent = std::vector<std::int64_t>;
using Point = Eigen::VectorXcd;

// z^k by repeated squaring; negative k through the reciprocal.
inline Complex ipow(Complex z, std::int64_t k) {
  if (k < 0) return Complex(1.0) / ipow(z, -k);
  Complex result(1.0);
  while (k) {
    if (k & 1) result *= z;
    z *= z;
    k >>= 1;
  }
  return result;
}

inline Complex monomial(const Point& x, const Exponent& alpha) {
  Complex v(1.0);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != 0) v *= ipow(x[static_cast<Eigen::Index>(i)], alpha[i]);
  return v;
}

struct Term {
  Complex coeff;
  Exponent exponent;

  friend bool operator==(const Term&, const Term&) = default;
};

// Laurent polynomial c_1 x^a_1 + ... + c_m x^a_m. Terms with equal exponents
// are merged (first appearance keeps its position) and exact zeros dropped.
class SparsePolynomial {
 public:
  SparsePolynomial() = default;

  SparsePolynomial(std::size_t dimension, const std::vector<Term>& terms) : dimension_(dimension) {
    std::map<Exponent, std::size_t> slot;
    for (const auto& t : terms) {
      if (t.exponent.size() != dimension) throw std::invalid_argument("exponent length differs from dimension");
      auto [it, inserted] = slot.emplace(t.exponent, terms_.size());
      if (inserted)
        terms_.push_back(t);
      else
        terms_[it->second].coeff += t.coeff;
    }
    std::erase_if(terms_, [](const Term& t) { return t.coeff == Complex(0.0); });
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  // Exponent vectors as columns, in term order.
  IntMatrix support() const {
    std::vector<Exponent> cols;
    for (const auto& t : terms_) cols.push_back(t.exponent);
    return IntMatrix::from_columns(dimension_, cols);
  }

  std::vector<Exponent> exponents() const {
    std::vector<Exponent> out;
    for (const auto& t : terms_) out.push_back(t.exponent);
    return out;
  }

  std::vector<Complex> coefficients() const {
    std::vector<Complex> out;
    for (const auto& t : terms_) out.push_back(t.coeff);
    return out;
  }

  // Same support, new coefficients (aligned with terms()).
  SparsePolynomial with_coefficients(const std::vector<Complex>& coeffs) const {
    if (coeffs.size() != terms_.size()) throw std::invalid_argument("coefficient count mismatch");
    SparsePolynomial p;
    p.dimension_ = dimension_;
    p.terms_ = terms_;
    for (std::size_t i = 0; i < coeffs.size(); ++i) p.terms_[i].coeff = coeffs[i];
    return p;
  }

  Complex operator()(const Point& x) const {
    Complex v(0.0);
    for (const auto& t : terms_) v += t.coeff * monomial(x, t.exponent);
    return v;
  }

  // Sum of |c| |x^a|: the natural scale for residuals at x.
  double magnitude(const Point& x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff) * std::abs(monomial(x, t.exponent));
    return s;
  }

  double coefficient_norm1() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff);
    return s;
  }

  std::int64_t total_degree() const {
    std::int64_t d = 0;
    for (const auto& t : terms_) {
      std::int64_t s = 0;
      for (auto e : t.exponent) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  // Lexicographically smallest exponent vector.
  Exponent min_exponent() const {
    auto it = std::min_element(terms_.begin(), terms_.end(),
                               [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    return it == terms_.end() ? Exponent(dimension_, 0) : it->exponent;
  }

  friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<Term> terms_;
};

inline std::vector<std::string> default_variable_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

// Square system of n Laurent polynomials in n variables, none of them empty.
class SparseSystem {
 public:
  SparseSystem() = default;

  explicit SparseSystem(std::vector<SparsePolynomial> polys, std::vector<std::string> names = {})
      : polys_(std::move(polys)), names_(std::move(names)) {
    const std::size_t n = polys_.size();
    if (n == 0) throw std::invalid_argument("system has no polynomials");
    if (names_.empty()) names_ = default_variable_names(n);
    if (names_.size() != n)
      throw std::invalid_argument("system is not square: " + std::to_string(n) + " polynomials in " +
                                  std::to_string(names_.size()) + " variables");
    for (std::size_t i = 0; i < n; ++i) {
      if (polys_[i].dimension() != n) throw std::invalid_argument("polynomial dimension differs from variable count");
      if (polys_[i].empty()) throw EmptyPolynomial(i);
    }
  }

  std::size_t size() const { return polys_.size(); }
  const SparsePolynomial& operator[](std::size_t i) const { return polys_[i]; }
  const std::vector<SparsePolynomial>& polynomials() const { return polys_; }
  const std::vector<std::string>& variables() const { return names_; }

  std::vector<std::vector<Complex>> coefficients() const {
    std::vector<std::vector<Complex>> out;
    for (const auto& p : polys_) out.push_back(p.coefficients());
    return out;
  }

  SparseSystem with_coefficients(const std::vector<std::vector<Complex>>& coeffs) const {
    if (coeffs.size() != polys_.size()) throw std::invalid_argument("coefficient list count mismatch");
    std::vector<SparsePolynomial> polys;
    for (std::size_t i = 0; i < polys_.size(); ++i) polys.push_back(polys_[i].with_coefficients(coeffs[i]));
    return SparseSystem(std::move(polys), names_);
  }

  friend bool operator==(const SparseSystem&, const SparseSystem&) = default;

 private:
  std::vector<SparsePolynomial> polys_;
  std::vector<std::string> names_;
};

// Integer n x n matrix with nonzero determinant acting on the torus. Column j
// is the exponent vector of output coordinate j: y_j = prod_i x_i^M(i,j).
class MonomialMap {
 public:
  explicit MonomialMap(IntMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("monomial map must be square");
    det_ = determinant(matrix_);
    if (det_ == 0) throw SingularMap();
  }

  static MonomialMap identity(std::size_t n) { return MonomialMap(IntMatrix::identity(n)); }

  const IntMatrix& matrix() const { return matrix_; }
  const Integer& det() const { return det_; }
  std::size_t dimension() const { return matrix_.rows(); }
  bool unimodular() const { return det_ == 1 || det_ == -1; }

 private:
  IntMatrix matrix_;
  Integer det_;
};

inline std::vector<IntMatrix> exponents(const SparseSystem& system) {
  std::vector<IntMatrix> out;
  for (const auto& p : system.polynomials()) out.push_back(p.support());
  return out;
}

inline Point map_point(const MonomialMap& M, const Point& x) {
  const std::size_t n = M.dimension();
  if (static_cast<std::size_t>(x.size()) != n) throw std::invalid_argument("point dimension mismatch");
  Point y(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    Complex v(1.0);
    for (std::size_t i = 0; i < n; ++i)
      if (M.matrix()(i, j) != 0) v *= ipow(x[static_cast<Eigen::Index>(i)], to_int64(M.matrix()(i, j)));
    y[static_cast<Eigen::Index>(j)] = v;
  }
  return y;
}

struct Translated {
  SparseSystem system;
  std::vector<Exponent> translations;
};

// Divides each polynomial by its lexicographically smallest monomial, so every
// support contains the origin. Torus zeros are unchanged.
inline Translated translate_to_origin(const SparseSystem& system) {
  const std::size_t n = system.size();
  std::vector<SparsePolynomial> polys;
  std::vector<Exponent> shifts;
  for (const auto& p : system.polynomials()) {
    Exponent a = p.min_exponent();
    std::vector<Term> terms;
    for (const auto& t : p.terms()) {
      Exponent e = t.exponent;
      for (std::size_t i = 0; i < n; ++i) e[i] -= a[i];
      terms.push_back({t.coeff, std::move(e)});
    }
    polys.emplace_back(n, terms);
    shifts.push_back(std::move(a));
  }
  return {SparseSystem(std::move(polys), system.variables()), std::move(shifts)};
}

inline std::vector<Integer> to_integers(const Exponent& e) { return {e.begin(), e.end()}; }

inline Exponent to_exponent(const std::vector<Integer>& v) {
  Exponent e;
  for (const auto& x : v) e.push_back(to_int64(x));
  return e;
}

inline SparsePolynomial apply_monomial_substitution(const SparsePolynomial& p, const MonomialMap& M) {
  std::vector<Term> terms;
  for (const auto& t : p.terms()) terms.push_back({t.coeff, to_exponent(M.matrix() * to_integers(t.exponent))});
  return SparsePolynomial(p.dimension(), terms);
}

// Exponents a -> M a with coefficients kept, so that
// evaluate(result, y) == evaluate(system, map_point(M, y)).
inline SparseSystem apply_monomial_substitution(const SparseSystem& system, const MonomialMap& M) {
  if (M.dimension() != system.size()) throw std::invalid_argument("monomial map dimension mismatch");
  std::vector<SparsePolynomial> polys;
  for (const auto& p : system.polynomials()) polys.push_back(apply_monomial_substitution(p, M));
  return SparseSystem(std::move(polys), system.variables());
}

inline void require_torus(const Point& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] == Complex(0.0)) throw ZeroCoordinate(static_cast<std::size_t>(i));
}

inline Eigen::VectorXcd evaluate(const SparseSystem& system, const Point& x) {
  if (static_cast<std::size_t>(x.size()) != system.size()) throw std::invalid_argument("point dimension mismatch");
  require_torus(x);
  Eigen::VectorXcd out(x.size());
  for (std::size_t i = 0; i < system.size(); ++i) out[static_cast<Eigen::Index>(i)] = system[i](x);
  return out;
}

// d(c x^a)/dx_i = c a_i x^(a - e_i).
inline Eigen::MatrixXcd jacobian(const SparseSystem& system, const Point& x) {
  const auto n = static_cast<Eigen::Index>(system.size());
  require_torus(x);
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (const auto& t : system[static_cast<std::size_t>(r)].terms())
      for (Eigen::Index c = 0; c < n; ++c) {
        const auto a = t.exponent[static_cast<std::size_t>(c)];
        if (a == 0) continue;
        Exponent e = t.exponent;
        e[static_cast<std::size_t>(c)] -= 1;
        J(r, c) += t.coeff * static_cast<double>(a) * monomial(x, e);
      }
  return J;
}

// max_i |f_i(x)|
inline double residual(const SparseSystem& system, const Point& x) {
  return evaluate(system, x).cwiseAbs().maxCoeff();
}

// Residual scaled by the term magnitudes: max_i |f_i(x)| / (1 + sum |c||x^a|).
inline double relative_residual(const SparseSystem& system, const Point& x) {
  const auto v = evaluate(system, x);
  double worst = 0.0;
  for (std::size_t i = 0; i < system.size(); ++i)
    worst = std::max(worst, std::abs(v[static_cast<Eigen::Index>(i)]) / (1.0 + system[i].magnitude(x)));
  return worst;
}

}  // namespace sparsedecomp
