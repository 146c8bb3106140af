#include "support.hpp"

#include <gtest/gtest.h>

using namespace sparsedecomp;
using testing_support::fixture;

TEST(Lacunary, LacunaryFixtureHasIndexThree) {
  const auto check = is_lacunary(exponents(fixture("lacunary")));
  EXPECT_TRUE(check.lacunary);
  EXPECT_EQ(check.index, 3);
}

TEST(Lacunary, TriangularFixtureIsNot) {
  const auto check = is_lacunary(exponents(fixture("triangular")));
  EXPECT_FALSE(check.lacunary);
  EXPECT_EQ(check.index, 1);
}

TEST(Lacunary, RankDeficientSupports) {
  const auto F = parse_system("vars: x, y\nx*y - 1\nx^2*y^2 - 4");
  EXPECT_THROW(is_lacunary(exponents(F)), RankDeficient);
}

TEST(Lacunary, DecompositionReproducesSystem) {
  const auto F = fixture("lacunary");
  const auto dec = lacunary_decomposition(F);
  EXPECT_EQ(dec.index, 3);
  EXPECT_EQ(dec.phi.det() < 0 ? Integer(-dec.phi.det()) : dec.phi.det(), 3);
  EXPECT_FALSE(is_lacunary(exponents(dec.inner)).lacunary);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 25; ++i) {
    const Point x = testing_support::random_torus_point(rng, 2);
    const auto lhs = evaluate(dec.translated, x);
    const auto rhs = evaluate(dec.inner, map_point(dec.phi, x));
    EXPECT_LE((lhs - rhs).norm(), 1e-10 * (1 + lhs.norm()));
  }
  EXPECT_THROW(lacunary_decomposition(fixture("triangular")), NotLacunary);
}

TEST(Triangular, TriangularFixtureSecondPolynomial) {
  const auto check = is_triangular(exponents(fixture("triangular")));
  ASSERT_TRUE(check.has_value());
  EXPECT_EQ(check->subset, (std::vector<std::size_t>{1}));
  EXPECT_EQ(check->rank, 1u);
}

TEST(Triangular, ThreeVarFirstAndThird) {
  const auto check = is_triangular(exponents(fixture("threevar")));
  ASSERT_TRUE(check.has_value());
  EXPECT_EQ(check->subset, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(check->rank, 2u);
}

TEST(Triangular, SimplexIsIndecomposable) {
  const auto supports = exponents(fixture("simplex"));
  EXPECT_FALSE(is_triangular(supports).has_value());
  EXPECT_FALSE(is_decomposable(supports));
  EXPECT_TRUE(std::holds_alternative<Indecomposable>(decompose(fixture("simplex"))));
  EXPECT_THROW(triangular_decomposition(fixture("simplex")), NotTriangular);
}

TEST(Triangular, SubsystemIsInLeadingVariables) {
  const auto F = fixture("threevar");
  const auto dec = triangular_decomposition(F);
  EXPECT_EQ(dec.k, 2u);
  EXPECT_TRUE(dec.change.unimodular());
  EXPECT_EQ(dec.rest, (std::vector<std::size_t>{1}));
  ASSERT_EQ(dec.subsystem.size(), 2u);
  const auto changed = apply_monomial_substitution(translate_to_origin(F).system, dec.change);
  for (std::size_t i : dec.subset)
    for (const auto& t : changed[i].terms()) EXPECT_EQ(t.exponent[2], 0);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const Point y = testing_support::random_torus_point(rng, 3);
    const Point x = map_point(dec.change, y);
    const auto fx = evaluate(translate_to_origin(F).system, x);
    const Eigen::VectorXcd head = evaluate(dec.subsystem, Point(y.head(2)));
    EXPECT_LE(std::abs(fx[0] - head[0]), 1e-10 * (1 + std::abs(fx[0])));
    EXPECT_LE(std::abs(fx[2] - head[1]), 1e-10 * (1 + std::abs(fx[2])));
    EXPECT_LE(std::abs(fx[1] - dec.remainder[0](y)), 1e-10 * (1 + std::abs(fx[1])));
  }
}

TEST(Decompose, BranchOrder) {
  const auto F = fixture("threevar");
  EXPECT_TRUE(std::holds_alternative<LacunaryDecomposition>(decompose(F)));
  EXPECT_TRUE(std::holds_alternative<TriangularDecomposition>(decompose(F, BranchOrder::TriangularFirst)));
  EXPECT_TRUE(std::holds_alternative<TriangularDecomposition>(decompose(fixture("triangular"))));
}

TEST(Decompose, ResultIndependentOfTranslation) {
  const auto F = fixture("lacunary");
  auto shifted = F.polynomials();
  std::vector<SparsePolynomial> moved;
  for (const auto& p : shifted) {
    std::vector<Term> terms;
    for (auto t : p.terms()) {
      t.exponent[0] -= 5;
      t.exponent[1] += 2;
      terms.push_back(t);
    }
    moved.emplace_back(2, terms);
  }
  EXPECT_EQ(is_lacunary(exponents(SparseSystem(moved))).index, 3);
}

TEST(Triangular, ReducedChangeKeepsBlockStructure) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    // Random unimodular U as a product of elementary row operations.
    IntMatrix U = IntMatrix::identity(4);
    std::uniform_int_distribution<int> row(0, 3), mult(-40, 40);
    for (int s = 0; s < 12; ++s) {
      const int a = row(rng), b = row(rng);
      if (a == b) continue;
      const int m = mult(rng);
      for (std::size_t j = 0; j < 4; ++j) U(a, j) += m * U(b, j);
    }
    const std::size_t k = 1 + trial % 3;
    const IntMatrix R = detail::reduce_change(U, k);
    EXPECT_EQ(detail::abs_int(determinant(R)), 1);
    // Trailing rows of R span the same lattice as those of U.
    const IntMatrix T = R * inverse_unimodular(U);
    for (std::size_t i = k; i < 4; ++i)
      for (std::size_t j = 0; j < k; ++j) EXPECT_EQ(T(i, j), 0) << U;
  }
}
