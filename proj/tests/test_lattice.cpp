#include "support.hpp"

#include <gtest/gtest.h>

using namespace sparsedecomp;
using testing_support::valid_smith;

TEST(IntMatrix, ProductAndTranspose) {
  const IntMatrix A{{1, 2}, {3, 4}};
  const IntMatrix B{{0, 1}, {1, 0}};
  EXPECT_EQ(A * B, (IntMatrix{{2, 1}, {4, 3}}));
  EXPECT_EQ(A.transpose(), (IntMatrix{{1, 3}, {2, 4}}));
  EXPECT_THROW(IntMatrix(0, 2), std::invalid_argument);
}

TEST(Smith, KnownDiagonals) {
  // Difference matrices of the fixtures; diagonals checked against sympy.
  const IntMatrix ex2{{1, 2, 3, 0, 1, 4}, {2, 1, 3, 3, 2, 2}};
  auto s = smith_normal_form(ex2);
  EXPECT_TRUE(valid_smith(ex2, s));
  EXPECT_EQ(s.diagonal(), (std::vector<Integer>{1, 3}));

  const IntMatrix three{{1, 1, 2}, {1, 0, 0}, {1, 2, 1}};
  s = smith_normal_form(three);
  EXPECT_TRUE(valid_smith(three, s));
  EXPECT_EQ(s.diagonal(), (std::vector<Integer>{1, 1, 3}));
}

TEST(Smith, RankDeficientAndZero) {
  const IntMatrix A{{2, 4, 6}, {1, 2, 3}};
  const auto s = smith_normal_form(A);
  EXPECT_TRUE(valid_smith(A, s));
  EXPECT_EQ(s.rank(), 1u);
  EXPECT_EQ(lattice_rank(IntMatrix(2, 2)), 0u);
  EXPECT_FALSE(lattice_index(A).has_value());
}

TEST(Smith, GcdFixupNeeded) {
  const IntMatrix A{{2, 0}, {0, 3}};
  const auto s = smith_normal_form(A);
  EXPECT_TRUE(valid_smith(A, s));
  EXPECT_EQ(s.diagonal(), (std::vector<Integer>{1, 6}));
}

TEST(Smith, LargeEntriesStayExact) {
  const IntMatrix A{{1000000007LL, 998244353LL}, {123456789123LL, 987654321987LL}};
  const auto s = smith_normal_form(A);
  EXPECT_TRUE(valid_smith(A, s));
  EXPECT_EQ(s.diagonal()[0] * s.diagonal()[1], determinant(A) < 0 ? Integer(-determinant(A)) : determinant(A));
}

TEST(Smith, RandomRectangular) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto A = testing_support::random_matrix(rng, 1 + trial % 5, 1 + (trial / 5) % 6, -9, 9);
    std::string why;
    EXPECT_TRUE(valid_smith(A, smith_normal_form(A), &why)) << why << "\n" << A;
  }
}

TEST(Determinant, Bareiss) {
  EXPECT_EQ(determinant(IntMatrix{{1, 1, 2}, {1, 0, 0}, {1, 2, 1}}), 3);
  EXPECT_EQ(determinant(IntMatrix{{0, 1}, {1, 0}}), -1);
  EXPECT_EQ(determinant(IntMatrix{{1, 2}, {2, 4}}), 0);
  EXPECT_EQ(determinant(IntMatrix{{0, 0, 1}, {0, 2, 0}, {3, 0, 0}}), -6);
}

TEST(Lattice, IndexAndInverse) {
  EXPECT_EQ(*lattice_index(IntMatrix{{1, 1, 2}, {1, 0, 0}, {1, 2, 1}}), 3);
  const IntMatrix U{{2, 1}, {7, 4}};
  EXPECT_EQ(U * inverse_unimodular(U), IntMatrix::identity(2));
  EXPECT_THROW(inverse_unimodular(IntMatrix{{2, 0}, {0, 1}}), std::invalid_argument);
}

TEST(Lattice, SolveInteger) {
  const IntMatrix M{{3, 0}, {0, 1}};
  const auto x = solve_integer(M, {6, 5});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, (std::vector<Integer>{2, 5}));
  EXPECT_FALSE(solve_integer(M, {1, 0}).has_value());
}

TEST(Lll, ShortensSkewedBasis) {
  // Same lattice as the identity basis, badly skewed.
  const auto b = lll_reduce({{1, 0, 0}, {1000, 1, 0}, {999001, 999, 1}});
  IntMatrix B(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      B(i, j) = b[i][j];
      EXPECT_LE(detail::abs_int(b[i][j]), 1);
    }
  EXPECT_EQ(detail::abs_int(determinant(B)), 1);
}

TEST(Lll, PreservesLattice) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const IntMatrix A = testing_support::random_matrix(rng, 3, 3, -20, 20);
    const Integer d = determinant(A);
    if (d == 0) continue;
    std::vector<std::vector<Integer>> rows(3, std::vector<Integer>(3));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) rows[i][j] = A(i, j);
    const auto b = lll_reduce(rows);
    IntMatrix B(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) B(i, j) = b[i][j];
    EXPECT_EQ(detail::abs_int(determinant(B)), detail::abs_int(d));
    // Every reduced row lies in the row lattice of A.
    const IntMatrix At = A.transpose();
    for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(solve_integer(At, b[i]).has_value()) << A;
  }
  EXPECT_THROW(lll_reduce({{1, 2}, {2, 4}}), std::invalid_argument);
}
