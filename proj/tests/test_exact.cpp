#include "curldiv/exact.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

using namespace curldiv::exact;

TEST(Rational, ArithmeticReduces) {
  const Rational a(1, 2), b(1, 3);
  EXPECT_EQ(a + b, Rational(5, 6));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 6));
  EXPECT_EQ(a / b, Rational(3, 2));
  EXPECT_EQ(Rational(4, -8), Rational(-1, 2));
  EXPECT_TRUE((a - a).is_zero());
}

TEST(Rational, OverflowThrows) {
  const Rational big(INT64_MAX / 2 + 1);
  EXPECT_THROW(big * big, std::overflow_error);
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rank, MatchesModularOracleOnRandomMatrices) {
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> entry(-2, 2);
  std::uniform_int_distribution<int> keep(0, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const int rows = 3 + trial % 9, cols = 4 + (trial * 7) % 11;
    std::vector<std::vector<std::int64_t>> d(rows, std::vector<std::int64_t>(cols, 0));
    std::vector<SparseIntRow> sparse(rows);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (keep(gen) != 0) continue;
        d[r][c] = entry(gen);
        if (d[r][c] != 0) sparse[r].emplace_back(c, d[r][c]);
      }
    }
    // Dependent rows exercise rank deficiency.
    if (rows > 3) {
      d[rows - 1].assign(cols, 0);
      sparse[rows - 1].clear();
      for (int c = 0; c < cols; ++c) {
        d[rows - 1][c] = d[0][c] - 2 * d[1][c];
        if (d[rows - 1][c] != 0) sparse[rows - 1].emplace_back(c, d[rows - 1][c]);
      }
    }
    EXPECT_EQ(rank(sparse, cols), testing_support::rank_mod_p(d)) << "trial " << trial;
  }
}

TEST(Rank, IdentityAndZero) {
  std::vector<SparseIntRow> id = {{{0, 1}}, {{1, 1}}, {{2, 1}}};
  EXPECT_EQ(rank(id, 3), 3);
  std::vector<SparseIntRow> zero(4);
  EXPECT_EQ(rank(zero, 5), 0);
}

TEST(Eliminate, StagesPivotEarlierColumnsFirst) {
  // Row 0 = e0 + e2, row 1 = e1 + e2. Stage 0 holds column 2 only.
  std::vector<SparseIntRow> rows = {{{0, 1}, {2, 1}}, {{1, 1}, {2, 1}}};
  std::vector<int> stage = {1, 1, 0};
  const auto e = eliminate(rows, 3, stage, 0);
  EXPECT_EQ(e.rank, 1);
  EXPECT_TRUE(e.pivot_column[2]);
  ASSERT_EQ(e.residual.size(), 1u);
  for (const auto& [c, v] : e.residual[0]) EXPECT_NE(c, 2);
}

TEST(Rref, KernelVectorsAreAnnihilated) {
  DenseMatrix a = {{Rational(1), Rational(2), Rational(3)}, {Rational(2), Rational(4), Rational(6)}};
  const auto kernel = integer_kernel(a, 3);
  ASSERT_EQ(kernel.size(), 2u);
  for (const auto& k : kernel) {
    EXPECT_EQ(k[0] + 2 * k[1] + 3 * k[2], 0);
  }
  const auto piv = rref(a);
  EXPECT_EQ(piv, std::vector<int>({0}));
}

TEST(PrimitiveInteger, ClearsDenominatorsAndCommonFactors) {
  const std::vector<Rational> v = {Rational(1, 2), Rational(-1, 3), Rational(0)};
  EXPECT_EQ(primitive_integer(v), (std::vector<std::int64_t>{3, -2, 0}));
  const std::vector<Rational> w = {Rational(4), Rational(6)};
  EXPECT_EQ(primitive_integer(w), (std::vector<std::int64_t>{2, 3}));
}
