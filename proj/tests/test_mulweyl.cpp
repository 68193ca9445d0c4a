#include <gtest/gtest.h>

#include <random>

#include "oremul/mul_weyl.hpp"
#include "support.hpp"

using namespace oremul;
using testing_support::op;

TEST(EvalMatrix, Derivation) {
  RationalField q;
  auto m = eval_matrix(op(q, VarTag::partial, {{0, 1}}), 2, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      std::int64_t want = (i == 0 && j == 1) ? 1 : (i == 1 && j == 2) ? 2 : 0;
      EXPECT_EQ(m.at(i, j), q.from_int(want)) << i << " " << j;
    }
}

TEST(EvalMatrix, One) {
  const auto& f = testing_support::gf65521();
  auto m = eval_matrix(OrePoly<PrimeField>::one(f, VarTag::partial), 4, 4);
  EXPECT_EQ(m, DenseMatrix<PrimeField>::identity(f, 5));
}

TEST(EvalMatrix, ColumnsAreImagesOfMonomials) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(80);
  for (int t = 0; t < 100; ++t) {
    auto p = testing_support::random_op_upto(20, 20, VarTag::partial, f, rng);
    const std::size_t m = p.d() + std::uniform_int_distribution<std::size_t>(0, 20 - p.d())(rng);
    const std::size_t n = p.r() + std::uniform_int_distribution<std::size_t>(0, 20 - p.r())(rng);
    WeylStats stats;
    auto mat = eval_matrix(p, m, n, &stats);
    ASSERT_NO_THROW(mat.check_band());
    std::size_t live = 0;
    for (long l = -static_cast<long>(p.r()); l <= static_cast<long>(p.d()); ++l) {
      const long k0 = std::max(0L, -l), k1 = std::min(static_cast<long>(m) - l, static_cast<long>(n));
      bool nonzero = false;
      for (long i = std::max(0L, -l); i <= std::min(static_cast<long>(p.r()), static_cast<long>(p.d()) - l); ++i)
        nonzero = nonzero || !f.is_zero(p.coeff(static_cast<std::size_t>(i + l), static_cast<std::size_t>(i)));
      if (k0 <= k1 && nonzero) ++live;
    }
    ASSERT_EQ(stats.diagonal_products, live);
    for (std::size_t k = 0; k <= n; ++k) {
      auto img = apply(p, DensePoly<PrimeField>::monomial(f, k, f.one()));
      for (std::size_t i = 0; i <= m; ++i) ASSERT_EQ(mat.at(i, k), img[i]);
    }
  }
}

TEST(EvalMatrix, Errors) {
  PrimeField f(5);
  auto p = op(f, VarTag::partial, {{0, 1}, {1}});
  EXPECT_THROW(eval_matrix(p, 0, 3), WindowTooSmall);
  EXPECT_THROW(eval_matrix(p, 3, 5), CharacteristicTooSmall);
  EXPECT_NO_THROW(eval_matrix(p, 30, 4));
  EXPECT_THROW(eval_matrix(op(f, VarTag::theta, {{1}}), 2, 2), TagMismatch);
}

TEST(InterpolMatrix, ZeroAndDerivation) {
  const auto& f = testing_support::gf65521();
  EXPECT_TRUE(interpol_matrix(DenseMatrix<PrimeField>(f, 5, 7), 4, 6).is_zero());
  auto d = op(f, VarTag::partial, {{0, 1}});
  EXPECT_EQ(interpol_matrix(eval_matrix(d, 2, 2), 2, 2), d);
  EXPECT_THROW(interpol_matrix(DenseMatrix<PrimeField>(f, 5, 7), 5, 6), DimensionMismatch);
}

TEST(InterpolMatrix, RoundTrip) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(81);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
    auto p = testing_support::random_op_upto(d, r, VarTag::partial, f, rng);
    ASSERT_EQ(interpol_matrix(eval_matrix(p, d, r), d, r), p);
  }
}

TEST(InterpolMatrix, EveryMatrixIsAnImage) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(82);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(0, 12)(rng);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(0, 12)(rng);
    auto m = random_matrix(d + 1, r + 1, f, rng);
    auto p = interpol_matrix(m, d, r);
    ASSERT_LE(p.d(), d);
    ASSERT_LE(p.r(), r);
    auto back = eval_matrix(p, d, r);
    back.clear_band();
    ASSERT_EQ(back, m);
  }
}

TEST(InterpolMatrix, Injective) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(83);
  for (int t = 0; t < 100; ++t) {
    auto p = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
    auto q = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
    if (p == q) continue;
    ASSERT_FALSE(eval_matrix(p, 8, 8) == eval_matrix(q, 8, 8));
  }
}

TEST(MulWeyl, DerivationTimesX) {
  RationalField q;
  EXPECT_EQ(mul_weyl(op(q, VarTag::partial, {{0, 1}}), op(q, VarTag::partial, {{0}, {1}})),
            op(q, VarTag::partial, {{1}, {0, 1}}));
}

TEST(MulWeyl, AgreesWithNaive) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(84);
  for (int t = 0; t < 200; ++t) {
    auto b = testing_support::random_op_upto(12, 12, VarTag::partial, f, rng);
    auto a = testing_support::random_op_upto(12, 12, VarTag::partial, f, rng);
    ASSERT_EQ(mul_weyl(b, a), mul_naive(b, a));
  }
}

TEST(MulWeyl, Rationals) {
  RationalField q;
  std::mt19937_64 rng(85);
  for (int t = 0; t < 20; ++t) {
    auto b = testing_support::random_op_upto(8, 8, VarTag::partial, q, rng);
    auto a = testing_support::random_op_upto(8, 8, VarTag::partial, q, rng);
    ASSERT_EQ(mul_weyl(b, a), mul_naive(b, a));
  }
}

TEST(MulWeyl, MatrixIdentity) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(86);
  for (int t = 0; t < 50; ++t) {
    auto b = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
    auto a = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
    const std::size_t da = a.d(), rc = a.r() + b.r(), dc = a.d() + b.d();
    auto prod = mat_mul_reference(eval_matrix(b, dc, da + rc), eval_matrix(a, da + rc, rc));
    auto want = eval_matrix(mul_naive(b, a), dc, rc);
    want.clear_band();
    ASSERT_EQ(prod, want);
  }
}

TEST(MulWeyl, Errors) {
  PrimeField f(7);
  auto a = op(f, VarTag::partial, {{0, 1, 1}, {1}, {1}, {1}});  // d_A + r_C = 7
  EXPECT_THROW(mul_weyl(a, a), CharacteristicTooSmall);
  EXPECT_THROW(mul_weyl(a, op(f, VarTag::theta, {{1}})), TagMismatch);
}

class WeylBlockCounts : public ::testing::TestWithParam<std::size_t> {};

TEST_P(WeylBlockCounts, TableCounts) {
  const std::size_t n = GetParam();
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(87 + n);
  auto a = random_op(n, n, VarTag::partial, f, rng), b = random_op(n, n, VarTag::partial, f, rng);
  const auto want = mul_naive(b, a);
  BlockCounter naive{n}, skip{n};
  ASSERT_EQ(mul_weyl(b, a, &naive, {MatMulStrategy::blocked}), want);
  ASSERT_EQ(mul_weyl(b, a, &skip, {MatMulStrategy::banded_strassen}), want);
  EXPECT_EQ(naive.total(), 12u);
  EXPECT_EQ(skip.strassen_products, 7u);
  EXPECT_EQ(skip.naive_products, 1u);
}

INSTANTIATE_TEST_SUITE_P(Sizes, WeylBlockCounts, ::testing::Values(4, 16));

TEST(Homogeneous, Examples) {
  RationalField q;
  auto xd = homogeneous_decompose(op(q, VarTag::partial, {{0}, {0, 1}}));
  ASSERT_EQ(xd.positive.size(), 2u);
  EXPECT_EQ(xd.positive[0], testing_support::poly(q, {0, 1}));
  EXPECT_TRUE(xd.positive[1].is_zero());
  EXPECT_TRUE(xd.negative[0].is_zero());
  auto d = homogeneous_decompose(op(q, VarTag::partial, {{0, 1}}));
  ASSERT_EQ(d.negative.size(), 1u);
  EXPECT_EQ(d.negative[0], testing_support::poly(q, {1}));
  EXPECT_TRUE(d.positive[0].is_zero());
}

TEST(Homogeneous, RoundTripAndDegreeBounds) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(88);
  for (int t = 0; t < 100; ++t) {
    auto p = testing_support::random_op_upto(10, 10, VarTag::partial, f, rng);
    auto h = homogeneous_decompose(p);
    const long d = static_cast<long>(p.d()), r = static_cast<long>(p.r());
    for (std::size_t i = 1; i <= h.negative.size(); ++i)
      ASSERT_LE(h.negative[i - 1].degree(), std::min(r - static_cast<long>(i), d));
    for (std::size_t i = 0; i < h.positive.size(); ++i)
      ASSERT_LE(h.positive[i].degree(), std::min(d - static_cast<long>(i), r));
    ASSERT_EQ(homogeneous_recompose(f, h), p);
  }
}

TEST(Homogeneous, EvaluationFormula) {
  // P(X^k) = sum_i k!/(k-i)! l_{-i}(k-i) X^{k-i} + sum_i l_i(k) X^{k+i}
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(89);
  for (int t = 0; t < 50; ++t) {
    auto p = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
    auto h = homogeneous_decompose(p);
    for (std::size_t k = 0; k <= p.r(); ++k) {
      std::vector<element_t<PrimeField>> c(k + p.d() + 1, f.zero());
      for (std::size_t i = 1; i <= std::min(k, h.negative.size()); ++i) {
        auto val = evaluate(h.negative[i - 1], f.from_uint(k - i));
        c[k - i] = f.add(c[k - i], f.mul(falling_factorial_value(f, f.from_uint(k), i), val));
      }
      for (std::size_t i = 0; i < h.positive.size(); ++i)
        c[k + i] = f.add(c[k + i], evaluate(h.positive[i], f.from_uint(k)));
      ASSERT_EQ(apply(p, DensePoly<PrimeField>::monomial(f, k, f.one())), DensePoly<PrimeField>(f, c));
    }
  }
}
