#include <gtest/gtest.h>

#include <random>

#include "oremul/charp.hpp"
#include "support.hpp"

using namespace oremul;
using testing_support::op;

namespace {

template <class F>
BivariateGrid<F> part(const PCommutativeForm<F>& form, std::size_t u) {
  return u < form.parts.size() ? form.parts[u] : BivariateGrid<F>(PrimeField(form.p), 0, 0);
}

}  // namespace

TEST(SplitP, Theta) {
  PrimeField f(2);
  auto form = split_p(op(f, VarTag::theta, {{0, 1}}), SplitSide::right);
  EXPECT_EQ(OrePoly<PrimeField>::from_grid(part(form, 0), VarTag::theta), op(f, VarTag::theta, {{0, 1}}));
  EXPECT_TRUE(part(form, 1).is_zero());
}

TEST(SplitP, RightSplitShifts) {
  PrimeField f(2);
  auto xth = op(f, VarTag::theta, {{0}, {0, 1}});
  auto form = split_p(xth, SplitSide::right);
  EXPECT_TRUE(part(form, 0).is_zero());
  auto a1 = OrePoly<PrimeField>::from_grid(part(form, 1), VarTag::theta);
  EXPECT_EQ(a1, op(f, VarTag::theta, {{-1, 1}}));
  EXPECT_EQ(mul_naive(a1, op(f, VarTag::theta, {{0}, {1}})), xth);
}

TEST(SplitP, RecomposesBothSides) {
  for (std::uint64_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    std::mt19937_64 rng(90 + p);
    for (int t = 0; t < 100; ++t) {
      auto a = testing_support::random_op_upto(15, 15, VarTag::theta, f, rng);
      for (auto side : {SplitSide::left, SplitSide::right}) {
        auto form = split_p(a, side);
        ASSERT_LE(form.parts.size(), p);
        for (const auto& g : form.parts) ASSERT_LE(g.rows(), a.d() / p + 1);
        ASSERT_EQ(recompose_p(f, form), a);
      }
    }
  }
}

TEST(SplitP, ZeroCharacteristic) {
  RationalField q;
  EXPECT_THROW(split_p(op(q, VarTag::theta, {{0, 1}}), SplitSide::left), ZeroCharacteristic);
  EXPECT_THROW(mul_theta_p(op(q, VarTag::theta, {{1}}), op(q, VarTag::theta, {{1}})), ZeroCharacteristic);
}

TEST(MulThetaP, ThetaCommutesWithXp) {
  for (std::uint64_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    auto th = op(f, VarTag::theta, {{0, 1}});
    auto xp = OrePoly<PrimeField>::monomial(f, VarTag::theta, p, 0, f.one());
    EXPECT_EQ(mul_naive(th, xp), mul_naive(xp, th));
    EXPECT_EQ(mul_theta_p(th, xp), mul_naive(xp, th));
  }
}

TEST(MulThetaP, SmallExamples) {
  PrimeField f(2);
  auto th = op(f, VarTag::theta, {{0, 1}});
  EXPECT_EQ(mul_theta_p(th, op(f, VarTag::theta, {{0}, {0}, {1}})), op(f, VarTag::theta, {{0}, {0}, {0, 1}}));
  EXPECT_EQ(mul_theta_p(th, th), op(f, VarTag::theta, {{0, 0, 1}}));
}

TEST(MulThetaP, ExhaustiveMonomials) {
  for (std::uint64_t p : {2u, 3u}) {
    PrimeField f(p);
    for (std::size_t a = 0; a <= 4; ++a)
      for (std::size_t b = 0; b <= 4; ++b)
        for (std::size_t c = 0; c <= 4; ++c)
          for (std::size_t d = 0; d <= 4; ++d) {
            auto l = OrePoly<PrimeField>::monomial(f, VarTag::theta, a, b, f.one());
            auto r = OrePoly<PrimeField>::monomial(f, VarTag::theta, c, d, f.one());
            ASSERT_EQ(mul_theta_p(l, r), mul_naive(l, r)) << p << ": " << a << b << c << d;
          }
  }
}

TEST(MulThetaP, AgreesWithNaive) {
  for (std::uint64_t p : {2u, 3u, 5u, 65521u}) {
    PrimeField f(p);
    std::mt19937_64 rng(95 + p);
    for (int t = 0; t < 50; ++t) {
      auto b = testing_support::random_op_upto(12, 12, VarTag::theta, f, rng);
      auto a = testing_support::random_op_upto(12, 12, VarTag::theta, f, rng);
      ASSERT_EQ(mul_theta_p(b, a), mul_naive(b, a)) << p;
    }
  }
}

TEST(MulThetaP, BatchedTransformPath) {
  for (std::uint64_t p : {2u, 3u}) {
    PrimeField f(p);
    std::mt19937_64 rng(99 + p);
    for (int t = 0; t < 3; ++t) {
      auto b = random_op(40, 40, VarTag::theta, f, rng), a = random_op(40, 40, VarTag::theta, f, rng);
      ASSERT_EQ(mul_theta_p(b, a), mul_naive(b, a));
      ASSERT_EQ(mul_theta_p(b, a, PolyMulThresholds{1u << 20, 1u << 20}), mul_naive(b, a));
    }
  }
}

TEST(MulPartialP, AgreesWithNaive) {
  for (std::uint64_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    std::mt19937_64 rng(103 + p);
    for (int t = 0; t < 50; ++t) {
      auto b = testing_support::random_op_upto(12, 12, VarTag::partial, f, rng);
      auto a = testing_support::random_op_upto(12, 12, VarTag::partial, f, rng);
      ASSERT_EQ(mul_partial_p(b, a), mul_naive(b, a)) << p;
    }
  }
}
