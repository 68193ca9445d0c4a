#include <gtest/gtest.h>

#include <random>

#include "oremul/conversions.hpp"
#include "oremul/theta_mul.hpp"
#include "support.hpp"

using namespace oremul;
using testing_support::op;

namespace {

template <class F>
DensePoly<F> times_x_pow(const DensePoly<F>& p, std::size_t v) {
  return DensePoly<F>::monomial(p.field(), v, p.field().one()) * p;
}

// theta_to_partial by explicit Stirling-matrix products, row by row.
template <class F>
OrePoly<F> theta_to_partial_stirling(const OrePoly<F>& a) {
  const F& f = a.field();
  auto s2 = stirling_second_kind(f, a.r());
  auto out = OrePoly<F>::zeros(f, VarTag::partial, a.d() + a.r(), a.r());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k <= j; ++k)
        out.at(i + k, k) = f.add(out.at(i + k, k), f.mul(a.at(i, j), s2[j][k]));
  out.normalize();
  return out;
}

}  // namespace

TEST(ThetaToPartial, Theta) {
  RationalField q;
  EXPECT_EQ(theta_to_partial(op(q, VarTag::theta, {{0, 1}})), op(q, VarTag::partial, {{0}, {0, 1}}));
}

TEST(ThetaToPartial, ThetaSquared) {
  const auto& f = testing_support::gf65521();
  auto xd = op(f, VarTag::partial, {{0}, {0, 1}});
  EXPECT_EQ(theta_to_partial(op(f, VarTag::theta, {{0, 0, 1}})), mul_naive(xd, xd));
}

TEST(ThetaToPartial, ActsIdentically) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(60);
  for (int t = 0; t < 100; ++t) {
    auto a = testing_support::random_op_upto(10, 10, VarTag::theta, f, rng);
    auto p = random_poly(std::uniform_int_distribution<std::size_t>(0, 15)(rng), f, rng);
    auto b = theta_to_partial(a);
    ASSERT_EQ(apply(b, p), apply(a, p));
    ASSERT_LE(b.d(), a.d() + a.r());
    ASSERT_EQ(b.r(), a.r());
  }
}

TEST(ThetaToPartial, MatchesStirlingMatrix) {
  PrimeField f(7);
  std::mt19937_64 rng(61);
  for (int t = 0; t < 50; ++t) {
    auto a = testing_support::random_op_upto(12, 40, VarTag::theta, f, rng);
    ASSERT_EQ(theta_to_partial(a), theta_to_partial_stirling(a));
  }
}

TEST(PartialToTheta, Derivation) {
  RationalField q;
  auto l = partial_to_theta(op(q, VarTag::partial, {{0, 1}}));
  EXPECT_EQ(l.valuation(), 1u);
  EXPECT_EQ(l.degree(), -1);
  EXPECT_EQ(l.body(), op(q, VarTag::theta, {{0, 1}}));
}

TEST(PartialToTheta, SecondDerivation) {
  const auto& f = testing_support::gf65521();
  auto l = partial_to_theta(op(f, VarTag::partial, {{0, 0, 1}}));
  EXPECT_EQ(l.valuation(), 2u);
  EXPECT_EQ(l.body(), op(f, VarTag::theta, {{0, -1, 1}}));
  // X^2 (X^-2 (theta^2 - theta)) = X^2 d^2
  auto x2 = op(f, VarTag::partial, {{0}, {0}, {1}});
  EXPECT_EQ(theta_to_partial(l.body()), mul_naive(x2, op(f, VarTag::partial, {{0, 0, 1}})));
}

TEST(PartialToTheta, RoundTripAndBounds) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(62);
  for (int t = 0; t < 100; ++t) {
    auto b = testing_support::random_op_upto(10, 10, VarTag::partial, f, rng);
    auto l = partial_to_theta(b);
    ASSERT_LE(l.valuation(), b.r());
    ASSERT_LE(l.degree(), static_cast<long>(b.d()));
    ASSERT_EQ(laurent_to_partial(l), b);
    auto p = random_poly(std::uniform_int_distribution<std::size_t>(0, 15)(rng), f, rng);
    ASSERT_EQ(apply(l.body(), p), times_x_pow(apply(b, p), l.valuation()));
  }
}

TEST(PartialToTheta, SmallCharacteristicRoundTrip) {
  for (std::uint64_t p : {2u, 3u}) {
    PrimeField f(p);
    std::mt19937_64 rng(63 + p);
    for (int t = 0; t < 50; ++t) {
      auto b = testing_support::random_op_upto(8, 30, VarTag::partial, f, rng);
      ASSERT_EQ(laurent_to_partial(partial_to_theta(b)), b);
      auto a = testing_support::random_op_upto(8, 30, VarTag::theta, f, rng);
      ASSERT_EQ(partial_to_theta(theta_to_partial(a)), LaurentThetaPoly<PrimeField>::from_theta(a));
    }
  }
}

TEST(LaurentThetaPoly, NormalizesValuation) {
  RationalField q;
  LaurentThetaPoly<RationalField> l(op(q, VarTag::theta, {{0}, {0}, {1, 1}}), 3);
  EXPECT_EQ(l.valuation(), 1u);
  EXPECT_EQ(l.degree(), -1);
  EXPECT_EQ(l.coeff(-1, 1), 1);
  EXPECT_EQ(l.coeff(-3, 0), 0);
  EXPECT_THROW(laurent_to_partial(LaurentThetaPoly<RationalField>(op(q, VarTag::theta, {{1}}), 1)), InvalidDomain);
  EXPECT_TRUE(LaurentThetaPoly<RationalField>(OrePoly<RationalField>(q, VarTag::theta), 4).is_zero());
}

TEST(ThetaShift, Basics) {
  RationalField q;
  auto th = op(q, VarTag::theta, {{0, 1}});
  EXPECT_EQ(theta_shift(th, 0), th);
  EXPECT_EQ(theta_shift(th, 1), op(q, VarTag::theta, {{1, 1}}));
}

TEST(ThetaShift, RoundTrip) {
  for (std::uint64_t p : {3u, 65521u}) {
    PrimeField f(p);
    std::mt19937_64 rng(64 + p);
    for (int t = 0; t < 100; ++t) {
      auto c = testing_support::random_op_upto(8, 40, VarTag::theta, f, rng);
      ASSERT_EQ(theta_shift(theta_shift(c, 3), -3), c);
    }
  }
}

TEST(ThetaShift, CommutesPastPowersOfX) {
  // C(X, theta) X^n = X^n C(X, theta + n)
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(65);
  for (int t = 0; t < 30; ++t) {
    auto c = testing_support::random_op_upto(6, 6, VarTag::theta, f, rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
    auto xn = OrePoly<PrimeField>::monomial(f, VarTag::theta, n, 0, f.one());
    ASSERT_EQ(mul_naive(c, xn), mul_naive(xn, theta_shift(c, static_cast<long>(n))));
  }
}

TEST(Transport, PartialProductThroughTheta) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(66);
  auto vdh = [](const auto& b, const auto& a) { return mul_theta_vdh(b, a); };
  for (int t = 0; t < 50; ++t) {
    auto b = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
    auto a = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
    ASSERT_EQ(mul_partial_via_theta(b, a, vdh), mul_naive(b, a));
  }
}

TEST(Transport, AnyCharacteristic) {
  for (std::uint64_t p : {2u, 5u}) {
    PrimeField f(p);
    std::mt19937_64 rng(67 + p);
    auto naive = [](const auto& b, const auto& a) { return mul_naive(b, a); };
    for (int t = 0; t < 50; ++t) {
      auto b = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
      auto a = testing_support::random_op_upto(8, 8, VarTag::partial, f, rng);
      ASSERT_EQ(mul_partial_via_theta(b, a, naive), mul_naive(b, a));
      auto tb = testing_support::random_op_upto(6, 6, VarTag::theta, f, rng);
      auto ta = testing_support::random_op_upto(6, 6, VarTag::theta, f, rng);
      ASSERT_EQ(theta_to_partial(mul_naive(tb, ta)), mul_naive(theta_to_partial(tb), theta_to_partial(ta)));
    }
  }
}
