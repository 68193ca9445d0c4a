#include <gtest/gtest.h>

#include <random>

#include "oremul/matrix.hpp"
#include "support.hpp"

using namespace oremul;

namespace {

const MatMulStrategy kAll[] = {MatMulStrategy::naive, MatMulStrategy::blocked, MatMulStrategy::strassen,
                               MatMulStrategy::banded, MatMulStrategy::banded_strassen};

template <class F>
DenseMatrix<F> banded_random(std::size_t rows, std::size_t cols, long lo, long hi, const F& f, std::mt19937_64& rng) {
  DenseMatrix<F> m(f, rows, cols);
  auto band = BandMetadata::offsets(lo, hi, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (band.contains(i, j)) m.at(i, j) = random_element(f, rng);
  m.set_band(band);
  return m;
}

}  // namespace

TEST(MatMul, IdentityLeft) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(30);
  auto a = random_matrix(7, 5, f, rng);
  for (auto s : kAll) EXPECT_EQ(mat_mul(DenseMatrix<PrimeField>::identity(f, 7), a, {s, 3}), a);
}

TEST(MatMul, DimensionMismatch) {
  const auto& f = testing_support::gf65521();
  EXPECT_THROW(mat_mul(DenseMatrix<PrimeField>(f, 2, 3), DenseMatrix<PrimeField>(f, 2, 3)), DimensionMismatch);
}

TEST(MatMul, BlockedCountsTwelve) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(31);
  const std::size_t n = 8;
  auto a = random_matrix(2 * n, 3 * n, f, rng), b = random_matrix(3 * n, 2 * n, f, rng);
  BlockCounter c{n};
  auto prod = mat_mul(a, b, {MatMulStrategy::blocked}, &c);
  EXPECT_EQ(c.naive_products, 12u);
  EXPECT_EQ(c.total(), 12u);
  EXPECT_EQ(prod, mat_mul_reference(a, b));
}

TEST(MatMul, FringeIsNotCounted) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(32);
  const std::size_t n = 5;
  auto a = random_matrix(2 * n + 1, 3 * n + 1, f, rng), b = random_matrix(3 * n + 1, 2 * n + 1, f, rng);
  BlockCounter c{n};
  EXPECT_EQ(mat_mul(a, b, {MatMulStrategy::blocked}, &c), mat_mul_reference(a, b));
  EXPECT_EQ(c.total(), 12u);
}

TEST(MatMul, StrategiesAgreeWithTripleLoop) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(33);
  auto dim = [&] { return std::uniform_int_distribution<std::size_t>(1, 48)(rng); };
  for (int t = 0; t < 100; ++t) {
    auto a = random_matrix(dim(), dim(), f, rng);
    auto b = random_matrix(a.cols(), dim(), f, rng);
    auto want = mat_mul_reference(a, b);
    std::size_t bs = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
    for (auto s : kAll) {
      ASSERT_EQ(mat_mul(a, b, {s, bs, 4}), want) << to_string(s);
    }
    ASSERT_EQ(strassen_mul(a, b, 3), want);
  }
}

TEST(MatMul, RationalAndLargePrime) {
  std::mt19937_64 rng(34);
  RationalField q;
  auto a = random_matrix(9, 13, q, rng), b = random_matrix(13, 6, q, rng);
  for (auto s : kAll) EXPECT_EQ(mat_mul(a, b, {s, 4, 2}), mat_mul_reference(a, b));
  PrimeField big((1ull << 61) - 1);
  auto c = random_matrix(10, 11, big, rng), d = random_matrix(11, 12, big, rng);
  for (auto s : kAll) EXPECT_EQ(mat_mul(c, d, {s, 3, 2}), mat_mul_reference(c, d));
}

TEST(Strassen, IdentityBlocks) {
  const auto& f = testing_support::gf65521();
  auto id = DenseMatrix<PrimeField>::identity(f, 4);
  DenseMatrix<PrimeField> z(f, 4, 4);
  BlockGrid2<PrimeField> i2{{{id, z}, {z, id}}};
  BlockCounter c{4};
  auto r = strassen_2x2(i2, i2, &c);
  EXPECT_EQ(r[0][0], id);
  EXPECT_EQ(r[0][1], z);
  EXPECT_EQ(r[1][0], z);
  EXPECT_EQ(r[1][1], id);
  EXPECT_EQ(c.strassen_products, 7u);
  EXPECT_EQ(c.naive_products, 0u);
}

TEST(Strassen, MatchesNaiveBlocks) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(35);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    BlockGrid2<PrimeField> a{{{random_matrix(n, n, f, rng), random_matrix(n, n, f, rng)},
                              {random_matrix(n, n, f, rng), random_matrix(n, n, f, rng)}}};
    BlockGrid2<PrimeField> b{{{random_matrix(n, n, f, rng), random_matrix(n, n, f, rng)},
                              {random_matrix(n, n, f, rng), random_matrix(n, n, f, rng)}}};
    BlockCounter c{n};
    auto r = strassen_2x2(a, b, &c, 2);
    EXPECT_EQ(c.strassen_products, 7u);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        auto want = mat_mul_reference(a[i][0], b[0][j]);
        want.add_block(0, 0, mat_mul_reference(a[i][1], b[1][j]));
        ASSERT_EQ(r[i][j], want);
      }
  }
}

TEST(MatMul, StrassenGroupCountsSeven) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(36);
  const std::size_t n = 6;
  auto a = random_matrix(2 * n + 1, 2 * n + 1, f, rng), b = random_matrix(2 * n + 1, 2 * n + 1, f, rng);
  BlockCounter c{n};
  EXPECT_EQ(mat_mul(a, b, {MatMulStrategy::strassen}, &c), mat_mul_reference(a, b));
  EXPECT_EQ(c.strassen_products, 7u);
  EXPECT_EQ(c.total(), 7u);
}

TEST(Band, Metadata) {
  auto b = BandMetadata::offsets(-1, 1, 4, 5);
  EXPECT_TRUE(b.contains(0, 0));
  EXPECT_TRUE(b.contains(0, 1));
  EXPECT_TRUE(b.contains(3, 2));
  EXPECT_FALSE(b.contains(0, 2));
  EXPECT_FALSE(b.contains(3, 0));
  EXPECT_TRUE(b.intersects(0, 2, 0, 2));
  EXPECT_FALSE(b.intersects(0, 1, 3, 5));
  const auto& f = testing_support::gf65521();
  DenseMatrix<PrimeField> m(f, 4, 5);
  m.at(0, 3) = 1;
  m.set_band(b);
  EXPECT_THROW(m.check_band(), InconsistentBand);
  BandMetadata outside{{{-7, 0, 2}}};
  EXPECT_THROW(m.set_band(outside), InconsistentBand);
}

TEST(Band, SkipsStructuralZeros) {
  // Band shapes of the evaluation matrices in the operator products.
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(37);
  const std::size_t n = 8;
  {
    auto mb = banded_random(2 * n + 1, 3 * n + 1, -static_cast<long>(n), n, f, rng);
    auto ma = banded_random(3 * n + 1, 2 * n + 1, -static_cast<long>(n), n, f, rng);
    BlockCounter c{n};
    EXPECT_EQ(mat_mul(mb, ma, {MatMulStrategy::banded_strassen}, &c), mat_mul_reference(mb, ma));
    EXPECT_EQ(c.strassen_products, 7u);
    EXPECT_EQ(c.naive_products, 1u);
    EXPECT_EQ(c.skipped_products, 3u);
  }
  {
    auto mb = banded_random(4 * n + 1, 3 * n + 1, 0, n, f, rng);
    auto ma = banded_random(3 * n + 1, 2 * n + 1, 0, n, f, rng);
    BlockCounter c{n};
    EXPECT_EQ(mat_mul(mb, ma, {MatMulStrategy::banded}, &c), mat_mul_reference(mb, ma));
    EXPECT_EQ(c.total(), 8u);
    EXPECT_EQ(c.skipped_products, 16u);
    BlockCounter c2{n};
    mat_mul(mb, ma, {MatMulStrategy::banded_strassen}, &c2);
    EXPECT_EQ(c2.total(), 8u);
  }
}

TEST(Band, NeverMultipliesZeroBlocks) {
  // Every block product either involves two blocks that are not structurally zero, or is skipped.
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(38);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 6)(rng) * n;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 6)(rng) * n;
    const std::size_t q = std::uniform_int_distribution<std::size_t>(1, 6)(rng) * n;
    auto a = banded_random(m, k, 0, static_cast<long>(n), f, rng);
    auto b = banded_random(k, q, -static_cast<long>(n), 0, f, rng);
    BlockCounter c{n};
    ASSERT_EQ(mat_mul(a, b, {MatMulStrategy::banded}, &c), mat_mul_reference(a, b));
    std::uint64_t live = 0;
    for (std::size_t i = 0; i < m / n; ++i)
      for (std::size_t j = 0; j < q / n; ++j)
        for (std::size_t l = 0; l < k / n; ++l)
          if (!a.structurally_zero(i * n, i * n + n, l * n, l * n + n) &&
              !b.structurally_zero(l * n, l * n + n, j * n, j * n + n))
            ++live;
    ASSERT_EQ(c.naive_products, live);
    ASSERT_EQ(c.naive_products + c.skipped_products, (m / n) * (k / n) * (q / n));
  }
}
