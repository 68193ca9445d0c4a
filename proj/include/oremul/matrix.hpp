#pragma once

// Exact dense matrices with optional band metadata, and a multiplication
// front end that can split the work into n x n block products, group them by
// Strassen's 2 x 2 scheme, skip block pairs that are structurally zero, and
// tally what it did in a BlockCounter.
//
// Blocking is by whole blocks: a dimension of size a*n + e contributes a full
// blocks and a thin fringe of width e. Fringe products are computed but not
// tallied, so an (an+1) x (bn+1) by (bn+1) x (cn+1) product counts a*b*c.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/opcount.hpp"

namespace oremul {

/// A run of entries (first_row + t, first_row + t - offset), t < length.
struct Diagonal {
  long offset;  // row - col
  std::size_t first_row;
  std::size_t length;
};

struct BandMetadata {
  std::vector<Diagonal> diagonals;

  /// All diagonals with row - col in [lo, hi], clipped to a rows x cols matrix.
  static BandMetadata offsets(long lo, long hi, std::size_t rows, std::size_t cols) {
    BandMetadata b;
    for (long o = lo; o <= hi; ++o) {
      long first = std::max(0L, o);
      long last = std::min(static_cast<long>(rows), static_cast<long>(cols) + o);
      if (first < last) {
        b.diagonals.push_back({o, static_cast<std::size_t>(first), static_cast<std::size_t>(last - first)});
      }
    }
    return b;
  }

  bool contains(std::size_t i, std::size_t j) const {
    const long o = static_cast<long>(i) - static_cast<long>(j);
    for (const auto& d : diagonals) {
      if (d.offset == o && i >= d.first_row && i < d.first_row + d.length) return true;
    }
    return false;
  }

  /// Whether some listed entry lies in rows [r0, r1) x cols [c0, c1).
  bool intersects(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    for (const auto& d : diagonals) {
      long lo = std::max({static_cast<long>(d.first_row), static_cast<long>(r0), static_cast<long>(c0) + d.offset});
      long hi = std::min({static_cast<long>(d.first_row + d.length), static_cast<long>(r1),
                          static_cast<long>(c1) + d.offset});
      if (lo < hi) return true;
    }
    return false;
  }

  void check_shape(std::size_t rows, std::size_t cols) const {
    for (const auto& d : diagonals) {
      const long last_row = static_cast<long>(d.first_row + d.length) - 1;
      const long first_col = static_cast<long>(d.first_row) - d.offset;
      if (d.length == 0) continue;
      if (last_row >= static_cast<long>(rows) || first_col < 0 || last_row - d.offset >= static_cast<long>(cols)) {
        throw InconsistentBand("diagonal " + std::to_string(d.offset) + " leaves the matrix");
      }
    }
  }
};

template <CoefficientField F>
class DenseMatrix {
 public:
  using value_type = element_t<F>;

  DenseMatrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, field_.zero()) {}
  DenseMatrix(F field, std::size_t rows, std::size_t cols, std::vector<value_type> data)
      : field_(std::move(field)), rows_(rows), cols_(cols), a_(std::move(data)) {
    if (a_.size() != rows * cols) throw DimensionMismatch("element count differs from rows * cols");
  }

  static DenseMatrix identity(const F& f, std::size_t n) {
    DenseMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
  }

  const F& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<value_type>& data() const noexcept { return a_; }
  std::vector<value_type>& data() noexcept { return a_; }

  value_type& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const value_type& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const std::optional<BandMetadata>& band() const noexcept { return band_; }
  void set_band(BandMetadata b) {
    b.check_shape(rows_, cols_);
    band_ = std::move(b);
  }
  void clear_band() { band_.reset(); }

  /// Throws InconsistentBand if a nonzero entry lies off the listed diagonals.
  void check_band() const {
    if (!band_) return;
    band_->check_shape(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!field_.is_zero(at(i, j)) && !band_->contains(i, j)) {
          throw InconsistentBand("nonzero entry at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
  }

  /// Whether the block rows [r0, r1) x cols [c0, c1) is known to be zero.
  bool structurally_zero(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    return band_ && !band_->intersects(r0, r1, c0, c1);
  }

  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    DenseMatrix b(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) {
        if (r0 + i < rows_ && c0 + j < cols_) b.at(i, j) = at(r0 + i, c0 + j);
      }
    return b;
  }

  void add_block(std::size_t r0, std::size_t c0, const DenseMatrix& b) {
    for (std::size_t i = 0; i < b.rows_ && r0 + i < rows_; ++i)
      for (std::size_t j = 0; j < b.cols_ && c0 + j < cols_; ++j) {
        at(r0 + i, c0 + j) = field_.add(at(r0 + i, c0 + j), b.at(i, j));
      }
  }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [&](const value_type& x) { return field_.is_zero(x); });
  }

  bool is_lower_triangular() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!field_.is_zero(at(i, j))) return false;
    return true;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  F field_;
  std::size_t rows_, cols_;
  std::vector<value_type> a_;
  std::optional<BandMetadata> band_;
};

/// Tallies of n x n block products performed by one or more multiplications.
struct BlockCounter {
  std::size_t block_size = 0;
  std::uint64_t naive_products = 0;
  std::uint64_t strassen_products = 0;
  std::uint64_t skipped_products = 0;

  std::uint64_t total() const noexcept { return naive_products + strassen_products; }
};

enum class MatMulStrategy { naive, blocked, strassen, banded, banded_strassen };

inline std::string to_string(MatMulStrategy s) {
  switch (s) {
    case MatMulStrategy::naive: return "naive";
    case MatMulStrategy::blocked: return "blocked";
    case MatMulStrategy::strassen: return "strassen";
    case MatMulStrategy::banded: return "banded";
    case MatMulStrategy::banded_strassen: return "banded_strassen";
  }
  return "?";
}

inline MatMulStrategy parse_strategy(const std::string& s) {
  if (s == "naive") return MatMulStrategy::naive;
  if (s == "blocked") return MatMulStrategy::blocked;
  if (s == "strassen") return MatMulStrategy::strassen;
  if (s == "banded" || s == "banded-aware") return MatMulStrategy::banded;
  if (s == "banded_strassen" || s == "banded-strassen") return MatMulStrategy::banded_strassen;
  throw InvalidConfig("unknown matrix strategy '" + s + "'");
}

struct MatMulOptions {
  MatMulStrategy strategy = MatMulStrategy::naive;
  std::size_t block_size = 0;  // 0: take it from the counter, else whole-matrix
  std::size_t strassen_threshold = 64;
};

namespace detail {

// C[0..m) x [0..q) += A[0..m) x [0..k) * B[0..k) x [0..q), all row-major with strides.
template <class F>
void gemm_acc(const F& f, const element_t<F>* a, std::size_t lda, const element_t<F>* b, std::size_t ldb,
              element_t<F>* c, std::size_t ldc, std::size_t m, std::size_t k, std::size_t q) {
  if (m == 0 || k == 0 || q == 0) return;
  if constexpr (std::is_same_v<F, PrimeField>) {
    const std::uint64_t p = f.modulus();
    opcount::add(2 * static_cast<std::uint64_t>(m) * k * q);
    if (p <= 0xffffffffull) {
      // Products are below 2^64, so a 128-bit row accumulator never overflows.
      std::vector<unsigned __int128> acc(q);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < q; ++j) acc[j] = c[i * ldc + j];
        for (std::size_t t = 0; t < k; ++t) {
          const std::uint64_t x = a[i * lda + t];
          if (x == 0) continue;
          const std::uint64_t* brow = b + t * ldb;
          for (std::size_t j = 0; j < q; ++j) acc[j] += x * brow[j];
        }
        for (std::size_t j = 0; j < q; ++j) c[i * ldc + j] = static_cast<std::uint64_t>(acc[j] % p);
      }
    } else {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t t = 0; t < k; ++t) {
          const std::uint64_t x = a[i * lda + t];
          if (x == 0) continue;
          for (std::size_t j = 0; j < q; ++j) {
            std::uint64_t s = c[i * ldc + j] + mulmod_u64(x, b[t * ldb + j], p);
            c[i * ldc + j] = s >= p ? s - p : s;
          }
        }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t t = 0; t < k; ++t) {
        const auto& x = a[i * lda + t];
        if (f.is_zero(x)) continue;
        for (std::size_t j = 0; j < q; ++j) c[i * ldc + j] = f.add(c[i * ldc + j], f.mul(x, b[t * ldb + j]));
      }
  }
}

template <class F>
DenseMatrix<F> kernel_mul(const DenseMatrix<F>& a, const DenseMatrix<F>& b) {
  DenseMatrix<F> c(a.field(), a.rows(), b.cols());
  gemm_acc(a.field(), a.data().data(), a.cols(), b.data().data(), b.cols(), c.data().data(), c.cols(), a.rows(),
           a.cols(), b.cols());
  return c;
}

template <class F>
DenseMatrix<F> add(const DenseMatrix<F>& a, const DenseMatrix<F>& b) {
  DenseMatrix<F> c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = a.field().add(a.data()[i], b.data()[i]);
  return c;
}

template <class F>
DenseMatrix<F> sub(const DenseMatrix<F>& a, const DenseMatrix<F>& b) {
  DenseMatrix<F> c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = a.field().sub(a.data()[i], b.data()[i]);
  return c;
}

struct Segment {
  std::size_t begin, size;
  bool full;
};

inline std::vector<Segment> segments(std::size_t dim, std::size_t n) {
  std::vector<Segment> s;
  std::size_t full = dim / n;
  for (std::size_t i = 0; i < full; ++i) s.push_back({i * n, n, true});
  if (dim % n != 0) s.push_back({full * n, dim % n, false});
  return s;
}

}  // namespace detail

/// Strassen's recursion down to `threshold`, padding odd dimensions with zeros.
template <CoefficientField F>
DenseMatrix<F> strassen_mul(const DenseMatrix<F>& a, const DenseMatrix<F>& b, std::size_t threshold = 64) {
  if (a.cols() != b.rows()) throw DimensionMismatch("inner dimensions differ");
  const std::size_t m = a.rows(), k = a.cols(), q = b.cols();
  if (std::max({m, k, q}) <= std::max<std::size_t>(threshold, 1) || std::min({m, k, q}) < 2) {
    return detail::kernel_mul(a, b);
  }
  const std::size_t hm = (m + 1) / 2, hk = (k + 1) / 2, hq = (q + 1) / 2;
  auto a11 = a.block(0, 0, hm, hk), a12 = a.block(0, hk, hm, hk);
  auto a21 = a.block(hm, 0, hm, hk), a22 = a.block(hm, hk, hm, hk);
  auto b11 = b.block(0, 0, hk, hq), b12 = b.block(0, hq, hk, hq);
  auto b21 = b.block(hk, 0, hk, hq), b22 = b.block(hk, hq, hk, hq);
  using detail::add;
  using detail::sub;
  auto m1 = strassen_mul(add(a11, a22), add(b11, b22), threshold);
  auto m2 = strassen_mul(add(a21, a22), b11, threshold);
  auto m3 = strassen_mul(a11, sub(b12, b22), threshold);
  auto m4 = strassen_mul(a22, sub(b21, b11), threshold);
  auto m5 = strassen_mul(add(a11, a12), b22, threshold);
  auto m6 = strassen_mul(sub(a21, a11), add(b11, b12), threshold);
  auto m7 = strassen_mul(sub(a12, a22), add(b21, b22), threshold);
  DenseMatrix<F> c(a.field(), m, q);
  c.add_block(0, 0, add(sub(add(m1, m4), m5), m7));
  c.add_block(0, hq, add(m3, m5));
  c.add_block(hm, 0, add(m2, m4));
  c.add_block(hm, hq, add(sub(add(m1, m3), m2), m6));
  return c;
}

template <CoefficientField F>
using BlockGrid2 = std::array<std::array<DenseMatrix<F>, 2>, 2>;

/// One Strassen step on a 2 x 2 grid of equal square blocks: 7 block products.
template <CoefficientField F>
BlockGrid2<F> strassen_2x2(const BlockGrid2<F>& a, const BlockGrid2<F>& b, BlockCounter* counter = nullptr,
                           std::size_t threshold = 64) {
  const std::size_t n = a[0][0].rows();
  for (const auto& g : {a, b})
    for (const auto& row : g)
      for (const auto& blk : row)
        if (blk.rows() != n || blk.cols() != n) throw DimensionMismatch("strassen_2x2 needs equal square blocks");
  using detail::add;
  using detail::sub;
  auto mul = [&](const DenseMatrix<F>& x, const DenseMatrix<F>& y) {
    if (counter) ++counter->strassen_products;
    return strassen_mul(x, y, threshold);
  };
  auto m1 = mul(add(a[0][0], a[1][1]), add(b[0][0], b[1][1]));
  auto m2 = mul(add(a[1][0], a[1][1]), b[0][0]);
  auto m3 = mul(a[0][0], sub(b[0][1], b[1][1]));
  auto m4 = mul(a[1][1], sub(b[1][0], b[0][0]));
  auto m5 = mul(add(a[0][0], a[0][1]), b[1][1]);
  auto m6 = mul(sub(a[1][0], a[0][0]), add(b[0][0], b[0][1]));
  auto m7 = mul(sub(a[0][1], a[1][1]), add(b[1][0], b[1][1]));
  return {{{add(sub(add(m1, m4), m5), m7), add(m3, m5)}, {add(m2, m4), add(sub(add(m1, m3), m2), m6)}}};
}

/// Exact product A * B. Every strategy returns the same matrix; they differ
/// in how the work is split and in what the counter records.
template <CoefficientField F>
DenseMatrix<F> mat_mul(const DenseMatrix<F>& a, const DenseMatrix<F>& b, const MatMulOptions& opts = {},
                       BlockCounter* counter = nullptr) {
  require_same_field(a.field(), b.field());
  if (a.cols() != b.rows()) {
    throw DimensionMismatch(std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const F& f = a.field();
  if (opts.strategy == MatMulStrategy::naive) return detail::kernel_mul(a, b);

  std::size_t n = opts.block_size != 0 ? opts.block_size : (counter ? counter->block_size : 0);
  if (n == 0) {
    if (opts.strategy == MatMulStrategy::strassen) return strassen_mul(a, b, opts.strassen_threshold);
    n = std::max({a.rows(), a.cols(), b.cols(), std::size_t{1}});
  }
  const bool use_band = opts.strategy == MatMulStrategy::banded || opts.strategy == MatMulStrategy::banded_strassen;
  const bool use_strassen =
      opts.strategy == MatMulStrategy::strassen || opts.strategy == MatMulStrategy::banded_strassen;

  const auto rs = detail::segments(a.rows(), n), ks = detail::segments(a.cols(), n), cs = detail::segments(b.cols(), n);
  DenseMatrix<F> c(f, a.rows(), b.cols());

  auto zero_pair = [&](std::size_t i, std::size_t k, std::size_t j) {
    if (!use_band) return false;
    const auto &ri = rs[i], &kk = ks[k], &cj = cs[j];
    return a.structurally_zero(ri.begin, ri.begin + ri.size, kk.begin, kk.begin + kk.size) ||
           b.structurally_zero(kk.begin, kk.begin + kk.size, cj.begin, cj.begin + cj.size);
  };
  auto plain = [&](std::size_t i, std::size_t k, std::size_t j) {
    const bool full = rs[i].full && ks[k].full && cs[j].full;
    if (zero_pair(i, k, j)) {
      if (full && counter) ++counter->skipped_products;
      return;
    }
    detail::gemm_acc(f, &a.data()[rs[i].begin * a.cols() + ks[k].begin], a.cols(),
                     &b.data()[ks[k].begin * b.cols() + cs[j].begin], b.cols(),
                     &c.data()[rs[i].begin * c.cols() + cs[j].begin], c.cols(), rs[i].size, ks[k].size, cs[j].size);
    if (full && counter) ++counter->naive_products;
  };

  // Full blocks are grouped in consecutive pairs per dimension; a group of
  // 2 x 2 x 2 block pairs with no structural zero goes through Strassen.
  auto pair_groups = [](const std::vector<detail::Segment>& s) {
    std::vector<std::vector<std::size_t>> g;
    std::size_t full = 0;
    while (full < s.size() && s[full].full) ++full;
    for (std::size_t i = 0; i < full; i += 2) {
      if (i + 1 < full) {
        g.push_back({i, i + 1});
      } else {
        g.push_back({i});
      }
    }
    for (std::size_t i = full; i < s.size(); ++i) g.push_back({i});
    return g;
  };
  const auto rg = pair_groups(rs), kg = pair_groups(ks), cg = pair_groups(cs);
  for (const auto& gi : rg)
    for (const auto& gj : cg)
      for (const auto& gk : kg) {
        bool strassen_group = use_strassen && gi.size() == 2 && gj.size() == 2 && gk.size() == 2;
        if (strassen_group) {
          for (auto i : gi)
            for (auto j : gj)
              for (auto k : gk)
                if (zero_pair(i, k, j)) strassen_group = false;
        }
        if (!strassen_group) {
          for (auto i : gi)
            for (auto j : gj)
              for (auto k : gk) plain(i, k, j);
          continue;
        }
        BlockGrid2<F> ab{{{a.block(rs[gi[0]].begin, ks[gk[0]].begin, n, n), a.block(rs[gi[0]].begin, ks[gk[1]].begin, n, n)},
                          {a.block(rs[gi[1]].begin, ks[gk[0]].begin, n, n), a.block(rs[gi[1]].begin, ks[gk[1]].begin, n, n)}}};
        BlockGrid2<F> bb{{{b.block(ks[gk[0]].begin, cs[gj[0]].begin, n, n), b.block(ks[gk[0]].begin, cs[gj[1]].begin, n, n)},
                          {b.block(ks[gk[1]].begin, cs[gj[0]].begin, n, n), b.block(ks[gk[1]].begin, cs[gj[1]].begin, n, n)}}};
        auto cb = strassen_2x2(ab, bb, counter, opts.strassen_threshold);
        for (std::size_t x = 0; x < 2; ++x)
          for (std::size_t y = 0; y < 2; ++y) c.add_block(rs[gi[x]].begin, cs[gj[y]].begin, cb[x][y]);
      }
  return c;
}

/// Triple-loop reference product, used as a test oracle.
template <CoefficientField F>
DenseMatrix<F> mat_mul_reference(const DenseMatrix<F>& a, const DenseMatrix<F>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("inner dimensions differ");
  const F& f = a.field();
  DenseMatrix<F> c(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      element_t<F> s = f.zero();
      for (std::size_t t = 0; t < a.cols(); ++t) s = f.add(s, f.mul(a.at(i, t), b.at(t, j)));
      c.at(i, j) = s;
    }
  return c;
}

}  // namespace oremul
