#pragma once

// Exact convolution of residue sequences modulo a word-size prime p, by
// number-theoretic transforms over up to five 30-bit NTT primes and Garner
// reconstruction of the integer product. Works for any p < 2^62 as long as
// min(len a, len b) * (p-1)^2 fits under the product of the NTT primes used.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "oremul/field.hpp"
#include "oremul/opcount.hpp"

namespace oremul::ntt {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

struct NttPrime {
  u32 mod;
  u32 generator;
  int max_log;
};

inline constexpr std::array<NttPrime, 5> kPrimes = {{
    {998244353u, 3u, 23},   // 119 * 2^23 + 1
    {1004535809u, 3u, 21},  // 479 * 2^21 + 1
    {754974721u, 11u, 24},  // 45 * 2^24 + 1
    {469762049u, 3u, 26},   // 7 * 2^26 + 1
    {167772161u, 3u, 25},   // 5 * 2^25 + 1
}};

inline constexpr int kMaxLog = 21;

namespace detail {

inline u32 pow_mod(u32 a, u64 e, u32 m) {
  u64 r = 1, x = a % m;
  while (e != 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<u32>(r);
}

// Montgomery arithmetic with R = 2^32 for an odd modulus below 2^30.
struct Montgomery {
  u32 mod;
  u32 neg_inv;  // -mod^{-1} mod 2^32
  u32 r2;       // R^2 mod mod

  explicit Montgomery(u32 m) : mod(m) {
    u32 inv = m;
    for (int i = 0; i < 5; ++i) inv *= 2 - m * inv;
    neg_inv = ~inv + 1;
    r2 = static_cast<u32>((static_cast<unsigned __int128>(1) << 64) % m);
  }
  u32 reduce(u64 t) const {
    u32 q = static_cast<u32>(t) * neg_inv;
    u32 r = static_cast<u32>((t + static_cast<u64>(q) * mod) >> 32);
    return r >= mod ? r - mod : r;
  }
  u32 mul(u32 a, u32 b) const { return reduce(static_cast<u64>(a) * b); }
  u32 to_mont(u32 a) const { return mul(a, r2); }
};

class Transformer {
 public:
  Transformer(const NttPrime& prime, int log_n)
      : prime_(prime), mont_(prime.mod), log_n_(log_n), n_(std::size_t{1} << log_n) {
    fwd_.resize(n_);
    inv_.resize(n_);
    // Stage tables: entries [len, 2len) hold powers of the primitive 2len-th root.
    for (std::size_t len = 1; len < n_; len <<= 1) {
      u32 w = pow_mod(prime.generator, (prime.mod - 1) / (2 * len), prime.mod);
      u32 wi = pow_mod(w, prime.mod - 2, prime.mod);
      u64 cur = 1, cur_i = 1;
      for (std::size_t j = 0; j < len; ++j) {
        fwd_[len + j] = mont_.to_mont(static_cast<u32>(cur));
        inv_[len + j] = mont_.to_mont(static_cast<u32>(cur_i));
        cur = cur * w % prime.mod;
        cur_i = cur_i * wi % prime.mod;
      }
    }
    u32 n_inv = pow_mod(static_cast<u32>(n_ % prime.mod), prime.mod - 2, prime.mod);
    // Pointwise Montgomery products carry a stray R^{-1}; fold R back into the scale.
    scale_ = mont_.to_mont(mont_.to_mont(n_inv));
  }

  std::size_t size() const noexcept { return n_; }

  // Decimation in frequency; output in bit-reversed order.
  void forward(std::vector<u32>& a) const {
    const u32 m = prime_.mod;
    for (std::size_t len = n_ >> 1; len >= 1; len >>= 1) {
      const u32* w = fwd_.data() + len;
      for (std::size_t i = 0; i < n_; i += 2 * len) {
        u32* x = a.data() + i;
        u32* y = x + len;
        for (std::size_t j = 0; j < len; ++j) {
          u32 u = x[j], v = y[j];
          u32 s = u + v;
          x[j] = s >= m ? s - m : s;
          y[j] = mont_.mul(u + m - v, w[j]);
        }
      }
    }
    opcount::add(3 * (n_ / 2) * static_cast<u64>(log_n_));
  }

  void pointwise(std::vector<u32>& a, const std::vector<u32>& b) const {
    for (std::size_t i = 0; i < n_; ++i) a[i] = mont_.mul(a[i], b[i]);
    opcount::add(n_);
  }

  // Decimation in time from bit-reversed input; natural-order output, scaled.
  void inverse(std::vector<u32>& a) const {
    const u32 m = prime_.mod;
    for (std::size_t len = 1; len < n_; len <<= 1) {
      const u32* w = inv_.data() + len;
      for (std::size_t i = 0; i < n_; i += 2 * len) {
        u32* x = a.data() + i;
        u32* y = x + len;
        for (std::size_t j = 0; j < len; ++j) {
          u32 u = x[j];
          u32 v = mont_.mul(y[j], w[j]);
          u32 s = u + v;
          x[j] = s >= m ? s - m : s;
          y[j] = u >= v ? u - v : u + m - v;
        }
      }
    }
    for (auto& x : a) x = mont_.mul(x, scale_);
    opcount::add(3 * (n_ / 2) * static_cast<u64>(log_n_) + n_);
  }

 private:
  NttPrime prime_;
  Montgomery mont_;
  int log_n_;
  std::size_t n_;
  std::vector<u32> fwd_, inv_;
  u32 scale_;
};

inline int ceil_log2(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

}  // namespace detail

/// Number of NTT primes needed for an exact product, or 0 if impossible.
inline int primes_needed(std::size_t la, std::size_t lb, u64 p) {
  if (la == 0 || lb == 0) return 0;
  long double bits = std::log2(static_cast<long double>(std::min(la, lb))) +
                     2 * std::log2(static_cast<long double>(p > 1 ? p - 1 : 1)) + 1.0L;
  long double have = 0;
  for (std::size_t k = 0; k < kPrimes.size(); ++k) {
    have += std::log2(static_cast<long double>(kPrimes[k].mod));
    if (have > bits) return static_cast<int>(k + 1);
  }
  return 0;
}

inline bool can_convolve(std::size_t la, std::size_t lb, u64 p) {
  if (la == 0 || lb == 0) return false;
  if (detail::ceil_log2(la + lb - 1) > kMaxLog) return false;
  return primes_needed(la, lb, p) != 0;
}

/// Fixed-size engine: transform operands once, multiply spectra many times.
class BatchConvolver {
 public:
  using Spectrum = std::vector<std::vector<u32>>;

  BatchConvolver(std::size_t max_la, std::size_t max_lb, u64 p) : p_(p), result_len_(max_la + max_lb - 1) {
    int k = primes_needed(max_la, max_lb, p);
    int log_n = detail::ceil_log2(result_len_);
    if (k == 0 || log_n > kMaxLog) throw DimensionMismatch("convolution too large for the NTT primes");
    for (int i = 0; i < k; ++i) transformers_.emplace_back(kPrimes[static_cast<std::size_t>(i)], log_n);
    // Garner constants: inverse of m_0*...*m_{i-1} modulo m_i.
    garner_inv_.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      u64 prod = 1;
      u32 mi = kPrimes[static_cast<std::size_t>(i)].mod;
      for (int j = 0; j < i; ++j) prod = prod * (kPrimes[static_cast<std::size_t>(j)].mod % mi) % mi;
      garner_inv_[static_cast<std::size_t>(i)] = detail::pow_mod(static_cast<u32>(prod), mi - 2, mi);
    }
  }

  std::size_t transform_size() const noexcept { return transformers_.front().size(); }
  int prime_count() const noexcept { return static_cast<int>(transformers_.size()); }

  Spectrum transform(std::span<const u64> a) const {
    Spectrum s(transformers_.size());
    for (std::size_t i = 0; i < transformers_.size(); ++i) {
      const u32 m = kPrimes[i].mod;
      auto& v = s[i];
      v.assign(transform_size(), 0);
      for (std::size_t j = 0; j < a.size(); ++j) v[j] = static_cast<u32>(a[j] % m);
      transformers_[i].forward(v);
    }
    return s;
  }

  /// Coefficients of the product modulo p, length = la + lb - 1 of the operands.
  std::vector<u64> multiply(const Spectrum& a, const Spectrum& b, std::size_t out_len) const {
    const std::size_t k = transformers_.size();
    std::vector<std::vector<u32>> res(k);
    for (std::size_t i = 0; i < k; ++i) {
      res[i] = a[i];
      transformers_[i].pointwise(res[i], b[i]);
      transformers_[i].inverse(res[i]);
    }
    std::vector<u64> out(out_len);
    std::array<u64, kPrimes.size()> digit{};
    for (std::size_t t = 0; t < out_len; ++t) {
      for (std::size_t i = 0; i < k; ++i) {
        const u64 mi = kPrimes[i].mod;
        // x so far = d0 + d1 m0 + ...; evaluate it modulo m_i.
        u64 acc = 0;
        for (std::size_t j = i; j-- > 0;) acc = (acc * (kPrimes[j].mod % mi) + digit[j]) % mi;
        u64 r = res[i][t];
        digit[i] = (r + mi - acc) % mi * garner_inv_[i] % mi;
      }
      u64 x = 0;
      for (std::size_t j = k; j-- > 0;) {
        x = static_cast<u64>((static_cast<unsigned __int128>(x) * kPrimes[j].mod + digit[j]) % p_);
      }
      out[t] = x;
    }
    opcount::add(out_len * k * k);
    return out;
  }

 private:
  u64 p_;
  std::size_t result_len_;
  std::vector<detail::Transformer> transformers_;
  std::vector<u64> garner_inv_;
};

/// Exact product of two residue sequences modulo p.
inline std::vector<u64> convolve_mod(std::span<const u64> a, std::span<const u64> b, u64 p) {
  if (a.empty() || b.empty()) return {};
  BatchConvolver conv(a.size(), b.size(), p);
  if (a.data() == b.data() && a.size() == b.size()) {
    auto s = conv.transform(a);
    return conv.multiply(s, s, a.size() + b.size() - 1);
  }
  return conv.multiply(conv.transform(a), conv.transform(b), a.size() + b.size() - 1);
}

}  // namespace oremul::ntt
