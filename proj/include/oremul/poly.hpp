#pragma once

// Dense univariate polynomials over a CoefficientField, and the classical
// fast operations built on multiplication: Taylor shift, evaluation and
// interpolation on arithmetic progressions, change of basis between monomials
// and falling factorials, and Kronecker-packed bivariate products.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/ntt.hpp"

namespace oremul {

/// Size thresholds for multiplication dispatch. Operands with fewer than
/// `karatsuba` coefficients use the schoolbook product; results of at least
/// `ntt` coefficients over a prime field go through the transform path.
struct PolyMulThresholds {
  std::size_t karatsuba = 32;
  std::size_t ntt = 512;
};

template <CoefficientField F>
class DensePoly {
 public:
  using value_type = element_t<F>;

  explicit DensePoly(F field) : field_(std::move(field)) {}
  DensePoly(F field, std::vector<value_type> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    normalize();
  }

  static DensePoly constant(const F& field, value_type c) { return DensePoly(field, {std::move(c)}); }
  static DensePoly monomial(const F& field, std::size_t k, value_type c) {
    std::vector<value_type> v(k + 1, field.zero());
    v[k] = std::move(c);
    return DensePoly(field, std::move(v));
  }
  /// X + a
  static DensePoly linear(const F& field, value_type a) { return DensePoly(field, {std::move(a), field.one()}); }

  const F& field() const noexcept { return field_; }
  const std::vector<value_type>& coeffs() const noexcept { return c_; }
  std::size_t size() const noexcept { return c_.size(); }
  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }

  value_type operator[](std::size_t k) const { return k < c_.size() ? c_[k] : field_.zero(); }

  void normalize() {
    while (!c_.empty() && field_.is_zero(c_.back())) c_.pop_back();
  }

  friend bool operator==(const DensePoly& a, const DensePoly& b) {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }

 private:
  F field_;
  std::vector<value_type> c_;
};

namespace detail {

template <class F>
using Vec = std::vector<element_t<F>>;

template <class F>
void trim(const F& f, Vec<F>& v) {
  while (!v.empty() && f.is_zero(v.back())) v.pop_back();
}

// out[0 .. la+lb-1) += a * b
template <class F>
void schoolbook_acc(const F& f, const element_t<F>* a, std::size_t la, const element_t<F>* b, std::size_t lb,
                    element_t<F>* out) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    const std::uint64_t p = f.modulus();
    if (p <= 0xffffffffull) {
      // Products fit in 64 bits; reduce every step to stay exact.
      for (std::size_t i = 0; i < la; ++i) {
        const std::uint64_t ai = a[i];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < lb; ++j) out[i + j] = (out[i + j] + ai * b[j] % p) % p;
      }
      opcount::add(2 * static_cast<std::uint64_t>(la) * lb);
      return;
    }
  }
  for (std::size_t i = 0; i < la; ++i) {
    if (f.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < lb; ++j) out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  }
}

template <class F>
void karatsuba_acc(const F& f, const element_t<F>* a, std::size_t la, const element_t<F>* b, std::size_t lb,
                   element_t<F>* out, std::size_t threshold) {
  if (la == 0 || lb == 0) return;
  if (std::min(la, lb) < threshold) {
    schoolbook_acc(f, a, la, b, lb, out);
    return;
  }
  if (la != lb) {
    if (la < lb) {
      std::swap(a, b);
      std::swap(la, lb);
    }
    for (std::size_t off = 0; off < la; off += lb) {
      karatsuba_acc(f, a + off, std::min(lb, la - off), b, lb, out + off, threshold);
    }
    return;
  }
  const std::size_t n = la, m = n / 2, hi = n - m;
  Vec<F> z0(2 * m - 1, f.zero()), z2(2 * hi - 1, f.zero()), z1(2 * hi - 1, f.zero());
  karatsuba_acc(f, a, m, b, m, z0.data(), threshold);
  karatsuba_acc(f, a + m, hi, b + m, hi, z2.data(), threshold);
  Vec<F> sa(hi), sb(hi);
  for (std::size_t i = 0; i < hi; ++i) {
    sa[i] = i < m ? f.add(a[i], a[m + i]) : a[m + i];
    sb[i] = i < m ? f.add(b[i], b[m + i]) : b[m + i];
  }
  karatsuba_acc(f, sa.data(), hi, sb.data(), hi, z1.data(), threshold);
  for (std::size_t i = 0; i < z0.size(); ++i) {
    z1[i] = f.sub(z1[i], z0[i]);
    out[i] = f.add(out[i], z0[i]);
  }
  for (std::size_t i = 0; i < z2.size(); ++i) {
    z1[i] = f.sub(z1[i], z2[i]);
    out[2 * m + i] = f.add(out[2 * m + i], z2[i]);
  }
  for (std::size_t i = 0; i < z1.size(); ++i) out[m + i] = f.add(out[m + i], z1[i]);
}

template <class F>
Vec<F> mul_vec(const F& f, std::span<const element_t<F>> a, std::span<const element_t<F>> b,
               const PolyMulThresholds& th = {}) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  if constexpr (std::is_same_v<F, PrimeField>) {
    if (std::min(a.size(), b.size()) >= th.karatsuba && out_len >= th.ntt &&
        ntt::can_convolve(a.size(), b.size(), f.modulus())) {
      return ntt::convolve_mod(a, b, f.modulus());
    }
  }
  Vec<F> out(out_len, f.zero());
  karatsuba_acc(f, a.data(), a.size(), b.data(), b.size(), out.data(), std::max<std::size_t>(th.karatsuba, 2));
  return out;
}

template <class F>
Vec<F> add_vec(const F& f, const Vec<F>& a, const Vec<F>& b) {
  Vec<F> out(std::max(a.size(), b.size()), f.zero());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size() && i < b.size()) {
      out[i] = f.add(a[i], b[i]);
    } else {
      out[i] = i < a.size() ? a[i] : b[i];
    }
  }
  return out;
}

// Horner-style Taylor shift, O(n^2), valid in any characteristic.
template <class F>
Vec<F> shift_naive(const F& f, const Vec<F>& p, const element_t<F>& a) {
  Vec<F> q;
  for (std::size_t i = p.size(); i-- > 0;) {
    // q <- q * (X + a) + p[i]
    q.push_back(f.zero());
    for (std::size_t k = q.size() - 1; k > 0; --k) q[k] = f.add(q[k - 1], f.mul(q[k], a));
    q[0] = f.add(f.mul(q[0], a), p[i]);
  }
  return q;
}

// Convolution method; needs k! invertible for k <= deg.
template <class F>
Vec<F> shift_convolution(const F& f, const Vec<F>& p, const element_t<F>& a, const PolyMulThresholds& th) {
  const std::size_t n = p.size();
  if (n == 0) return {};
  auto fac = factorial_table(n - 1, f);
  Vec<F> u(n), v(n);
  element_t<F> apow = f.one();
  for (std::size_t i = 0; i < n; ++i) {
    u[n - 1 - i] = f.mul(p[i], fac.fact[i]);
    v[i] = f.mul(apow, fac.inv_fact[i]);
    apow = f.mul(apow, a);
  }
  Vec<F> w = mul_vec<F>(f, u, v, th);
  Vec<F> q(n);
  for (std::size_t k = 0; k < n; ++k) q[k] = f.mul(w[n - 1 - k], fac.inv_fact[k]);
  return q;
}

// Radix-p method for small characteristic p: with P = sum_{i<p} X^i Q_i(X^p),
// P(X+a) = sum_i (X+a)^i Q_i(X^p + a) because (X+a)^p = X^p + a.
template <class F>
Vec<F> shift_radix(const F& f, const Vec<F>& poly, const element_t<F>& a) {
  const std::size_t p = static_cast<std::size_t>(f.characteristic());
  const std::size_t n = poly.size();
  if (n <= p) return shift_naive(f, poly, a);
  std::vector<Vec<F>> parts(p);
  for (std::size_t i = 0; i < p; ++i) {
    Vec<F> q;
    for (std::size_t k = i; k < n; k += p) q.push_back(poly[k]);
    parts[i] = shift_radix(f, q, a);
  }
  // weight[i][t] = binom(i, t) a^(i-t), from Pascal's rule.
  std::vector<Vec<F>> weight(p, Vec<F>(p, f.zero()));
  weight[0][0] = f.one();
  for (std::size_t i = 1; i < p; ++i) {
    for (std::size_t t = 0; t <= i; ++t) {
      element_t<F> x = t < i ? f.mul(weight[i - 1][t], a) : f.zero();
      if (t > 0) x = f.add(x, weight[i - 1][t - 1]);
      weight[i][t] = x;
    }
  }
  Vec<F> out(n, f.zero());
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < parts[i].size(); ++k) {
      if (f.is_zero(parts[i][k])) continue;
      for (std::size_t t = 0; t <= i; ++t) {
        std::size_t idx = p * k + t;
        if (idx < n) out[idx] = f.add(out[idx], f.mul(weight[i][t], parts[i][k]));
      }
    }
  }
  return out;
}

template <class F>
Vec<F> pow_linear(const F& f, const element_t<F>& a, std::size_t e, const PolyMulThresholds& th) {
  Vec<F> result{f.one()};
  Vec<F> base{a, f.one()};
  while (e != 0) {
    if (e & 1) result = mul_vec<F>(f, result, base, th);
    e >>= 1;
    if (e != 0) base = mul_vec<F>(f, base, base, th);
  }
  return result;
}

// Divide and conquer: P = P0 + X^h P1, P(X+a) = P0(X+a) + (X+a)^h P1(X+a).
template <class F>
Vec<F> shift_dc(const F& f, const Vec<F>& p, const element_t<F>& a, const PolyMulThresholds& th,
                std::map<std::size_t, Vec<F>>& powers) {
  const std::size_t n = p.size();
  if (n <= 32) return shift_naive(f, p, a);
  const std::size_t h = (n + 1) / 2;
  Vec<F> lo(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(h));
  Vec<F> hi(p.begin() + static_cast<std::ptrdiff_t>(h), p.end());
  Vec<F> lo_s = shift_dc(f, lo, a, th, powers);
  Vec<F> hi_s = shift_dc(f, hi, a, th, powers);
  auto it = powers.find(h);
  if (it == powers.end()) it = powers.emplace(h, pow_linear(f, a, h, th)).first;
  Vec<F> out = mul_vec<F>(f, hi_s, it->second, th);
  for (std::size_t i = 0; i < lo_s.size(); ++i) out[i] = f.add(out[i], lo_s[i]);
  out.resize(n);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ring operations

template <CoefficientField F>
DensePoly<F> operator+(const DensePoly<F>& a, const DensePoly<F>& b) {
  require_same_field(a.field(), b.field());
  return DensePoly<F>(a.field(), detail::add_vec(a.field(), a.coeffs(), b.coeffs()));
}

template <CoefficientField F>
DensePoly<F> operator-(const DensePoly<F>& a) {
  std::vector<element_t<F>> v = a.coeffs();
  for (auto& x : v) x = a.field().neg(x);
  return DensePoly<F>(a.field(), std::move(v));
}

template <CoefficientField F>
DensePoly<F> operator-(const DensePoly<F>& a, const DensePoly<F>& b) {
  return a + (-b);
}

template <CoefficientField F>
DensePoly<F> scale(const DensePoly<F>& a, const element_t<F>& c) {
  std::vector<element_t<F>> v = a.coeffs();
  for (auto& x : v) x = a.field().mul(x, c);
  return DensePoly<F>(a.field(), std::move(v));
}

/// Exact product; schoolbook, Karatsuba or transform-based by size.
template <CoefficientField F>
DensePoly<F> poly_mul(const DensePoly<F>& f, const DensePoly<F>& g, const PolyMulThresholds& th = {}) {
  require_same_field(f.field(), g.field());
  return DensePoly<F>(f.field(), detail::mul_vec<F>(f.field(), f.coeffs(), g.coeffs(), th));
}

template <CoefficientField F>
DensePoly<F> operator*(const DensePoly<F>& a, const DensePoly<F>& b) {
  return poly_mul(a, b);
}

/// Schoolbook reference product, used as a test oracle.
template <CoefficientField F>
DensePoly<F> poly_mul_schoolbook(const DensePoly<F>& f, const DensePoly<F>& g) {
  require_same_field(f.field(), g.field());
  if (f.is_zero() || g.is_zero()) return DensePoly<F>(f.field());
  std::vector<element_t<F>> out(f.size() + g.size() - 1, f.field().zero());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      out[i + j] = f.field().add(out[i + j], f.field().mul(f.coeffs()[i], g.coeffs()[j]));
  return DensePoly<F>(f.field(), std::move(out));
}

/// f * g mod X^n
template <CoefficientField F>
DensePoly<F> mul_trunc(const DensePoly<F>& f, const DensePoly<F>& g, std::size_t n,
                       const PolyMulThresholds& th = {}) {
  require_same_field(f.field(), g.field());
  std::span<const element_t<F>> a(f.coeffs().data(), std::min(n, f.size()));
  std::span<const element_t<F>> b(g.coeffs().data(), std::min(n, g.size()));
  auto v = detail::mul_vec<F>(f.field(), a, b, th);
  if (v.size() > n) v.resize(n);
  return DensePoly<F>(f.field(), std::move(v));
}

template <CoefficientField F>
DensePoly<F> truncate(const DensePoly<F>& f, std::size_t n) {
  std::vector<element_t<F>> v(f.coeffs().begin(), f.coeffs().begin() + static_cast<std::ptrdiff_t>(std::min(n, f.size())));
  return DensePoly<F>(f.field(), std::move(v));
}

template <CoefficientField F>
element_t<F> evaluate(const DensePoly<F>& p, const element_t<F>& x) {
  const F& f = p.field();
  element_t<F> acc = f.zero();
  for (std::size_t i = p.size(); i-- > 0;) acc = f.add(f.mul(acc, x), p.coeffs()[i]);
  return acc;
}

template <CoefficientField F>
DensePoly<F> derivative(const DensePoly<F>& p) {
  const F& f = p.field();
  std::vector<element_t<F>> v;
  for (std::size_t i = 1; i < p.size(); ++i) v.push_back(f.mul(f.from_uint(i), p.coeffs()[i]));
  return DensePoly<F>(f, std::move(v));
}

/// 1/f mod X^n by Newton iteration; f(0) must be invertible.
template <CoefficientField F>
DensePoly<F> inverse_series(const DensePoly<F>& f, std::size_t n, const PolyMulThresholds& th = {}) {
  const F& fld = f.field();
  if (n == 0) return DensePoly<F>(fld);
  if (f.is_zero() || fld.is_zero(f.coeffs()[0])) throw ZeroInverse("series with zero constant term");
  DensePoly<F> g = DensePoly<F>::constant(fld, fld.inv(f.coeffs()[0]));
  std::size_t k = 1;
  while (k < n) {
    k = std::min(2 * k, n);
    // g <- g (2 - f g) mod X^k
    DensePoly<F> fg = mul_trunc(truncate(f, k), g, k, th);
    std::vector<element_t<F>> e(k, fld.zero());
    for (std::size_t i = 0; i < fg.size(); ++i) e[i] = fld.neg(fg.coeffs()[i]);
    e[0] = fld.add(e[0], fld.from_int(2));
    g = mul_trunc(g, DensePoly<F>(fld, std::move(e)), k, th);
  }
  return g;
}

template <CoefficientField F>
struct DivRem {
  DensePoly<F> quotient;
  DensePoly<F> remainder;
};

/// Euclidean division; the leading coefficient of b must be invertible.
template <CoefficientField F>
DivRem<F> divrem(const DensePoly<F>& a, const DensePoly<F>& b, const PolyMulThresholds& th = {}) {
  require_same_field(a.field(), b.field());
  const F& f = a.field();
  if (b.is_zero()) throw ZeroInverse("division by the zero polynomial");
  if (a.degree() < b.degree()) return {DensePoly<F>(f), a};
  const std::size_t m = static_cast<std::size_t>(a.degree() - b.degree());
  if (b.size() < 32 || m < 32) {
    std::vector<element_t<F>> r = a.coeffs(), q(m + 1, f.zero());
    const element_t<F> lead_inv = f.inv(b.coeffs().back());
    for (std::size_t k = m + 1; k-- > 0;) {
      element_t<F> c = f.mul(r[k + b.size() - 1], lead_inv);
      q[k] = c;
      if (f.is_zero(c)) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[k + j] = f.sub(r[k + j], f.mul(c, b.coeffs()[j]));
    }
    r.resize(b.size() - 1);
    return {DensePoly<F>(f, std::move(q)), DensePoly<F>(f, std::move(r))};
  }
  std::vector<element_t<F>> ra(a.coeffs().rbegin(), a.coeffs().rend());
  std::vector<element_t<F>> rb(b.coeffs().rbegin(), b.coeffs().rend());
  DensePoly<F> inv = inverse_series(DensePoly<F>(f, rb), m + 1, th);
  DensePoly<F> qr = mul_trunc(DensePoly<F>(f, ra), inv, m + 1, th);
  std::vector<element_t<F>> q(m + 1, f.zero());
  for (std::size_t i = 0; i < qr.size(); ++i) q[m - i] = qr.coeffs()[i];
  DensePoly<F> quotient(f, std::move(q));
  DensePoly<F> remainder = a - poly_mul(quotient, b, th);
  return {std::move(quotient), std::move(remainder)};
}

// ---------------------------------------------------------------------------
// Taylor shift

enum class ShiftMethod { automatic, naive, convolution, radix, divide_and_conquer };

/// Q(X) = P(X + a). The convolution method is used when factorials up to
/// deg P are invertible; otherwise a characteristic-safe method.
template <CoefficientField F>
DensePoly<F> taylor_shift(const DensePoly<F>& p, const element_t<F>& a, ShiftMethod method = ShiftMethod::automatic,
                          const PolyMulThresholds& th = {}) {
  const F& f = p.field();
  if (p.size() <= 1 || f.is_zero(a)) return p;
  const std::uint64_t ch = f.characteristic();
  const std::size_t deg = p.size() - 1;
  if (method == ShiftMethod::automatic) {
    if (deg < 16) {
      method = ShiftMethod::naive;
    } else if (ch == 0 || ch > deg) {
      method = ShiftMethod::convolution;
    } else if (ch <= 64) {
      method = ShiftMethod::radix;
    } else {
      method = ShiftMethod::divide_and_conquer;
    }
  }
  switch (method) {
    case ShiftMethod::naive:
      return DensePoly<F>(f, detail::shift_naive(f, p.coeffs(), a));
    case ShiftMethod::convolution:
      require_invertible_up_to(f, deg, "convolution Taylor shift");
      return DensePoly<F>(f, detail::shift_convolution(f, p.coeffs(), a, th));
    case ShiftMethod::radix:
      if (ch == 0) throw ZeroCharacteristic("radix Taylor shift needs positive characteristic");
      return DensePoly<F>(f, detail::shift_radix(f, p.coeffs(), a));
    case ShiftMethod::divide_and_conquer:
    default: {
      std::map<std::size_t, std::vector<element_t<F>>> powers;
      return DensePoly<F>(f, detail::shift_dc(f, p.coeffs(), a, th, powers));
    }
  }
}

// ---------------------------------------------------------------------------
// Falling factorials and Stirling numbers

/// (l)_k = l (l-1) ... (l-k+1), via (l)_{k+1} = (l)_k (l - k).
template <CoefficientField F>
element_t<F> falling_factorial_value(const F& f, const element_t<F>& l, std::size_t k) {
  element_t<F> r = f.one();
  for (std::size_t t = 0; t < k; ++t) r = f.mul(r, f.sub(l, f.from_uint(t)));
  return r;
}

/// Binomial coefficient C(i, k) as a field element, in any characteristic
/// (multiplicative recurrence when i < p, Lucas' theorem otherwise).
template <CoefficientField F>
element_t<F> binomial(const F& f, std::uint64_t i, std::uint64_t k) {
  if (k > i) return f.zero();
  const std::uint64_t p = f.characteristic();
  if (p == 0 || p > i) {
    k = std::min(k, i - k);
    element_t<F> num = f.one(), den = f.one();
    for (std::uint64_t t = 0; t < k; ++t) {
      num = f.mul(num, f.from_uint(i - t));
      den = f.mul(den, f.from_uint(t + 1));
    }
    return f.mul(num, f.inv(den));
  }
  element_t<F> r = f.one();
  while (i != 0 || k != 0) {
    std::uint64_t id = i % p, kd = k % p;
    if (kd > id) return f.zero();
    r = f.mul(r, binomial(f, id, kd));
    i /= p;
    k /= p;
  }
  return r;
}

/// s[k][j]: signed Stirling numbers of the first kind, (X)_k = sum_j s[k][j] X^j.
template <CoefficientField F>
std::vector<std::vector<element_t<F>>> stirling_first_kind(const F& f, std::size_t n) {
  std::vector<std::vector<element_t<F>>> s(n + 1, std::vector<element_t<F>>(n + 1, f.zero()));
  s[0][0] = f.one();
  for (std::size_t k = 1; k <= n; ++k) {
    const element_t<F> km1 = f.from_uint(k - 1);
    for (std::size_t j = 1; j <= k; ++j) s[k][j] = f.sub(s[k - 1][j - 1], f.mul(km1, s[k - 1][j]));
  }
  return s;
}

/// S[j][k]: Stirling numbers of the second kind, X^j = sum_k S[j][k] (X)_k.
template <CoefficientField F>
std::vector<std::vector<element_t<F>>> stirling_second_kind(const F& f, std::size_t n) {
  std::vector<std::vector<element_t<F>>> s(n + 1, std::vector<element_t<F>>(n + 1, f.zero()));
  s[0][0] = f.one();
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t k = 1; k <= j; ++k) s[j][k] = f.add(s[j - 1][k - 1], f.mul(f.from_uint(k), s[j - 1][k]));
  }
  return s;
}

/// The polynomial (X - shift)_h = (X - shift)(X - shift - 1)...(X - shift - h + 1).
template <CoefficientField F>
DensePoly<F> falling_factorial_poly(const F& f, std::size_t h, std::int64_t shift = 0,
                                    const PolyMulThresholds& th = {}) {
  if (h == 0) return DensePoly<F>::constant(f, f.one());
  if (h == 1) return DensePoly<F>::linear(f, f.from_int(-shift));
  const std::size_t lo = (h + 1) / 2;
  return poly_mul(falling_factorial_poly(f, lo, shift, th),
                  falling_factorial_poly(f, h - lo, shift + static_cast<std::int64_t>(lo), th), th);
}

/// Coefficients of a polynomial on the falling factorial basis (X)_k.
template <CoefficientField F>
struct FallingFactorialCoeffs {
  F field;
  std::vector<element_t<F>> c;

  FallingFactorialCoeffs(F fld, std::vector<element_t<F>> v) : field(std::move(fld)), c(std::move(v)) {
    detail::trim(field, c);
  }
  friend bool operator==(const FallingFactorialCoeffs& a, const FallingFactorialCoeffs& b) {
    return a.field == b.field && a.c == b.c;
  }
};

namespace detail {

inline constexpr std::size_t kBasisChangeBase = 24;

template <class F>
Vec<F> to_falling_rec(const F& f, const Vec<F>& p, const PolyMulThresholds& th) {
  const std::size_t n = p.size();
  if (n <= kBasisChangeBase) {
    auto s2 = stirling_second_kind(f, n == 0 ? 0 : n - 1);
    Vec<F> c(n, f.zero());
    for (std::size_t j = 0; j < n; ++j) {
      if (f.is_zero(p[j])) continue;
      for (std::size_t k = 0; k <= j; ++k) c[k] = f.add(c[k], f.mul(p[j], s2[j][k]));
    }
    return c;
  }
  // P = R + (X)_h Q with deg R < h; Q(X) = sum_j c'_j (X - h)_j.
  const std::size_t h = (n + 1) / 2;
  auto qr = divrem(DensePoly<F>(f, p), falling_factorial_poly(f, h, 0, th), th);
  Vec<F> low = qr.remainder.coeffs();
  low.resize(h, f.zero());
  Vec<F> high = taylor_shift(qr.quotient, f.from_uint(h), ShiftMethod::automatic, th).coeffs();
  high.resize(n - h, f.zero());
  Vec<F> out = to_falling_rec(f, low, th);
  Vec<F> top = to_falling_rec(f, high, th);
  out.resize(h, f.zero());
  out.insert(out.end(), top.begin(), top.end());
  return out;
}

template <class F>
Vec<F> from_falling_rec(const F& f, const Vec<F>& c, const PolyMulThresholds& th) {
  const std::size_t n = c.size();
  if (n <= kBasisChangeBase) {
    auto s1 = stirling_first_kind(f, n == 0 ? 0 : n - 1);
    Vec<F> p(n, f.zero());
    for (std::size_t k = 0; k < n; ++k) {
      if (f.is_zero(c[k])) continue;
      for (std::size_t j = 0; j <= k; ++j) p[j] = f.add(p[j], f.mul(c[k], s1[k][j]));
    }
    return p;
  }
  // P = L + (X)_h S(X - h), S(Y) = sum_j c_{h+j} (Y)_j.
  const std::size_t h = (n + 1) / 2;
  Vec<F> lo(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(h));
  Vec<F> hi(c.begin() + static_cast<std::ptrdiff_t>(h), c.end());
  DensePoly<F> low(f, from_falling_rec(f, lo, th));
  DensePoly<F> s(f, from_falling_rec(f, hi, th));
  DensePoly<F> shifted = taylor_shift(s, f.from_int(-static_cast<std::int64_t>(h)), ShiftMethod::automatic, th);
  DensePoly<F> res = low + poly_mul(falling_factorial_poly(f, h, 0, th), shifted, th);
  Vec<F> out = res.coeffs();
  out.resize(n, f.zero());
  return out;
}

}  // namespace detail

/// Monomial to falling factorial basis, divide and conquer; any characteristic.
template <CoefficientField F>
FallingFactorialCoeffs<F> to_falling_factorial(const DensePoly<F>& p, const PolyMulThresholds& th = {}) {
  return FallingFactorialCoeffs<F>(p.field(), detail::to_falling_rec(p.field(), p.coeffs(), th));
}

/// Falling factorial to monomial basis; inverse of to_falling_factorial.
template <CoefficientField F>
DensePoly<F> from_falling_factorial(const FallingFactorialCoeffs<F>& c, const PolyMulThresholds& th = {}) {
  return DensePoly<F>(c.field, detail::from_falling_rec(c.field, c.c, th));
}

// ---------------------------------------------------------------------------
// Arithmetic progressions

/// sum_{j<=n} X^j / j!  (sign = -1 gives exp(-X)).
template <CoefficientField F>
DensePoly<F> exp_series(const FactorialTable<F>& fac, const F& f, std::size_t n, int sign = 1) {
  std::vector<element_t<F>> v(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    v[j] = (sign < 0 && (j & 1)) ? f.neg(fac.inv_fact[j]) : fac.inv_fact[j];
  }
  return DensePoly<F>(f, std::move(v));
}

/// [P(a), P(a+1), ..., P(a+n)] in softly linear time.
template <CoefficientField F>
std::vector<element_t<F>> eval_arith_prog(const DensePoly<F>& p, const element_t<F>& a, std::size_t n,
                                          const PolyMulThresholds& th = {}) {
  const F& f = p.field();
  require_invertible_up_to(f, n, "evaluation on an arithmetic progression");
  std::vector<element_t<F>> out(n + 1, f.zero());
  if (p.is_zero()) return out;
  // Q(j) / j! = [X^j] (sum_k c_k X^k) exp(X) where Q(X) = P(X + a) = sum_k c_k (X)_k.
  auto fac = factorial_table(n, f);
  auto c = to_falling_factorial(taylor_shift(p, a, ShiftMethod::automatic, th), th);
  std::vector<element_t<F>> head(c.c.begin(), c.c.begin() + static_cast<std::ptrdiff_t>(std::min(c.c.size(), n + 1)));
  auto g = mul_trunc(DensePoly<F>(f, std::move(head)), exp_series(fac, f, n), n + 1, th);
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = f.mul(g.coeffs()[j], fac.fact[j]);
  return out;
}

/// The unique P of degree < values.size() with P(a + j) = values[j].
template <CoefficientField F>
DensePoly<F> interp_arith_prog(const F& f, std::span<const element_t<F>> values, const element_t<F>& a,
                               const PolyMulThresholds& th = {}) {
  if (values.empty()) return DensePoly<F>(f);
  const std::size_t n = values.size() - 1;
  require_invertible_up_to(f, n, "interpolation on an arithmetic progression");
  auto fac = factorial_table(n, f);
  std::vector<element_t<F>> g(n + 1);
  for (std::size_t j = 0; j <= n; ++j) g[j] = f.mul(values[j], fac.inv_fact[j]);
  auto c = mul_trunc(DensePoly<F>(f, std::move(g)), exp_series(fac, f, n, -1), n + 1, th);
  auto q = from_falling_factorial(FallingFactorialCoeffs<F>(f, c.coeffs()), th);
  return taylor_shift(q, f.neg(a), ShiftMethod::automatic, th);
}

// ---------------------------------------------------------------------------
// Bivariate polynomials

/// Dense coefficient grid of a bivariate polynomial: at(i, j) is the
/// coefficient of X^i Y^j, for i < rows and j < cols.
template <CoefficientField F>
class BivariateGrid {
 public:
  using value_type = element_t<F>;

  BivariateGrid(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), c_(rows * cols, field_.zero()) {}

  const F& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  value_type& at(std::size_t i, std::size_t j) { return c_[i * cols_ + j]; }
  const value_type& at(std::size_t i, std::size_t j) const { return c_[i * cols_ + j]; }
  value_type get(std::size_t i, std::size_t j) const {
    return i < rows_ && j < cols_ ? c_[i * cols_ + j] : field_.zero();
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [&](const value_type& x) { return field_.is_zero(x); });
  }

  /// Kronecker packing with Y <- X^stride (stride >= rows).
  std::vector<value_type> pack(std::size_t stride) const {
    std::vector<value_type> v(cols_ == 0 ? 0 : (cols_ - 1) * stride + rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) v[i + j * stride] = at(i, j);
    return v;
  }

  static BivariateGrid unpack(const F& f, const std::vector<value_type>& v, std::size_t stride, std::size_t rows,
                              std::size_t cols) {
    BivariateGrid g(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        std::size_t k = i + j * stride;
        if (k < v.size()) g.at(i, j) = v[k];
      }
    return g;
  }

  friend bool operator==(const BivariateGrid& a, const BivariateGrid& b) {
    if (!(a.field_ == b.field_)) return false;
    const std::size_t r = std::max(a.rows_, b.rows_), c = std::max(a.cols_, b.cols_);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (!a.field_.eq(a.get(i, j), b.get(i, j))) return false;
    return true;
  }

 private:
  F field_;
  std::size_t rows_, cols_;
  std::vector<value_type> c_;
};

/// Commutative product via Kronecker substitution and one univariate product.
template <CoefficientField F>
BivariateGrid<F> bivar_mul(const BivariateGrid<F>& f, const BivariateGrid<F>& g, const PolyMulThresholds& th = {}) {
  require_same_field(f.field(), g.field());
  if (f.empty() || g.empty()) return BivariateGrid<F>(f.field(), 0, 0);
  const std::size_t rows = f.rows() + g.rows() - 1, cols = f.cols() + g.cols() - 1;
  const std::size_t stride = rows;
  auto h = detail::mul_vec<F>(f.field(), f.pack(stride), g.pack(stride), th);
  return BivariateGrid<F>::unpack(f.field(), h, stride, rows, cols);
}

/// Double-loop reference product, used as a test oracle.
template <CoefficientField F>
BivariateGrid<F> bivar_mul_schoolbook(const BivariateGrid<F>& f, const BivariateGrid<F>& g) {
  const F& fld = f.field();
  if (f.empty() || g.empty()) return BivariateGrid<F>(fld, 0, 0);
  BivariateGrid<F> h(fld, f.rows() + g.rows() - 1, f.cols() + g.cols() - 1);
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j)
      for (std::size_t k = 0; k < g.rows(); ++k)
        for (std::size_t l = 0; l < g.cols(); ++l)
          h.at(i + k, j + l) = fld.add(h.at(i + k, j + l), fld.mul(f.at(i, j), g.at(k, l)));
  return h;
}

}  // namespace oremul
