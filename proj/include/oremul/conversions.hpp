#pragma once

// Change of derivation between K[X]<d> and K[X, 1/X]<theta>. Since
// X^k d^k = (theta)_k, the falling factorial of theta, both directions reduce
// to one falling-factorial base change per X-shift; valid in any characteristic.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"

namespace oremul {

/// L = sum_{i=-v}^{d} sum_j l[i][j] X^i theta^j, stored as X^{-v} * body with
/// body a polynomial theta-operator: body[i + v][j] = l[i][j].
template <CoefficientField F>
class LaurentThetaPoly {
 public:
  using value_type = element_t<F>;

  explicit LaurentThetaPoly(F field) : body_(std::move(field), VarTag::theta) {}
  /// X^{-v} * body, normalized so that v only counts nonzero low rows.
  LaurentThetaPoly(OrePoly<F> body, std::size_t v) : body_(std::move(body)), v_(v) {
    require_tag(body_, VarTag::theta);
    normalize();
  }
  /// A polynomial theta-operator seen as a Laurent one (v = 0).
  static LaurentThetaPoly from_theta(const OrePoly<F>& a) { return LaurentThetaPoly(a, 0); }

  const F& field() const noexcept { return body_.field(); }
  bool is_zero() const noexcept { return body_.is_zero(); }
  std::size_t valuation() const noexcept { return v_; }
  /// Highest X power; may be negative. -v - 1 for the zero operator.
  long degree() const noexcept { return static_cast<long>(body_.rows()) - 1 - static_cast<long>(v_); }
  std::size_t r() const noexcept { return body_.r(); }
  const OrePoly<F>& body() const noexcept { return body_; }

  value_type coeff(long i, std::size_t j) const {
    const long k = i + static_cast<long>(v_);
    return k < 0 ? field().zero() : body_.coeff(static_cast<std::size_t>(k), j);
  }
  /// sum_j l[i][j] T^j
  DensePoly<F> row(long i) const {
    const long k = i + static_cast<long>(v_);
    return k < 0 ? DensePoly<F>(field()) : body_.row(static_cast<std::size_t>(k));
  }

  friend bool operator==(const LaurentThetaPoly& a, const LaurentThetaPoly& b) {
    return a.v_ == b.v_ && a.body_ == b.body_;
  }

 private:
  void normalize() {
    body_.normalize();
    if (body_.is_zero()) {
      v_ = 0;
      return;
    }
    std::size_t low = 0;
    while (low < v_ && body_.row(low).is_zero()) ++low;
    if (low == 0) return;
    auto b = OrePoly<F>::zeros(field(), VarTag::theta, body_.d() - low, body_.r());
    for (std::size_t i = low; i < body_.rows(); ++i)
      for (std::size_t j = 0; j < body_.cols(); ++j) b.at(i - low, j) = body_.at(i, j);
    b.normalize();
    body_ = std::move(b);
    v_ -= low;
  }

  OrePoly<F> body_;
  std::size_t v_ = 0;
};

namespace detail {

// Adds sum_k c_k X^{s+k} d^k into out, where out has rows for X^0..X^{out.rows()-1}.
template <class F>
void add_falling_row(OrePoly<F>& out, long s, const std::vector<element_t<F>>& c) {
  const F& f = out.field();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (f.is_zero(c[k])) continue;
    const long i = s + static_cast<long>(k);
    if (i < 0) throw InvalidDomain("Laurent operator has no polynomial form in d");
    out.at(static_cast<std::size_t>(i), k) = f.add(out.at(static_cast<std::size_t>(i), k), c[k]);
  }
}

}  // namespace detail

/// The d-form of a Laurent theta-operator, whose X-powers must become nonnegative.
template <CoefficientField F>
OrePoly<F> laurent_to_partial(const LaurentThetaPoly<F>& l, const PolyMulThresholds& th = {}) {
  const F& f = l.field();
  if (l.is_zero()) return OrePoly<F>(f, VarTag::partial);
  const long v = static_cast<long>(l.valuation()), d = l.degree();
  const std::size_t r = l.r();
  if (d + static_cast<long>(r) < 0) throw InvalidDomain("Laurent operator has no polynomial form in d");
  auto out = OrePoly<F>::zeros(f, VarTag::partial, static_cast<std::size_t>(d + static_cast<long>(r)), r);
  for (long s = -v; s <= d; ++s) {
    auto row = l.row(s);
    if (row.is_zero()) continue;
    detail::add_falling_row(out, s, to_falling_factorial(row, th).c);
  }
  out.normalize();
  return out;
}

/// A = sum_i alpha_i(X) theta^i rewritten in d; X-degree at most d + r.
template <CoefficientField F>
OrePoly<F> theta_to_partial(const OrePoly<F>& a, const PolyMulThresholds& th = {}) {
  require_tag(a, VarTag::theta);
  return laurent_to_partial(LaurentThetaPoly<F>::from_theta(a), th);
}

/// B = sum_i b_i(X) d^i rewritten as sum_i beta_i theta^i with Laurent beta_i
/// of valuation at least -r and degree at most d.
template <CoefficientField F>
LaurentThetaPoly<F> partial_to_theta(const OrePoly<F>& b, const PolyMulThresholds& th = {}) {
  require_tag(b, VarTag::partial);
  const F& f = b.field();
  if (b.is_zero()) return LaurentThetaPoly<F>(f);
  const std::size_t d = b.d(), r = b.r();
  auto body = OrePoly<F>::zeros(f, VarTag::theta, d + r, r);
  // X^i d^j = X^{i-j} (theta)_j; s = i - j ranges over -r..d.
  std::vector<element_t<F>> c;
  for (long s = -static_cast<long>(r); s <= static_cast<long>(d); ++s) {
    c.assign(r + 1, f.zero());
    bool any = false;
    for (std::size_t j = 0; j <= r; ++j) {
      const long i = s + static_cast<long>(j);
      if (i < 0 || i > static_cast<long>(d)) continue;
      c[j] = b.at(static_cast<std::size_t>(i), j);
      any = any || !f.is_zero(c[j]);
    }
    if (!any) continue;
    auto row = from_falling_factorial(FallingFactorialCoeffs<F>(f, c), th);
    const std::size_t k = static_cast<std::size_t>(s + static_cast<long>(r));
    for (std::size_t j = 0; j < row.size(); ++j) body.at(k, j) = row.coeffs()[j];
  }
  return LaurentThetaPoly<F>(std::move(body), r);
}

/// theta <- theta + n in every row, one Taylor shift per X power.
template <CoefficientField F>
OrePoly<F> theta_shift(const OrePoly<F>& c, long n, const PolyMulThresholds& th = {}) {
  require_tag(c, VarTag::theta);
  if (n == 0 || c.is_zero()) return c;
  const F& f = c.field();
  const auto a = f.from_int(n);
  auto out = OrePoly<F>::zeros(f, VarTag::theta, c.d(), c.r());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    auto row = c.row(i);
    if (row.is_zero()) continue;
    auto s = taylor_shift(row, a, ShiftMethod::automatic, th);
    for (std::size_t j = 0; j < s.size(); ++j) out.at(i, j) = s.coeffs()[j];
  }
  out.normalize();
  return out;
}

template <CoefficientField F>
LaurentThetaPoly<F> theta_shift(const LaurentThetaPoly<F>& c, long n, const PolyMulThresholds& th = {}) {
  return LaurentThetaPoly<F>(theta_shift(c.body(), n, th), c.valuation());
}

/// BA for Laurent operators from any product in K[X]<theta>:
/// X^{-vB} B' X^{-vA} A' = X^{-vA-vB} B'(X, theta - vA) A'.
template <CoefficientField F, class ThetaMul>
LaurentThetaPoly<F> mul_laurent(const LaurentThetaPoly<F>& b, const LaurentThetaPoly<F>& a, ThetaMul&& theta_mul,
                                const PolyMulThresholds& th = {}) {
  require_same_field(b.field(), a.field());
  if (a.is_zero() || b.is_zero()) return LaurentThetaPoly<F>(a.field());
  auto shifted = theta_shift(b.body(), -static_cast<long>(a.valuation()), th);
  return LaurentThetaPoly<F>(theta_mul(shifted, a.body()), a.valuation() + b.valuation());
}

/// BA in K[X]<d> through K[X, 1/X]<theta> and any theta product.
template <CoefficientField F, class ThetaMul>
OrePoly<F> mul_partial_via_theta(const OrePoly<F>& b, const OrePoly<F>& a, ThetaMul&& theta_mul,
                                 const PolyMulThresholds& th = {}) {
  require_compatible(b, a);
  require_tag(a, VarTag::partial);
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(a.field(), VarTag::partial);
  auto c = mul_laurent(partial_to_theta(b, th), partial_to_theta(a, th), theta_mul, th);
  return laurent_to_partial(c, th);
}

}  // namespace oremul
