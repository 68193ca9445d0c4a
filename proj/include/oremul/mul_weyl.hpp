#pragma once

// Direct evaluation-interpolation product in K[X]<d>. The matrix of P on
// monomials, cut to rows 0..m and columns 0..n, has nonzero entries only on
// the diagonals l = -r..d, and entry (k + l, k) equals k! (S_l)_k where
// S_l = (sum_i p[i+l][i] X^i) exp(X). One truncated product per diagonal
// evaluates; multiplying by exp(-X) interpolates.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/matrix.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"

namespace oremul {

/// Instrumentation for eval_matrix and interpol_matrix.
struct WeylStats {
  std::size_t diagonal_products = 0;
};

namespace detail {

// sum_i p[i + l][i] X^i for i in [max(0, -l), min(r, d - l)], X^i indexed by i.
template <class F>
DensePoly<F> weyl_diagonal(const OrePoly<F>& p, long l) {
  const F& f = p.field();
  const long d = static_cast<long>(p.d()), r = static_cast<long>(p.r());
  const long lo = std::max(0L, -l), hi = std::min(r, d - l);
  if (lo > hi) return DensePoly<F>(f);
  std::vector<element_t<F>> c(static_cast<std::size_t>(hi + 1), f.zero());
  for (long i = lo; i <= hi; ++i) c[static_cast<std::size_t>(i)] = p.at(static_cast<std::size_t>(i + l), static_cast<std::size_t>(i));
  return DensePoly<F>(f, std::move(c));
}

}  // namespace detail

/// Rows 0..m and columns 0..n of the matrix of P on monomials; column k is
/// P(X^k) mod X^{m+1}. Needs m >= d, n >= r and p > n.
template <CoefficientField F>
DenseMatrix<F> eval_matrix(const OrePoly<F>& p, std::size_t m, std::size_t n, WeylStats* stats = nullptr,
                           const PolyMulThresholds& th = {}) {
  require_tag(p, VarTag::partial);
  const F& f = p.field();
  require_invertible_up_to(f, n, "d-operator evaluation");
  if (!p.is_zero() && (m < p.d() || n < p.r())) {
    throw WindowTooSmall("window (" + std::to_string(m) + ", " + std::to_string(n) + ") below bidegree (" +
                         std::to_string(p.d()) + ", " + std::to_string(p.r()) + ")");
  }
  DenseMatrix<F> out(f, m + 1, n + 1);
  const long d = static_cast<long>(p.d()), r = static_cast<long>(p.r());
  out.set_band(BandMetadata::offsets(-r, d, m + 1, n + 1));
  if (p.is_zero()) return out;
  auto fac = factorial_table(n, f);
  auto e = exp_series(fac, f, n);
  for (long l = -r; l <= d; ++l) {
    const long k0 = std::max(0L, -l), k1 = std::min(static_cast<long>(m) - l, static_cast<long>(n));
    if (k0 > k1) continue;
    auto q = detail::weyl_diagonal(p, l);
    if (q.is_zero()) continue;
    auto s = mul_trunc(q, e, static_cast<std::size_t>(k1 + 1), th);
    if (stats) ++stats->diagonal_products;
    for (long k = k0; k <= k1; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      out.at(static_cast<std::size_t>(k + l), uk) = f.mul(fac.fact[uk], s[uk]);
    }
  }
  return out;
}

/// The unique P of bidegree at most (d, r) whose (d+1) x (r+1) evaluation matrix is M.
template <CoefficientField F>
OrePoly<F> interpol_matrix(const DenseMatrix<F>& mat, std::size_t d, std::size_t r, WeylStats* stats = nullptr,
                           const PolyMulThresholds& th = {}) {
  const F& f = mat.field();
  require_invertible_up_to(f, r, "d-operator interpolation");
  if (mat.rows() != d + 1 || mat.cols() != r + 1) {
    throw DimensionMismatch("interpolation needs a " + std::to_string(d + 1) + " x " + std::to_string(r + 1) +
                            " matrix, got " + std::to_string(mat.rows()) + " x " + std::to_string(mat.cols()));
  }
  auto fac = factorial_table(r, f);
  auto e = exp_series(fac, f, r, -1);
  auto out = OrePoly<F>::zeros(f, VarTag::partial, d, r);
  const long dl = static_cast<long>(d), rl = static_cast<long>(r);
  for (long l = -rl; l <= dl; ++l) {
    const long k0 = std::max(0L, -l), k1 = std::min(dl - l, rl);
    if (k0 > k1) continue;
    std::vector<element_t<F>> g(static_cast<std::size_t>(k1 + 1), f.zero());
    bool any = false;
    for (long k = k0; k <= k1; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      g[uk] = f.mul(mat.at(static_cast<std::size_t>(k + l), uk), fac.inv_fact[uk]);
      any = any || !f.is_zero(g[uk]);
    }
    if (!any) continue;
    auto t = mul_trunc(DensePoly<F>(f, std::move(g)), e, static_cast<std::size_t>(k1 + 1), th);
    if (stats) ++stats->diagonal_products;
    // (T_l)_i is the coefficient of X^{l+i} d^i.
    for (long i = k0; i <= k1; ++i) out.at(static_cast<std::size_t>(l + i), static_cast<std::size_t>(i)) = t[static_cast<std::size_t>(i)];
  }
  out.normalize();
  return out;
}

/// C = BA from one product of evaluation matrices, of sizes
/// (d_C+1) x (d_A+r_C+1) and (d_A+r_C+1) x (r_C+1).
template <CoefficientField F>
OrePoly<F> mul_weyl(const OrePoly<F>& b, const OrePoly<F>& a, BlockCounter* counter = nullptr,
                    const MatMulOptions& opts = {}, WeylStats* stats = nullptr, const PolyMulThresholds& th = {}) {
  require_compatible(b, a);
  require_tag(a, VarTag::partial);
  const F& f = a.field();
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(f, VarTag::partial);
  const std::size_t da = a.d(), rc = a.r() + b.r(), dc = a.d() + b.d();
  require_invertible_up_to(f, da + rc, "MulWeyl");
  auto ma = eval_matrix(a, da + rc, rc, stats, th);
  auto mb = eval_matrix(b, dc, da + rc, stats, th);
  auto mc = mat_mul(mb, ma, opts, counter);
  return interpol_matrix(mc, dc, rc, stats, th);
}

/// P = sum_{i=1}^{r} l_{-i}(X d) d^i + sum_{i=0}^{d} X^i l_i(X d).
template <CoefficientField F>
struct HomogeneousParts {
  std::vector<DensePoly<F>> negative;  // negative[i-1] = l_{-i}
  std::vector<DensePoly<F>> positive;  // positive[i] = l_i

  friend bool operator==(const HomogeneousParts&, const HomogeneousParts&) = default;
};

/// Since X^j d^j = (X d)_j, every weight component is a polynomial in X d
/// given on the falling factorial basis.
template <CoefficientField F>
HomogeneousParts<F> homogeneous_decompose(const OrePoly<F>& p, const PolyMulThresholds& th = {}) {
  require_tag(p, VarTag::partial);
  const F& f = p.field();
  HomogeneousParts<F> h;
  if (p.is_zero()) return h;
  const std::size_t d = p.d(), r = p.r();
  for (std::size_t s = 1; s <= r; ++s) {
    std::vector<element_t<F>> c;
    for (std::size_t j = 0; j <= std::min(r - s, d); ++j) c.push_back(p.at(j, j + s));
    h.negative.push_back(from_falling_factorial(FallingFactorialCoeffs<F>(f, std::move(c)), th));
  }
  for (std::size_t t = 0; t <= d; ++t) {
    std::vector<element_t<F>> c;
    for (std::size_t i = 0; i <= std::min(d - t, r); ++i) c.push_back(p.at(t + i, i));
    h.positive.push_back(from_falling_factorial(FallingFactorialCoeffs<F>(f, std::move(c)), th));
  }
  return h;
}

template <CoefficientField F>
OrePoly<F> homogeneous_recompose(const F& f, const HomogeneousParts<F>& h, const PolyMulThresholds& th = {}) {
  std::size_t d = h.positive.empty() ? 0 : h.positive.size() - 1, r = h.negative.size();
  for (std::size_t s = 1; s <= h.negative.size(); ++s)
    if (!h.negative[s - 1].is_zero()) {
      const auto deg = static_cast<std::size_t>(h.negative[s - 1].degree());
      d = std::max(d, deg);
      r = std::max(r, deg + s);
    }
  for (std::size_t t = 0; t < h.positive.size(); ++t)
    if (!h.positive[t].is_zero()) {
      const auto deg = static_cast<std::size_t>(h.positive[t].degree());
      d = std::max(d, t + deg);
      r = std::max(r, deg);
    }
  auto out = OrePoly<F>::zeros(f, VarTag::partial, d, r);
  for (std::size_t s = 1; s <= h.negative.size(); ++s) {
    auto c = to_falling_factorial(h.negative[s - 1], th).c;
    for (std::size_t j = 0; j < c.size(); ++j) out.at(j, j + s) = f.add(out.at(j, j + s), c[j]);
  }
  for (std::size_t t = 0; t < h.positive.size(); ++t) {
    auto c = to_falling_factorial(h.positive[t], th).c;
    for (std::size_t i = 0; i < c.size(); ++i) out.at(t + i, i) = f.add(out.at(t + i, i), c[i]);
  }
  out.normalize();
  return out;
}

}  // namespace oremul
