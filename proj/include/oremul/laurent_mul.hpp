#pragma once

// Product in K[X]<d> through K[X, 1/X]<theta>: convert, multiply the banded
// evaluation matrices of the Laurent operators on windows of integer points,
// interpolate, convert back. The Vandermonde variant performs every step as a
// matrix product (Stirling and Vandermonde matrices) and counts them all; the
// fast variant converts by falling-factorial base change, evaluates and
// interpolates on arithmetic progressions, and counts only the main product.

#include <cstddef>
#include <string>
#include <vector>

#include "oremul/conversions.hpp"
#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/matrix.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"
#include "oremul/theta_mul.hpp"

namespace oremul {

/// M^L on the window alpha..beta: column gamma - alpha holds L(X^gamma) on
/// X^{-v+alpha}, ..., X^{d+beta}; entry (c + i + v, c) is L~_i(alpha + c).
template <CoefficientField F>
struct LaurentEvalMatrix {
  DenseMatrix<F> matrix;
  long alpha = 0, beta = 0;
  std::size_t v = 0;
  long d = 0;
};

namespace detail {

// Coefficient grid of a Laurent operator padded to valuation v and degree d:
// g(i + v, j) = l[i][j].
template <class F>
DenseMatrix<F> laurent_grid(const LaurentThetaPoly<F>& l, std::size_t v, long d, std::size_t r) {
  const F& f = l.field();
  const long lv = static_cast<long>(v);
  if (static_cast<long>(l.valuation()) > lv || (!l.is_zero() && (l.degree() > d || l.r() > r))) {
    throw WindowTooSmall("padding smaller than the operator");
  }
  DenseMatrix<F> g(f, static_cast<std::size_t>(lv + d + 1), r + 1);
  if (l.is_zero()) return g;
  for (long i = -static_cast<long>(l.valuation()); i <= l.degree(); ++i)
    for (std::size_t j = 0; j <= l.r(); ++j) g.at(static_cast<std::size_t>(i + lv), j) = l.coeff(i, j);
  return g;
}

// Diagonal values vals(i, c) = L~_i(alpha + c) for c = 0..beta-alpha.
template <class F>
DenseMatrix<F> laurent_values(const DenseMatrix<F>& grid, long alpha, long beta, EvalVariant variant,
                              BlockCounter* counter, const MatMulOptions& opts) {
  const F& f = grid.field();
  const std::size_t npts = static_cast<std::size_t>(beta - alpha + 1);
  if (variant == EvalVariant::vandermonde) {
    auto v = vandermonde_matrix(f, integer_points(f, alpha, npts), grid.cols());
    DenseMatrix<F> vt(f, grid.cols(), npts);
    for (std::size_t k = 0; k < npts; ++k)
      for (std::size_t j = 0; j < grid.cols(); ++j) vt.at(j, k) = v.at(k, j);
    return mat_mul(grid, vt, opts, counter);
  }
  DenseMatrix<F> vals(f, grid.rows(), npts);
  const auto a = f.from_int(alpha);
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    DensePoly<F> row(f, std::vector<element_t<F>>(grid.data().begin() + static_cast<std::ptrdiff_t>(i * grid.cols()),
                                                  grid.data().begin() + static_cast<std::ptrdiff_t>((i + 1) * grid.cols())));
    if (row.is_zero()) continue;
    auto e = eval_arith_prog(row, a, npts - 1);
    for (std::size_t c = 0; c < npts; ++c) vals.at(i, c) = e[c];
  }
  return vals;
}

template <class F>
LaurentEvalMatrix<F> laurent_window(const DenseMatrix<F>& grid, std::size_t v, long alpha, long beta,
                                    EvalVariant variant, BlockCounter* counter, const MatMulOptions& opts) {
  const F& f = grid.field();
  if (alpha > beta) throw WindowTooSmall("empty evaluation window");
  require_invertible_up_to(f, static_cast<std::size_t>(beta - alpha), "Laurent evaluation window");
  const long d = static_cast<long>(grid.rows()) - 1 - static_cast<long>(v);
  const std::size_t npts = static_cast<std::size_t>(beta - alpha + 1);
  const std::size_t rows = grid.rows() + npts - 1;
  auto vals = laurent_values(grid, alpha, beta, variant, counter, opts);
  DenseMatrix<F> m(f, rows, npts);
  m.set_band(BandMetadata::offsets(0, static_cast<long>(grid.rows()) - 1, rows, npts));
  for (std::size_t c = 0; c < npts; ++c)
    for (std::size_t i = 0; i < grid.rows(); ++i) m.at(c + i, c) = vals.at(i, c);
  return {std::move(m), alpha, beta, v, d};
}

// Inverse of laurent_window on 0..r: coefficient grid with nrows X powers.
template <class F>
DenseMatrix<F> laurent_interp(const DenseMatrix<F>& m, std::size_t nrows, std::size_t r, EvalVariant variant,
                              BlockCounter* counter, const MatMulOptions& opts) {
  const F& f = m.field();
  require_invertible_up_to(f, r, "Laurent interpolation");
  if (m.cols() < r + 1 || m.rows() < nrows + r) throw WindowTooSmall("product window too small");
  DenseMatrix<F> vals(f, nrows, r + 1);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t c = 0; c <= r; ++c) vals.at(i, c) = m.at(c + i, c);
  if (variant == EvalVariant::vandermonde) {
    auto inv = inverse_vandermonde(f, integer_points(f, 0, r + 1));
    DenseMatrix<F> invt(f, r + 1, r + 1);
    for (std::size_t j = 0; j <= r; ++j)
      for (std::size_t k = 0; k <= r; ++k) invt.at(k, j) = inv.at(j, k);
    return mat_mul(vals, invt, opts, counter);
  }
  DenseMatrix<F> grid(f, nrows, r + 1);
  std::vector<element_t<F>> row(r + 1);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t c = 0; c <= r; ++c) row[c] = vals.at(i, c);
    auto p = interp_arith_prog<F>(f, row, f.zero());
    for (std::size_t j = 0; j < p.size(); ++j) grid.at(i, j) = p.coeffs()[j];
  }
  return grid;
}

template <class F>
LaurentThetaPoly<F> grid_to_laurent(const DenseMatrix<F>& g, std::size_t v) {
  const F& f = g.field();
  if (g.rows() == 0) return LaurentThetaPoly<F>(f);
  auto body = OrePoly<F>::zeros(f, VarTag::theta, g.rows() - 1, g.cols() - 1);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) body.at(i, j) = g.at(i, j);
  return LaurentThetaPoly<F>(std::move(body), v);
}

// Step 1 with a Stirling matrix: row s + r of G holds b_{s+j, j} (the
// coefficients of beta_s on the falling factorials (theta)_j), times s(j, k).
template <class F>
DenseMatrix<F> partial_to_laurent_grid_stirling(const OrePoly<F>& b, std::size_t d, std::size_t r,
                                                BlockCounter* counter, const MatMulOptions& opts) {
  const F& f = b.field();
  DenseMatrix<F> g(f, d + r + 1, r + 1);
  for (std::size_t s = 0; s <= d + r; ++s)
    for (std::size_t j = 0; j <= r; ++j) {
      const long i = static_cast<long>(s + j) - static_cast<long>(r);
      if (i >= 0) g.at(s, j) = b.coeff(static_cast<std::size_t>(i), j);
    }
  auto s1 = stirling_first_kind(f, r);
  DenseMatrix<F> sm(f, r + 1, r + 1);
  for (std::size_t j = 0; j <= r; ++j)
    for (std::size_t k = 0; k <= j; ++k) sm.at(j, k) = s1[j][k];
  return mat_mul(g, sm, opts, counter);
}

// Step 3 with a Stirling matrix: row s + v of grid * S2 holds c_{s+j, j}.
template <class F>
OrePoly<F> laurent_grid_to_partial_stirling(const DenseMatrix<F>& grid, std::size_t v, BlockCounter* counter,
                                            const MatMulOptions& opts) {
  const F& f = grid.field();
  const std::size_t r = grid.cols() - 1;
  auto s2 = stirling_second_kind(f, r);
  DenseMatrix<F> sm(f, r + 1, r + 1);
  for (std::size_t k = 0; k <= r; ++k)
    for (std::size_t j = 0; j <= k; ++j) sm.at(k, j) = s2[k][j];
  auto w = mat_mul(grid, sm, opts, counter);
  const long d = static_cast<long>(grid.rows()) - 1 - static_cast<long>(v);
  if (d + static_cast<long>(r) < 0) return OrePoly<F>(f, VarTag::partial);
  auto out = OrePoly<F>::zeros(f, VarTag::partial, static_cast<std::size_t>(d + static_cast<long>(r)), r);
  for (std::size_t row = 0; row < w.rows(); ++row)
    for (std::size_t j = 0; j <= r; ++j) {
      if (f.is_zero(w.at(row, j))) continue;
      const long i = static_cast<long>(row + j) - static_cast<long>(v);
      if (i < 0) throw InvalidDomain("Laurent operator has no polynomial form in d");
      out.at(static_cast<std::size_t>(i), j) = w.at(row, j);
    }
  out.normalize();
  return out;
}

}  // namespace detail

/// The banded matrix of a Laurent operator on the window alpha..beta.
template <CoefficientField F>
LaurentEvalMatrix<F> laurent_to_matrix(const LaurentThetaPoly<F>& l, long alpha, long beta,
                                       EvalVariant variant = EvalVariant::fast, BlockCounter* counter = nullptr,
                                       const MatMulOptions& opts = {}) {
  const long d = l.is_zero() ? 0 : l.degree();
  auto grid = detail::laurent_grid(l, l.valuation(), d, l.r());
  return detail::laurent_window(grid, l.valuation(), alpha, beta, variant, counter, opts);
}

/// The Laurent operator of valuation at most v, degree at most d and
/// theta-degree at most r whose matrix on the window 0..r starts with M.
template <CoefficientField F>
LaurentThetaPoly<F> matrix_to_laurent(const DenseMatrix<F>& m, std::size_t v, long d, std::size_t r,
                                      EvalVariant variant = EvalVariant::fast, BlockCounter* counter = nullptr,
                                      const MatMulOptions& opts = {}) {
  const long nrows = static_cast<long>(v) + d + 1;
  if (nrows <= 0) return LaurentThetaPoly<F>(m.field());
  auto grid = detail::laurent_interp(m, static_cast<std::size_t>(nrows), r, variant, counter, opts);
  return detail::grid_to_laurent(grid, v);
}

/// C = BA in K[X]<d> via M^C_{0,r_C} = M^B_{-v_A, d_A+r_C} M^A_{0,r_C}. Matrix
/// sizes use the nominal bounds v = r, degree d of each converted operator.
template <CoefficientField F>
OrePoly<F> mul_partial_vdh(const OrePoly<F>& b, const OrePoly<F>& a, EvalVariant variant = EvalVariant::fast,
                           BlockCounter* counter = nullptr, const MatMulOptions& opts = {}) {
  require_compatible(b, a);
  require_tag(a, VarTag::partial);
  const F& f = a.field();
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(f, VarTag::partial);
  const std::size_t da = a.d(), ra = a.r(), db = b.d(), rb = b.r();
  const std::size_t va = ra, vb = rb, rc = ra + rb, vc = va + vb, dc = da + db;
  require_invertible_up_to(f, va + da + rc, "Laurent evaluation-interpolation product");
  const bool vand = variant == EvalVariant::vandermonde;
  BlockCounter* side = vand ? counter : nullptr;

  // Step 1: Laurent theta forms.
  DenseMatrix<F> ga(f, 0, 0), gb(f, 0, 0);
  if (vand) {
    ga = detail::partial_to_laurent_grid_stirling(a, da, ra, side, opts);
    gb = detail::partial_to_laurent_grid_stirling(b, db, rb, side, opts);
  } else {
    ga = detail::laurent_grid(partial_to_theta(a), va, static_cast<long>(da), ra);
    gb = detail::laurent_grid(partial_to_theta(b), vb, static_cast<long>(db), rb);
  }
  // Step 2.1: evaluation matrices.
  auto ma = detail::laurent_window(ga, va, 0, static_cast<long>(rc), variant, side, opts);
  auto mb = detail::laurent_window(gb, vb, -static_cast<long>(va), static_cast<long>(da + rc), variant, side, opts);
  // Step 2.2
  auto mc = mat_mul(mb.matrix, ma.matrix, opts, counter);
  // Step 2.3
  auto gc = detail::laurent_interp(mc, vc + dc + 1, rc, variant, side, opts);
  // Step 3
  if (vand) return detail::laurent_grid_to_partial_stirling(gc, vc, side, opts);
  return laurent_to_partial(detail::grid_to_laurent(gc, vc));
}

}  // namespace oremul
