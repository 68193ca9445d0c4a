#pragma once

// Evaluation-interpolation product in K[X]<theta>. An operator A acts on X^k
// by A(X^k) = X^k sum_i A~_i(k) X^i with A~_i(T) = sum_j a[i][j] T^j, so the
// matrix of A on monomials is banded and its diagonals are the values of the
// A~_i at 0, 1, 2, ...

#include <cstddef>
#include <string>
#include <vector>

#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/matrix.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"

namespace oremul {

/// How diagonals are evaluated and interpolated: one product against a
/// Vandermonde matrix (or its inverse), or fast arithmetic-progression methods.
enum class EvalVariant { vandermonde, fast };

inline std::string to_string(EvalVariant v) { return v == EvalVariant::vandermonde ? "vandermonde" : "fast"; }

/// V[k][j] = points[k]^j for j < ncols.
template <CoefficientField F>
DenseMatrix<F> vandermonde_matrix(const F& f, const std::vector<element_t<F>>& points, std::size_t ncols) {
  DenseMatrix<F> v(f, points.size(), ncols);
  for (std::size_t k = 0; k < points.size(); ++k) {
    element_t<F> x = f.one();
    for (std::size_t j = 0; j < ncols; ++j) {
      v.at(k, j) = x;
      x = f.mul(x, points[k]);
    }
  }
  return v;
}

/// Inverse of the square Vandermonde matrix on distinct points, in O(s^2):
/// column k holds the coefficients of the k-th Lagrange basis polynomial.
template <CoefficientField F>
DenseMatrix<F> inverse_vandermonde(const F& f, const std::vector<element_t<F>>& points) {
  const std::size_t n = points.size();
  // master = prod_m (X - a_m), coefficients low to high
  std::vector<element_t<F>> master{f.one()};
  for (const auto& a : points) {
    master.push_back(f.zero());
    for (std::size_t j = master.size() - 1; j > 0; --j) master[j] = f.sub(master[j - 1], f.mul(a, master[j]));
    master[0] = f.neg(f.mul(a, master[0]));
  }
  DenseMatrix<F> inv(f, n, n);
  std::vector<element_t<F>> q(n);
  for (std::size_t k = 0; k < n; ++k) {
    element_t<F> denom = f.one();
    for (std::size_t m = 0; m < n; ++m)
      if (m != k) denom = f.mul(denom, f.sub(points[k], points[m]));
    if (f.is_zero(denom)) {
      throw CharacteristicTooSmall("interpolation points are not distinct in " + f.name());
    }
    const element_t<F> w = f.inv(denom);
    // master / (X - a_k) by synthetic division
    element_t<F> carry = master[n];
    for (std::size_t j = n; j-- > 0;) {
      q[j] = carry;
      carry = f.add(master[j], f.mul(points[k], carry));
    }
    for (std::size_t j = 0; j < n; ++j) inv.at(j, k) = f.mul(q[j], w);
  }
  return inv;
}

template <CoefficientField F>
std::vector<element_t<F>> integer_points(const F& f, long first, std::size_t count) {
  std::vector<element_t<F>> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) pts.push_back(f.from_int(first + static_cast<long>(k)));
  return pts;
}

/// The evaluation matrix of a theta-operator on X^0 .. X^(cols-1), cut to
/// `rows` rows. Entry (i + k, k) is A~_i(k); every other entry is zero.
template <CoefficientField F>
DenseMatrix<F> theta_to_matrix(const OrePoly<F>& a, std::size_t rows, std::size_t cols,
                               EvalVariant variant = EvalVariant::fast, BlockCounter* counter = nullptr,
                               const MatMulOptions& opts = {}) {
  require_tag(a, VarTag::theta);
  const F& f = a.field();
  if (cols > 0) require_invertible_up_to(f, cols - 1, "theta evaluation matrix");
  DenseMatrix<F> m(f, rows, cols);
  m.set_band(BandMetadata::offsets(0, static_cast<long>(a.d()), rows, cols));
  if (a.is_zero() || cols == 0) return m;
  // values[k][i] = A~_i(k)
  std::vector<std::vector<element_t<F>>> values(cols, std::vector<element_t<F>>(a.rows(), f.zero()));
  if (variant == EvalVariant::vandermonde) {
    auto v = vandermonde_matrix(f, integer_points(f, 0, cols), a.cols());
    DenseMatrix<F> coef(f, a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) coef.at(j, i) = a.at(i, j);
    auto prod = mat_mul(v, coef, opts, counter);
    for (std::size_t k = 0; k < cols; ++k)
      for (std::size_t i = 0; i < a.rows(); ++i) values[k][i] = prod.at(k, i);
  } else {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      auto vals = eval_arith_prog(a.row(i), f.zero(), cols - 1);
      for (std::size_t k = 0; k < cols; ++k) values[k][i] = vals[k];
    }
  }
  for (std::size_t k = 0; k < cols; ++k)
    for (std::size_t i = 0; i < a.rows() && i + k < rows; ++i) m.at(i + k, k) = values[k][i];
  return m;
}

/// The theta-operator of bidegree at most (d, r) whose evaluation matrix
/// starts with M: reads the diagonals on columns 0..r and interpolates.
template <CoefficientField F>
OrePoly<F> matrix_to_theta(const DenseMatrix<F>& m, std::size_t d, std::size_t r,
                           EvalVariant variant = EvalVariant::fast, BlockCounter* counter = nullptr,
                           const MatMulOptions& opts = {}) {
  const F& f = m.field();
  require_invertible_up_to(f, r, "theta interpolation");
  if (m.cols() < r + 1 || m.rows() < d + r + 1) {
    throw WindowTooSmall("need at least " + std::to_string(d + r + 1) + " x " + std::to_string(r + 1) + ", got " +
                         std::to_string(m.rows()) + " x " + std::to_string(m.cols()));
  }
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (f.is_zero(m.at(i, k))) continue;
      if (i < k || i - k > d) {
        throw InconsistentBand("entry (" + std::to_string(i) + ", " + std::to_string(k) + ") is off the band");
      }
    }
  auto c = OrePoly<F>::zeros(f, VarTag::theta, d, r);
  if (variant == EvalVariant::vandermonde) {
    auto vinv = inverse_vandermonde(f, integer_points(f, 0, r + 1));
    DenseMatrix<F> values(f, r + 1, d + 1);
    for (std::size_t k = 0; k <= r; ++k)
      for (std::size_t i = 0; i <= d; ++i) values.at(k, i) = m.at(i + k, k);
    auto coef = mat_mul(vinv, values, opts, counter);
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j <= r; ++j) c.at(i, j) = coef.at(j, i);
  } else {
    std::vector<element_t<F>> vals(r + 1);
    for (std::size_t i = 0; i <= d; ++i) {
      for (std::size_t k = 0; k <= r; ++k) vals[k] = m.at(i + k, k);
      auto p = interp_arith_prog<F>(f, vals, f.zero());
      for (std::size_t j = 0; j < p.size(); ++j) c.at(i, j) = p.coeffs()[j];
    }
  }
  c.normalize();
  return c;
}

/// C = BA in K[X]<theta> through M^C = M^B M^A. With the Vandermonde variant
/// the evaluations and interpolations are matrix products too, and all four
/// products go through the counter; with the fast variant only the main one.
template <CoefficientField F>
OrePoly<F> mul_theta_vdh(const OrePoly<F>& b, const OrePoly<F>& a, EvalVariant variant = EvalVariant::fast,
                         BlockCounter* counter = nullptr, const MatMulOptions& opts = {}) {
  require_compatible(b, a);
  require_tag(a, VarTag::theta);
  const F& f = a.field();
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(f, VarTag::theta);
  const std::size_t da = a.d(), db = b.d(), rc = a.r() + b.r(), dc = da + db;
  require_invertible_up_to(f, da + rc, "theta evaluation-interpolation product");
  BlockCounter* side = variant == EvalVariant::vandermonde ? counter : nullptr;
  auto ma = theta_to_matrix(a, da + rc + 1, rc + 1, variant, side, opts);
  auto mb = theta_to_matrix(b, dc + rc + 1, da + rc + 1, variant, side, opts);
  auto mc = mat_mul(mb, ma, opts, counter);
  return matrix_to_theta(mc, dc, rc, variant, side, opts);
}

}  // namespace oremul
