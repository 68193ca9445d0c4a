#pragma once

// Matrix products computed through operator products in K[X]<theta>: a lower
// triangular matrix is the top-left window of the evaluation matrix of the
// theta-operator whose rows interpolate its diagonals, and a general product
// N M sits in the square of a block lower triangular matrix.

#include <cstddef>
#include <string>
#include <vector>

#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/matrix.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"
#include "oremul/theta_mul.hpp"

namespace oremul {

/// The theta-operator sum_l X^l T~_l(theta) with T~_l of degree <= n - l
/// interpolating the l-th lower diagonal of L on 0..n-l.
template <CoefficientField F>
OrePoly<F> lower_triangular_to_theta(const DenseMatrix<F>& l, const PolyMulThresholds& th = {}) {
  const F& f = l.field();
  if (l.rows() != l.cols()) throw DimensionMismatch("triangular matrix must be square");
  if (!l.is_lower_triangular()) throw NotLowerTriangular("entries above the diagonal");
  if (l.rows() == 0) return OrePoly<F>(f, VarTag::theta);
  const std::size_t n = l.rows() - 1;
  require_invertible_up_to(f, n, "diagonal interpolation");
  auto op = OrePoly<F>::zeros(f, VarTag::theta, n, n);
  std::vector<element_t<F>> diag;
  for (std::size_t d = 0; d <= n; ++d) {
    diag.clear();
    for (std::size_t j = 0; j + d <= n; ++j) diag.push_back(l.at(d + j, j));
    auto p = interp_arith_prog<F>(f, diag, f.zero(), th);
    for (std::size_t j = 0; j < p.size(); ++j) op.at(d, j) = p.coeffs()[j];
  }
  op.normalize();
  return op;
}

/// L1 L2 for (n+1) x (n+1) lower triangular matrices via one product of
/// theta-operators; the result is the top-left window of M^{BA}.
template <CoefficientField F>
DenseMatrix<F> tri_mul_via_ops(const DenseMatrix<F>& l1, const DenseMatrix<F>& l2, BlockCounter* counter = nullptr,
                               const MatMulOptions& opts = {}) {
  require_same_field(l1.field(), l2.field());
  if (l1.rows() != l2.rows() || l1.cols() != l2.cols()) throw DimensionMismatch("triangular operands differ in size");
  const std::size_t size = l1.rows();
  auto b = lower_triangular_to_theta(l1);
  auto a = lower_triangular_to_theta(l2);
  auto c = mul_theta_vdh(b, a, EvalVariant::fast, counter, opts);
  auto m = theta_to_matrix(c, size, size, EvalVariant::fast);
  m.clear_band();
  return m;
}

/// [[I, 0, 0], [M, I, 0], [0, N, I]] squared, through tri_mul_via_ops; its
/// blocks below the diagonal are 2M, N M and 2N.
template <CoefficientField F>
DenseMatrix<F> block_triangular_square(const DenseMatrix<F>& m, const DenseMatrix<F>& n) {
  require_same_field(m.field(), n.field());
  const std::size_t k = m.rows();
  if (m.cols() != k || n.rows() != k || n.cols() != k) throw DimensionMismatch("operands must be square and equal");
  auto t = DenseMatrix<F>::identity(m.field(), 3 * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      t.at(k + i, j) = m.at(i, j);
      t.at(2 * k + i, k + j) = n.at(i, j);
    }
  return tri_mul_via_ops(t, t);
}

/// N M read off the lower-left block of the square above.
template <CoefficientField F>
DenseMatrix<F> mat_mul_via_tri(const DenseMatrix<F>& m, const DenseMatrix<F>& n) {
  const std::size_t k = m.rows();
  return block_triangular_square(m, n).block(2 * k, 0, k, k);
}

}  // namespace oremul
