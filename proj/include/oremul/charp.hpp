#pragma once

// Products in characteristic p > 0, where theta and X^p commute: split the
// operators along the residues of X powers modulo p, multiply p^2 pairs of
// commutative polynomials in (X^p, theta), and move the X^v factors back to
// the left with theta-shifts.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "oremul/conversions.hpp"
#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/ntt.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"

namespace oremul {

enum class SplitSide { left, right };

/// left:  P = sum_u X^u parts[u](X^p, theta)
/// right: P = sum_v parts[v](X^p, theta) X^v
/// parts[u].at(q, j) is the coefficient of (X^p)^q theta^j. Residues at or
/// beyond parts.size() carry zero.
template <CoefficientField F>
struct PCommutativeForm {
  std::uint64_t p = 0;
  SplitSide side = SplitSide::left;
  std::vector<BivariateGrid<F>> parts;
};

namespace detail {

template <class F>
std::uint64_t require_positive_characteristic(const F& f) {
  const std::uint64_t p = f.characteristic();
  if (p == 0) throw ZeroCharacteristic("characteristic-p product needs a prime field");
  return p;
}

// Row q of grid g shifted by theta <- theta + a, in place.
template <class F>
void shift_grid_rows(BivariateGrid<F>& g, const element_t<F>& a, const PolyMulThresholds& th) {
  const F& f = g.field();
  if (f.is_zero(a)) return;
  std::vector<element_t<F>> row(g.cols());
  for (std::size_t q = 0; q < g.rows(); ++q) {
    for (std::size_t j = 0; j < g.cols(); ++j) row[j] = g.at(q, j);
    DensePoly<F> poly(f, row);
    if (poly.is_zero()) continue;
    auto s = taylor_shift(poly, a, ShiftMethod::automatic, th);
    for (std::size_t j = 0; j < g.cols(); ++j) g.at(q, j) = s[j];
  }
}

// All products f[u] * g[v]; over a prime field the operands are transformed
// once and the p^2 products reuse the spectra.
template <class F>
std::vector<std::vector<BivariateGrid<F>>> all_products(const std::vector<BivariateGrid<F>>& f,
                                                        const std::vector<BivariateGrid<F>>& g,
                                                        const PolyMulThresholds& th) {
  const F& fld = f.front().field();
  std::vector<std::vector<BivariateGrid<F>>> out(f.size());
  std::size_t fr = 0, fc = 0, gr = 0, gc = 0;
  for (const auto& x : f) fr = std::max(fr, x.rows()), fc = std::max(fc, x.cols());
  for (const auto& x : g) gr = std::max(gr, x.rows()), gc = std::max(gc, x.cols());
  const std::size_t rows = fr + gr - 1, cols = fc + gc - 1, stride = rows;
  const std::size_t la = (fc - 1) * stride + fr, lb = (gc - 1) * stride + gr;
  if constexpr (std::is_same_v<F, PrimeField>) {
    if (la + lb - 1 >= th.ntt && std::min(la, lb) >= th.karatsuba && ntt::can_convolve(la, lb, fld.characteristic())) {
      ntt::BatchConvolver conv(la, lb, fld.characteristic());
      auto pad = [&](const BivariateGrid<F>& x, std::size_t r, std::size_t c) {
        BivariateGrid<F> y(fld, r, c);
        for (std::size_t i = 0; i < x.rows(); ++i)
          for (std::size_t j = 0; j < x.cols(); ++j) y.at(i, j) = x.at(i, j);
        return y.pack(stride);
      };
      std::vector<ntt::BatchConvolver::Spectrum> sg;
      std::vector<bool> zg;
      for (const auto& x : g) {
        zg.push_back(x.is_zero());
        sg.push_back(zg.back() ? ntt::BatchConvolver::Spectrum{} : conv.transform(pad(x, gr, gc)));
      }
      for (std::size_t u = 0; u < f.size(); ++u) {
        const bool zf = f[u].is_zero();
        ntt::BatchConvolver::Spectrum sf;
        if (!zf) sf = conv.transform(pad(f[u], fr, fc));
        for (std::size_t v = 0; v < g.size(); ++v) {
          if (zf || zg[v]) {
            out[u].emplace_back(fld, rows, cols);
            continue;
          }
          out[u].push_back(BivariateGrid<F>::unpack(fld, conv.multiply(sf, sg[v], la + lb - 1), stride, rows, cols));
        }
      }
      return out;
    }
  }
  for (std::size_t u = 0; u < f.size(); ++u)
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (f[u].is_zero() || g[v].is_zero()) {
        out[u].emplace_back(fld, rows, cols);
      } else {
        out[u].push_back(bivar_mul(f[u], g[v], th));
      }
    }
  return out;
}

}  // namespace detail

/// Step 1: the residue split. The right split moves X^v across with
/// theta^j X^v = X^v (theta + v)^j, i.e. A_v(Y, theta) = A~_v(Y, theta - v).
template <CoefficientField F>
PCommutativeForm<F> split_p(const OrePoly<F>& a, SplitSide side, const PolyMulThresholds& th = {}) {
  require_tag(a, VarTag::theta);
  const F& f = a.field();
  const std::uint64_t p = detail::require_positive_characteristic(f);
  PCommutativeForm<F> form{p, side, {}};
  if (a.is_zero()) return form;
  const std::size_t np = static_cast<std::size_t>(std::min<std::uint64_t>(p, a.rows()));
  const std::size_t qrows = a.d() / p + 1;
  for (std::size_t u = 0; u < np; ++u) {
    BivariateGrid<F> g(f, qrows, a.cols());
    for (std::size_t q = 0; u + p * q < a.rows(); ++q)
      for (std::size_t j = 0; j < a.cols(); ++j) g.at(q, j) = a.at(u + p * q, j);
    if (side == SplitSide::right) detail::shift_grid_rows(g, f.from_int(-static_cast<long>(u)), th);
    form.parts.push_back(std::move(g));
  }
  return form;
}

/// Inverse of split_p.
template <CoefficientField F>
OrePoly<F> recompose_p(const F& f, const PCommutativeForm<F>& form, const PolyMulThresholds& th = {}) {
  std::size_t rows = 0, cols = 0;
  for (std::size_t u = 0; u < form.parts.size(); ++u) {
    const auto& g = form.parts[u];
    if (g.empty()) continue;
    rows = std::max(rows, u + form.p * (g.rows() - 1) + 1);
    cols = std::max(cols, g.cols());
  }
  if (rows == 0) return OrePoly<F>(f, VarTag::theta);
  auto out = OrePoly<F>::zeros(f, VarTag::theta, rows - 1, cols - 1);
  for (std::size_t u = 0; u < form.parts.size(); ++u) {
    BivariateGrid<F> g = form.parts[u];
    if (form.side == SplitSide::right) detail::shift_grid_rows(g, f.from_uint(u), th);
    for (std::size_t q = 0; q < g.rows(); ++q)
      for (std::size_t j = 0; j < g.cols(); ++j) out.at(u + form.p * q, j) = f.add(out.at(u + form.p * q, j), g.at(q, j));
  }
  out.normalize();
  return out;
}

/// C = BA in K[X]<theta> over a field of characteristic p, for any p.
template <CoefficientField F>
OrePoly<F> mul_theta_p(const OrePoly<F>& b, const OrePoly<F>& a, const PolyMulThresholds& th = {}) {
  require_compatible(b, a);
  require_tag(a, VarTag::theta);
  const F& f = a.field();
  const std::uint64_t p = detail::require_positive_characteristic(f);
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(f, VarTag::theta);
  auto bs = split_p(b, SplitSide::left, th);
  auto as = split_p(a, SplitSide::right, th);
  // Step 2
  auto prods = detail::all_products(bs.parts, as.parts, th);
  // Step 3: X^u C_uv(X^p, theta) X^v = X^{u+v} C_uv(X^p, theta + v).
  const std::size_t dc = a.d() + b.d(), rc = a.r() + b.r();
  auto out = OrePoly<F>::zeros(f, VarTag::theta, dc, rc);
  for (std::size_t v = 0; v < as.parts.size(); ++v) {
    // G_v = sum_u X^u C_uv(X^p, theta), then one shift per X power.
    auto gv = OrePoly<F>::zeros(f, VarTag::theta, dc, rc);
    bool any = false;
    for (std::size_t u = 0; u < bs.parts.size(); ++u) {
      const auto& c = prods[u][v];
      for (std::size_t q = 0; q < c.rows(); ++q) {
        const std::size_t i = u + p * q;
        if (i > dc) break;
        for (std::size_t j = 0; j < c.cols() && j <= rc; ++j) {
          if (f.is_zero(c.at(q, j))) continue;
          gv.at(i, j) = f.add(gv.at(i, j), c.at(q, j));
          any = true;
        }
      }
    }
    if (!any) continue;
    gv = theta_shift(gv, static_cast<long>(v), th);
    for (std::size_t i = 0; i < gv.rows() && i + v <= dc; ++i)
      for (std::size_t j = 0; j < gv.cols(); ++j) out.at(i + v, j) = f.add(out.at(i + v, j), gv.at(i, j));
  }
  out.normalize();
  return out;
}

/// C = BA in K[X]<d> in characteristic p, through the Laurent theta forms.
template <CoefficientField F>
OrePoly<F> mul_partial_p(const OrePoly<F>& b, const OrePoly<F>& a, const PolyMulThresholds& th = {}) {
  detail::require_positive_characteristic(a.field());
  auto theta_mul = [&th](const OrePoly<F>& y, const OrePoly<F>& x) { return mul_theta_p(y, x, th); };
  return mul_partial_via_theta(b, a, theta_mul, th);
}

}  // namespace oremul
