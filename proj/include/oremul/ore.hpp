#pragma once

// Operators in K[X]<d> (d X = X d + 1) and K[X]<theta> (theta X = X (theta + 1))
// in canonical form: c[i][j] is the coefficient of X^i D^j, X powers on the
// left. Includes the classical products: Leibniz expansion, the two
// iterative schemes and Takayama's formula.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/poly.hpp"

namespace oremul {

enum class VarTag { partial, theta };

inline std::string to_string(VarTag t) { return t == VarTag::partial ? "partial" : "theta"; }

struct Bidegree {
  std::size_t d = 0;  // degree in X
  std::size_t r = 0;  // degree in the derivation
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

template <CoefficientField F>
class OrePoly {
 public:
  using value_type = element_t<F>;

  OrePoly(F field, VarTag tag) : field_(std::move(field)), tag_(tag) {}

  /// A (d+1) x (r+1) grid of zeros to be filled through at(); call normalize() after.
  static OrePoly zeros(const F& field, VarTag tag, std::size_t d, std::size_t r) {
    OrePoly p(field, tag);
    p.rows_ = d + 1;
    p.cols_ = r + 1;
    p.c_.assign(p.rows_ * p.cols_, field.zero());
    return p;
  }

  /// From nested rows; row i lists the coefficients of X^i D^0, X^i D^1, ...
  static OrePoly from_rows(const F& field, VarTag tag, const std::vector<std::vector<value_type>>& rows) {
    std::size_t cols = 0;
    for (const auto& row : rows) cols = std::max(cols, row.size());
    if (rows.empty() || cols == 0) return OrePoly(field, tag);
    OrePoly p = zeros(field, tag, rows.size() - 1, cols - 1);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j) p.at(i, j) = rows[i][j];
    p.normalize();
    return p;
  }

  static OrePoly monomial(const F& field, VarTag tag, std::size_t i, std::size_t j, value_type c) {
    OrePoly p = zeros(field, tag, i, j);
    p.at(i, j) = std::move(c);
    p.normalize();
    return p;
  }

  static OrePoly one(const F& field, VarTag tag) { return monomial(field, tag, 0, 0, field.one()); }

  const F& field() const noexcept { return field_; }
  VarTag tag() const noexcept { return tag_; }
  bool is_zero() const noexcept { return c_.empty(); }

  /// Extent of the stored grid (rows = d + 1, cols = r + 1 once normalized).
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::optional<Bidegree> bidegree() const {
    if (is_zero()) return std::nullopt;
    return Bidegree{rows_ - 1, cols_ - 1};
  }
  /// X-degree bound of the grid; 0 for the zero operator.
  std::size_t d() const noexcept { return rows_ == 0 ? 0 : rows_ - 1; }
  std::size_t r() const noexcept { return cols_ == 0 ? 0 : cols_ - 1; }

  value_type& at(std::size_t i, std::size_t j) { return c_[i * cols_ + j]; }
  const value_type& at(std::size_t i, std::size_t j) const { return c_[i * cols_ + j]; }
  value_type coeff(std::size_t i, std::size_t j) const {
    return i < rows_ && j < cols_ ? c_[i * cols_ + j] : field_.zero();
  }

  void normalize() {
    std::size_t nr = 0, nc = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!field_.is_zero(at(i, j))) {
          nr = std::max(nr, i + 1);
          nc = std::max(nc, j + 1);
        }
    if (nr == rows_ && nc == cols_) return;
    std::vector<value_type> c(nr * nc, field_.zero());
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) c[i * nc + j] = at(i, j);
    rows_ = nr;
    cols_ = nc;
    c_ = std::move(c);
    if (rows_ == 0 || cols_ == 0) {
      rows_ = cols_ = 0;
      c_.clear();
    }
  }

  /// Row i as the polynomial sum_j c[i][j] T^j.
  DensePoly<F> row(std::size_t i) const {
    if (i >= rows_) return DensePoly<F>(field_);
    return DensePoly<F>(field_, std::vector<value_type>(c_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                                        c_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)));
  }
  /// Column j as the polynomial sum_i c[i][j] X^i.
  DensePoly<F> column(std::size_t j) const {
    std::vector<value_type> v;
    if (j < cols_) {
      v.reserve(rows_);
      for (std::size_t i = 0; i < rows_; ++i) v.push_back(at(i, j));
    }
    return DensePoly<F>(field_, std::move(v));
  }

  BivariateGrid<F> to_grid() const {
    BivariateGrid<F> g(field_, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) g.at(i, j) = at(i, j);
    return g;
  }
  static OrePoly from_grid(const BivariateGrid<F>& g, VarTag tag) {
    if (g.empty()) return OrePoly(g.field(), tag);
    OrePoly p = zeros(g.field(), tag, g.rows() - 1, g.cols() - 1);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) p.at(i, j) = g.at(i, j);
    p.normalize();
    return p;
  }

  friend bool operator==(const OrePoly& a, const OrePoly& b) {
    return a.field_ == b.field_ && a.tag_ == b.tag_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.c_ == b.c_;
  }

 private:
  F field_;
  VarTag tag_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<value_type> c_;
};

template <CoefficientField F>
void require_compatible(const OrePoly<F>& b, const OrePoly<F>& a) {
  require_same_field(b.field(), a.field());
  if (b.tag() != a.tag()) throw TagMismatch(to_string(b.tag()) + " vs " + to_string(a.tag()));
}

template <CoefficientField F>
void require_tag(const OrePoly<F>& p, VarTag tag) {
  if (p.tag() != tag) throw TagMismatch("expected " + to_string(tag) + ", got " + to_string(p.tag()));
}

template <CoefficientField F>
OrePoly<F> operator+(const OrePoly<F>& a, const OrePoly<F>& b) {
  require_compatible(a, b);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const F& f = a.field();
  auto s = OrePoly<F>::zeros(f, a.tag(), std::max(a.d(), b.d()), std::max(a.r(), b.r()));
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) s.at(i, j) = f.add(a.coeff(i, j), b.coeff(i, j));
  s.normalize();
  return s;
}

template <CoefficientField F>
OrePoly<F> operator-(const OrePoly<F>& a) {
  OrePoly<F> n = a;
  for (std::size_t i = 0; i < n.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) n.at(i, j) = a.field().neg(n.at(i, j));
  return n;
}

template <CoefficientField F>
OrePoly<F> operator-(const OrePoly<F>& a, const OrePoly<F>& b) {
  return a + (-b);
}

template <CoefficientField F>
OrePoly<F> scale(const OrePoly<F>& a, const element_t<F>& c) {
  OrePoly<F> n = a;
  for (std::size_t i = 0; i < n.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) n.at(i, j) = a.field().mul(n.at(i, j), c);
  n.normalize();
  return n;
}

/// P(f): D acts as d/dX for the partial tag and as X d/dX for theta.
template <CoefficientField F>
DensePoly<F> apply(const OrePoly<F>& p, const DensePoly<F>& f) {
  require_same_field(p.field(), f.field());
  const F& fld = p.field();
  if (p.is_zero() || f.is_zero()) return DensePoly<F>(fld);
  std::vector<element_t<F>> out(p.d() + f.size() + 1, fld.zero());
  if (p.tag() == VarTag::theta) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const auto& fk = f.coeffs()[k];
      if (fld.is_zero(fk)) continue;
      const element_t<F> kk = fld.from_uint(k);
      for (std::size_t i = 0; i < p.rows(); ++i) {
        element_t<F> v = fld.zero();  // Horner for sum_j c[i][j] k^j
        for (std::size_t j = p.cols(); j-- > 0;) v = fld.add(fld.mul(v, kk), p.at(i, j));
        out[i + k] = fld.add(out[i + k], fld.mul(v, fk));
      }
    }
  } else {
    DensePoly<F> deriv = f;
    for (std::size_t j = 0; j < p.cols() && !deriv.is_zero(); ++j) {
      for (std::size_t i = 0; i < p.rows(); ++i) {
        const auto& c = p.at(i, j);
        if (fld.is_zero(c)) continue;
        for (std::size_t k = 0; k < deriv.size(); ++k) out[i + k] = fld.add(out[i + k], fld.mul(c, deriv.coeffs()[k]));
      }
      deriv = derivative(deriv);
    }
  }
  return DensePoly<F>(fld, std::move(out));
}

namespace detail {

// coef[t] = (l)_t * binom(i, t), t = 0..min(i, l), by the two recurrences.
template <class F>
std::vector<element_t<F>> leibniz_coeffs(const F& f, std::size_t i, std::size_t l) {
  const std::size_t m = std::min(i, l);
  std::vector<element_t<F>> out(m + 1);
  element_t<F> ff = f.one();
  const bool divisible = integers_invertible_up_to(f, i);
  element_t<F> bin = f.one();
  for (std::size_t t = 0; t <= m; ++t) {
    out[t] = f.mul(ff, divisible ? bin : binomial(f, i, t));
    ff = f.mul(ff, f.from_uint(l - t));
    if (divisible && t < m) bin = f.mul(bin, f.mul(f.from_uint(i - t), f.inv(f.from_uint(t + 1))));
  }
  return out;
}

}  // namespace detail

/// Canonical form of d^i X^l.
template <CoefficientField F>
OrePoly<F> leibniz_monomial(const F& f, std::size_t i, std::size_t l) {
  auto coef = detail::leibniz_coeffs(f, i, l);
  auto p = OrePoly<F>::zeros(f, VarTag::partial, l, i);
  for (std::size_t t = 0; t < coef.size(); ++t) p.at(l - t, i - t) = coef[t];
  p.normalize();
  return p;
}

/// Direct expansion of every d^i X^l (or theta^i X^l = X^l (theta + l)^i).
template <CoefficientField F>
OrePoly<F> mul_naive(const OrePoly<F>& b, const OrePoly<F>& a) {
  require_compatible(b, a);
  const F& f = a.field();
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(f, a.tag());
  auto c = OrePoly<F>::zeros(f, a.tag(), b.d() + a.d(), b.r() + a.r());
  // table[i][l][t]: coefficient of the t-th term of D^i X^l
  std::vector<std::vector<std::vector<element_t<F>>>> table(b.cols(), std::vector<std::vector<element_t<F>>>(a.rows()));
  for (std::size_t i = 0; i < b.cols(); ++i)
    for (std::size_t l = 0; l < a.rows(); ++l) {
      if (a.tag() == VarTag::partial) {
        table[i][l] = detail::leibniz_coeffs(f, i, l);
      } else {
        // theta^i X^l = X^l sum_t binom(i, t) l^(i-t) theta^t
        auto& row = table[i][l];
        row.resize(i + 1);
        const element_t<F> lf = f.from_uint(l);
        element_t<F> lp = f.one();
        for (std::size_t t = i + 1; t-- > 0;) {
          row[t] = f.mul(binomial(f, i, t), lp);
          lp = f.mul(lp, lf);
        }
      }
    }
  for (std::size_t j = 0; j < b.rows(); ++j)
    for (std::size_t i = 0; i < b.cols(); ++i) {
      const auto& bij = b.at(j, i);
      if (f.is_zero(bij)) continue;
      for (std::size_t l = 0; l < a.rows(); ++l)
        for (std::size_t k = 0; k < a.cols(); ++k) {
          const auto& alk = a.at(l, k);
          if (f.is_zero(alk)) continue;
          const element_t<F> w = f.mul(bij, alk);
          const auto& coef = table[i][l];
          for (std::size_t t = 0; t < coef.size(); ++t) {
            if (f.is_zero(coef[t])) continue;
            std::size_t xi, di;
            if (a.tag() == VarTag::partial) {
              xi = j + l - t;
              di = i - t + k;
            } else {
              xi = j + l;
              di = t + k;
            }
            c.at(xi, di) = f.add(c.at(xi, di), f.mul(w, coef[t]));
          }
        }
    }
  c.normalize();
  return c;
}

/// Derivative along the X index.
template <CoefficientField F>
OrePoly<F> d_dX(const OrePoly<F>& p) {
  const F& f = p.field();
  if (p.rows() <= 1) return OrePoly<F>(f, p.tag());
  auto q = OrePoly<F>::zeros(f, p.tag(), p.d() - 1, p.r());
  for (std::size_t i = 1; i < p.rows(); ++i) {
    const auto ii = f.from_uint(i);
    for (std::size_t j = 0; j < p.cols(); ++j) q.at(i - 1, j) = f.mul(ii, p.at(i, j));
  }
  q.normalize();
  return q;
}

/// Derivative along the D index.
template <CoefficientField F>
OrePoly<F> d_dD(const OrePoly<F>& p) {
  const F& f = p.field();
  if (p.cols() <= 1) return OrePoly<F>(f, p.tag());
  auto q = OrePoly<F>::zeros(f, p.tag(), p.d(), p.r() - 1);
  for (std::size_t j = 1; j < p.cols(); ++j) {
    const auto jj = f.from_uint(j);
    for (std::size_t i = 0; i < p.rows(); ++i) q.at(i, j - 1) = f.mul(jj, p.at(i, j));
  }
  q.normalize();
  return q;
}

/// BA = sum_i b_i(X) (d^i A), with d T = T d + dT/dX.
template <CoefficientField F>
OrePoly<F> mul_iter_dx(const OrePoly<F>& b, const OrePoly<F>& a) {
  require_compatible(b, a);
  require_tag(a, VarTag::partial);
  const F& f = a.field();
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(f, VarTag::partial);
  auto c = OrePoly<F>::zeros(f, VarTag::partial, b.d() + a.d(), b.r() + a.r());
  // T = d^i A stored by columns: cols[k](X) is the coefficient of d^k.
  std::vector<DensePoly<F>> t;
  for (std::size_t k = 0; k < a.cols(); ++k) t.push_back(a.column(k));
  for (std::size_t i = 0; i < b.cols(); ++i) {
    if (i > 0) {
      std::vector<DensePoly<F>> next(t.size() + 1, DensePoly<F>(f));
      for (std::size_t k = 0; k < t.size(); ++k) {
        next[k + 1] = next[k + 1] + t[k];
        next[k] = next[k] + derivative(t[k]);
      }
      t = std::move(next);
    }
    DensePoly<F> bi = b.column(i);
    if (bi.is_zero()) continue;
    for (std::size_t k = 0; k < t.size(); ++k) {
      DensePoly<F> prod = poly_mul(bi, t[k]);
      for (std::size_t x = 0; x < prod.size(); ++x) c.at(x, k) = f.add(c.at(x, k), prod.coeffs()[x]);
    }
  }
  c.normalize();
  return c;
}

/// BA = sum_l (B X^l) a'_l(d), with T X = X T + dT/dd.
template <CoefficientField F>
OrePoly<F> mul_iter_x(const OrePoly<F>& b, const OrePoly<F>& a) {
  require_compatible(b, a);
  require_tag(a, VarTag::partial);
  const F& f = a.field();
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(f, VarTag::partial);
  auto c = OrePoly<F>::zeros(f, VarTag::partial, b.d() + a.d(), b.r() + a.r());
  // S = B X^l stored by rows: s[m](d) is the factor of X^m.
  std::vector<DensePoly<F>> s;
  for (std::size_t m = 0; m < b.rows(); ++m) s.push_back(b.row(m));
  for (std::size_t l = 0; l < a.rows(); ++l) {
    if (l > 0) {
      std::vector<DensePoly<F>> next(s.size() + 1, DensePoly<F>(f));
      for (std::size_t m = 0; m < s.size(); ++m) {
        next[m + 1] = next[m + 1] + s[m];
        next[m] = next[m] + derivative(s[m]);
      }
      s = std::move(next);
    }
    DensePoly<F> al = a.row(l);
    if (al.is_zero()) continue;
    for (std::size_t m = 0; m < s.size(); ++m) {
      DensePoly<F> prod = poly_mul(s[m], al);
      for (std::size_t k = 0; k < prod.size(); ++k) c.at(m, k) = f.add(c.at(m, k), prod.coeffs()[k]);
    }
  }
  c.normalize();
  return c;
}

/// Runs whichever iterative scheme is cheaper for the shapes at hand.
template <CoefficientField F>
OrePoly<F> mul_iter(const OrePoly<F>& b, const OrePoly<F>& a) {
  const std::size_t d = std::max(a.d(), b.d()), r = std::max(a.r(), b.r());
  return r <= d ? mul_iter_dx(b, a) : mul_iter_x(b, a);
}

/// BA = sum_k (1/k!) (d^k B / dd^k) * (d^k A / dX^k), commutative products.
template <CoefficientField F>
OrePoly<F> mul_takayama(const OrePoly<F>& b, const OrePoly<F>& a) {
  require_compatible(b, a);
  require_tag(a, VarTag::partial);
  const F& f = a.field();
  if (a.is_zero() || b.is_zero()) return OrePoly<F>(f, VarTag::partial);
  const std::size_t kmax = std::min(b.r(), a.d());
  require_invertible_up_to(f, kmax, "Takayama's formula");
  auto fac = factorial_table(kmax, f);
  auto c = OrePoly<F>::zeros(f, VarTag::partial, b.d() + a.d(), b.r() + a.r());
  OrePoly<F> db = b, da = a;
  for (std::size_t k = 0; k <= kmax; ++k) {
    if (k > 0) {
      db = d_dD(db);
      da = d_dX(da);
    }
    if (db.is_zero() || da.is_zero()) break;
    auto h = bivar_mul(db.to_grid(), da.to_grid());
    const auto& w = fac.inv_fact[k];
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) {
        const auto& x = h.at(i, j);
        if (!f.is_zero(x)) c.at(i, j) = f.add(c.at(i, j), k == 0 ? x : f.mul(w, x));
      }
  }
  c.normalize();
  return c;
}

}  // namespace oremul
