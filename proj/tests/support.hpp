#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oremul/field.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"
#include "oremul/random.hpp"

namespace testing_support {

using oremul::element_t;

inline const oremul::PrimeField& gf65521() {
  static const oremul::PrimeField f(65521);
  return f;
}

template <class F>
oremul::DensePoly<F> poly(const F& f, std::initializer_list<std::int64_t> c) {
  std::vector<element_t<F>> v;
  for (auto x : c) v.push_back(f.from_int(x));
  return oremul::DensePoly<F>(f, std::move(v));
}

template <class F>
oremul::OrePoly<F> op(const F& f, oremul::VarTag tag, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  std::vector<std::vector<element_t<F>>> g;
  for (const auto& row : rows) {
    std::vector<element_t<F>> r;
    for (auto x : row) r.push_back(f.from_int(x));
    g.push_back(std::move(r));
  }
  return oremul::OrePoly<F>::from_rows(f, tag, g);
}

/// Possibly-degenerate random operator with bidegree at most (d, r).
template <class F>
oremul::OrePoly<F> random_op_upto(std::size_t d, std::size_t r, oremul::VarTag tag, const F& f, std::mt19937_64& rng) {
  std::size_t dd = std::uniform_int_distribution<std::size_t>(0, d)(rng);
  std::size_t rr = std::uniform_int_distribution<std::size_t>(0, r)(rng);
  return oremul::random_op(dd, rr, tag, f, rng);
}

template <class F>
std::string show(const oremul::OrePoly<F>& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    s += "[";
    for (std::size_t j = 0; j < p.cols(); ++j) s += (j ? " " : "") + p.field().to_string(p.at(i, j));
    s += "]";
  }
  return s;
}

}  // namespace testing_support
