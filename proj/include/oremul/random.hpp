#pragma once

// Seeded random operators, polynomials and matrices.

#include <cstdint>
#include <random>
#include <type_traits>
#include <vector>

#include "oremul/field.hpp"
#include "oremul/matrix.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"

namespace oremul {

/// Uniform element of a prime field; for Q, a 16-bit signed integer.
template <CoefficientField F>
element_t<F> random_element(const F& f, std::mt19937_64& rng) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return std::uniform_int_distribution<std::uint64_t>(0, f.modulus() - 1)(rng);
  } else {
    return f.from_int(std::uniform_int_distribution<std::int64_t>(-32768, 32767)(rng));
  }
}

template <CoefficientField F>
element_t<F> random_nonzero(const F& f, std::mt19937_64& rng) {
  for (;;) {
    auto x = random_element(f, rng);
    if (!f.is_zero(x)) return x;
  }
}

/// Dense operator of exact bidegree (d, r): c[d][r] is forced nonzero.
template <CoefficientField F>
OrePoly<F> random_op(std::size_t d, std::size_t r, VarTag tag, const F& f, std::mt19937_64& rng) {
  auto p = OrePoly<F>::zeros(f, tag, d, r);
  for (std::size_t i = 0; i <= d; ++i)
    for (std::size_t j = 0; j <= r; ++j) p.at(i, j) = random_element(f, rng);
  p.at(d, r) = random_nonzero(f, rng);
  return p;
}

template <CoefficientField F>
OrePoly<F> random_op(std::size_t d, std::size_t r, VarTag tag, const F& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_op(d, r, tag, f, rng);
}

/// Polynomial of degree exactly deg.
template <CoefficientField F>
DensePoly<F> random_poly(std::size_t deg, const F& f, std::mt19937_64& rng) {
  std::vector<element_t<F>> v(deg + 1);
  for (auto& x : v) x = random_element(f, rng);
  v[deg] = random_nonzero(f, rng);
  return DensePoly<F>(f, std::move(v));
}

template <CoefficientField F>
DenseMatrix<F> random_matrix(std::size_t rows, std::size_t cols, const F& f, std::mt19937_64& rng) {
  DenseMatrix<F> m(f, rows, cols);
  for (auto& x : m.data()) x = random_element(f, rng);
  return m;
}

}  // namespace oremul
