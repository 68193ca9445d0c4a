#pragma once

// Exact coefficient domains: word-size prime fields Z/pZ and the rationals.
//
// A field is a small immutable descriptor; elements are plain values
// (std::uint64_t reduced into [0, p) for prime fields, canonical mpq_class for
// rationals). Algorithms are templates over any type modelling
// CoefficientField.

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oremul/errors.hpp"
#include "oremul/opcount.hpp"

namespace oremul {

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod_u64(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod_u64(u64 a, u64 e, u64 m) noexcept {
  u64 r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// The prime field Z/pZ for a prime p < 2^62.
class PrimeField {
 public:
  using value_type = std::uint64_t;
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p >= kMaxModulus) throw InvalidDomain("modulus must be below 2^62");
    if (!is_prime(p)) throw InvalidDomain(std::to_string(p) + " is not prime");
  }

  std::uint64_t characteristic() const noexcept { return p_; }
  std::uint64_t modulus() const noexcept { return p_; }

  value_type zero() const noexcept { return 0; }
  value_type one() const noexcept { return 1; }

  value_type from_int(std::int64_t v) const noexcept {
    if (v >= 0) return static_cast<std::uint64_t>(v) % p_;
    std::uint64_t m = (static_cast<std::uint64_t>(-(v + 1)) + 1) % p_;
    return m == 0 ? 0 : p_ - m;
  }
  value_type from_uint(std::uint64_t v) const noexcept { return v % p_; }

  value_type add(value_type a, value_type b) const noexcept {
    opcount::bump();
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const noexcept {
    opcount::bump();
    return a >= b ? a - b : a + p_ - b;
  }
  value_type neg(value_type a) const noexcept { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const noexcept {
    opcount::bump();
    if (p_ <= 0xffffffffull) return (a * b) % p_;
    return detail::mulmod_u64(a, b, p_);
  }
  /// a*b + c, counted as two operations.
  value_type mul_add(value_type a, value_type b, value_type c) const noexcept {
    return add(mul(a, b), c);
  }

  /// Inverse by the extended Euclidean algorithm.
  value_type inv(value_type a) const {
    if (a == 0) throw ZeroInverse("0 has no inverse in GF(" + std::to_string(p_) + ")");
    opcount::bump();
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(p_))
                 : static_cast<std::uint64_t>(t);
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

  bool is_zero(value_type a) const noexcept { return a == 0; }
  bool eq(value_type a, value_type b) const noexcept { return a == b; }

  std::string to_string(value_type a) const { return std::to_string(a); }
  value_type parse(std::string_view s) const;

  std::string name() const { return "GF(" + std::to_string(p_) + ")"; }
  friend bool operator==(const PrimeField& a, const PrimeField& b) noexcept { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

/// The rational numbers, backed by GMP.
class RationalField {
 public:
  using value_type = mpq_class;

  std::uint64_t characteristic() const noexcept { return 0; }

  value_type zero() const { return mpq_class(0); }
  value_type one() const { return mpq_class(1); }
  value_type from_int(std::int64_t v) const { return mpq_class(static_cast<long>(v)); }
  value_type from_uint(std::uint64_t v) const { return mpq_class(static_cast<unsigned long>(v)); }

  value_type add(const value_type& a, const value_type& b) const {
    opcount::bump();
    return a + b;
  }
  value_type sub(const value_type& a, const value_type& b) const {
    opcount::bump();
    return a - b;
  }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const {
    opcount::bump();
    return a * b;
  }
  value_type mul_add(const value_type& a, const value_type& b, const value_type& c) const {
    return add(mul(a, b), c);
  }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw ZeroInverse("0 has no inverse in Q");
    opcount::bump();
    return 1 / a;
  }
  value_type div(const value_type& a, const value_type& b) const { return mul(a, inv(b)); }

  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool eq(const value_type& a, const value_type& b) const { return a == b; }

  /// Always "num/den", with den = 1 for integers.
  std::string to_string(const value_type& a) const {
    return a.get_num().get_str() + "/" + a.get_den().get_str();
  }
  value_type parse(std::string_view s) const;

  std::string name() const { return "Q"; }
  friend bool operator==(const RationalField&, const RationalField&) noexcept { return true; }
};

template <class F>
concept CoefficientField = std::equality_comparable<F> &&
    requires(const F& f, const typename F::value_type& a, std::int64_t i) {
      { f.characteristic() } -> std::convertible_to<std::uint64_t>;
      { f.zero() } -> std::convertible_to<typename F::value_type>;
      { f.one() } -> std::convertible_to<typename F::value_type>;
      { f.from_int(i) } -> std::convertible_to<typename F::value_type>;
      { f.add(a, a) } -> std::convertible_to<typename F::value_type>;
      { f.sub(a, a) } -> std::convertible_to<typename F::value_type>;
      { f.mul(a, a) } -> std::convertible_to<typename F::value_type>;
      { f.neg(a) } -> std::convertible_to<typename F::value_type>;
      { f.inv(a) } -> std::convertible_to<typename F::value_type>;
      { f.is_zero(a) } -> std::convertible_to<bool>;
      { f.eq(a, a) } -> std::convertible_to<bool>;
      { f.to_string(a) } -> std::convertible_to<std::string>;
    };

template <class F>
using element_t = typename F::value_type;

/// True when the integers 1..n are all invertible in the field.
template <CoefficientField F>
bool integers_invertible_up_to(const F& field, std::uint64_t n) noexcept {
  std::uint64_t p = field.characteristic();
  return p == 0 || p > n;
}

template <CoefficientField F>
void require_invertible_up_to(const F& field, std::uint64_t n, const char* what) {
  if (!integers_invertible_up_to(field, n)) {
    throw CharacteristicTooSmall(std::string(what) + " needs characteristic 0 or > " +
                                 std::to_string(n) + ", got " +
                                 std::to_string(field.characteristic()));
  }
}

template <CoefficientField F>
void require_same_field(const F& a, const F& b) {
  if (!(a == b)) throw DomainMismatch(a.name() + " vs " + b.name());
}

template <CoefficientField F>
element_t<F> pow(const F& field, element_t<F> a, std::uint64_t e) {
  element_t<F> r = field.one();
  while (e != 0) {
    if (e & 1) r = field.mul(r, a);
    e >>= 1;
    if (e != 0) a = field.mul(a, a);
  }
  return r;
}

/// k! for k = 0..n, plus inverse factorials where invertible.
template <CoefficientField F>
struct FactorialTable {
  std::vector<element_t<F>> fact;
  std::vector<element_t<F>> inv_fact;  // entries 0..min(n, p-1) (all of them when p = 0)

  std::size_t max_index() const noexcept { return fact.size() - 1; }
  bool has_inverse(std::size_t k) const noexcept { return k < inv_fact.size(); }
};

/// When require_inverses is set and 0 < p <= n, throws CharacteristicTooSmall.
template <CoefficientField F>
FactorialTable<F> factorial_table(std::size_t n, const F& field, bool require_inverses = true) {
  const std::uint64_t p = field.characteristic();
  if (require_inverses && p != 0 && p <= n) {
    throw CharacteristicTooSmall("inverse factorials up to " + std::to_string(n) +
                                 "! need characteristic 0 or > " + std::to_string(n));
  }
  FactorialTable<F> t;
  t.fact.reserve(n + 1);
  t.fact.push_back(field.one());
  for (std::size_t k = 1; k <= n; ++k) {
    t.fact.push_back(field.mul(t.fact.back(), field.from_uint(k)));
  }
  std::size_t top = (p == 0 || p > n) ? n : static_cast<std::size_t>(p - 1);
  t.inv_fact.resize(top + 1);
  t.inv_fact[top] = field.inv(t.fact[top]);
  for (std::size_t k = top; k > 0; --k) {
    t.inv_fact[k - 1] = field.mul(t.inv_fact[k], field.from_uint(k));
  }
  return t;
}

inline PrimeField::value_type PrimeField::parse(std::string_view s) const {
  if (s.empty()) throw FormatError("empty prime-field element");
  bool negative = s.front() == '-';
  if (negative) s.remove_prefix(1);
  if (s.empty()) throw FormatError("bad prime-field element");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw FormatError("bad prime-field element '" + std::string(s) + "'");
    v = static_cast<std::uint64_t>((static_cast<detail::u128>(v) * 10 + static_cast<unsigned>(c - '0')) % p_);
  }
  return negative ? neg(v) : v;
}

inline RationalField::value_type RationalField::parse(std::string_view s) const {
  mpq_class q;
  if (q.set_str(std::string(s), 10) != 0) throw FormatError("bad rational '" + std::string(s) + "'");
  if (q.get_den() == 0) throw FormatError("zero denominator in '" + std::string(s) + "'");
  q.canonicalize();
  return q;
}

}  // namespace oremul
