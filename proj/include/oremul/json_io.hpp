#pragma once

// The JSON operator format:
//   {"var": "partial" | "theta", "p": 65521, "coeffs": [[c00, c01, ...], [c10, ...], ...]}
// coeffs[i][j] multiplies X^i D^j. Over Q (p = 0) entries are "num/den"
// strings (plain integers are accepted on input); over GF(p) they are decimal
// integers in [0, p). A Laurent theta-operator X^{-v} B carries
// "valuation": v and lists the rows of B, so coeffs[i] belongs to X^{i-v}.

#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "oremul/conversions.hpp"
#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/ore.hpp"

namespace oremul {

using json = nlohmann::json;

inline VarTag parse_var_tag(const std::string& s) {
  if (s == "partial") return VarTag::partial;
  if (s == "theta") return VarTag::theta;
  throw FormatError("unknown var '" + s + "'");
}

namespace detail {

template <class F>
json element_to_json(const F& f, const element_t<F>& a) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return a;
  } else {
    return f.to_string(a);
  }
}

template <class F>
element_t<F> element_from_json(const F& f, const json& j) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    if (!j.is_number_integer()) throw FormatError("prime-field entries must be integers, got " + j.dump());
    if (j.is_number_unsigned()) {
      const auto v = j.get<std::uint64_t>();
      if (v >= f.modulus()) throw FormatError(j.dump() + " is outside [0, p)");
      return v;
    }
    const auto v = j.get<std::int64_t>();
    if (v < 0 || static_cast<std::uint64_t>(v) >= f.modulus()) throw FormatError(j.dump() + " is outside [0, p)");
    return static_cast<std::uint64_t>(v);
  } else {
    if (j.is_string()) return f.parse(j.get<std::string>());
    if (j.is_number_integer()) return f.from_int(j.get<std::int64_t>());
    throw FormatError("rational entries must be \"num/den\" strings, got " + j.dump());
  }
}

template <class F>
json grid_to_json(const OrePoly<F>& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < p.cols(); ++j) row.push_back(element_to_json(p.field(), p.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class F>
OrePoly<F> grid_from_json(const F& f, VarTag tag, const json& coeffs) {
  if (!coeffs.is_array()) throw FormatError("\"coeffs\" must be an array of rows");
  std::vector<std::vector<element_t<F>>> rows;
  for (const auto& row : coeffs) {
    if (!row.is_array()) throw FormatError("each row of \"coeffs\" must be an array");
    auto& out = rows.emplace_back();
    for (const auto& x : row) out.push_back(element_from_json(f, x));
  }
  return OrePoly<F>::from_rows(f, tag, rows);
}

inline void require_key(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing \"") + key + "\"");
}

}  // namespace detail

/// The characteristic named by a JSON operator, before choosing a field type.
inline std::uint64_t json_characteristic(const json& j) {
  detail::require_key(j, "p");
  if (!j["p"].is_number_integer() || j["p"].get<std::int64_t>() < 0) throw FormatError("\"p\" must be a non-negative integer");
  return j["p"].get<std::uint64_t>();
}

inline VarTag json_var(const json& j) {
  detail::require_key(j, "var");
  if (!j["var"].is_string()) throw FormatError("\"var\" must be a string");
  return parse_var_tag(j["var"].get<std::string>());
}

inline std::size_t json_valuation(const json& j) {
  if (!j.is_object() || !j.contains("valuation")) return 0;
  if (!j["valuation"].is_number_integer() || j["valuation"].get<std::int64_t>() < 0)
    throw FormatError("\"valuation\" must be a non-negative integer");
  return j["valuation"].get<std::size_t>();
}

template <CoefficientField F>
json to_json(const OrePoly<F>& p) {
  return json{{"var", to_string(p.tag())}, {"p", p.field().characteristic()}, {"coeffs", detail::grid_to_json(p)}};
}

/// "valuation" is written only when it is nonzero.
template <CoefficientField F>
json to_json(const LaurentThetaPoly<F>& l) {
  json j = to_json(l.body());
  if (l.valuation() > 0) j["valuation"] = l.valuation();
  return j;
}

template <CoefficientField F>
OrePoly<F> op_from_json(const json& j, const F& f) {
  if (json_characteristic(j) != f.characteristic())
    throw DomainMismatch("operator over p = " + std::to_string(json_characteristic(j)) + ", expected " + f.name());
  if (json_valuation(j) != 0) throw FormatError("Laurent operator where a polynomial one was expected");
  detail::require_key(j, "coeffs");
  return detail::grid_from_json(f, json_var(j), j["coeffs"]);
}

template <CoefficientField F>
LaurentThetaPoly<F> laurent_from_json(const json& j, const F& f) {
  if (json_characteristic(j) != f.characteristic())
    throw DomainMismatch("operator over p = " + std::to_string(json_characteristic(j)) + ", expected " + f.name());
  if (json_var(j) != VarTag::theta) throw TagMismatch("Laurent operators are theta-operators");
  detail::require_key(j, "coeffs");
  return LaurentThetaPoly<F>(detail::grid_from_json(f, VarTag::theta, j["coeffs"]), json_valuation(j));
}

/// Converts between the partial and theta forms; a partial operator becomes a
/// Laurent theta-operator and the reverse direction fails with InvalidDomain
/// if negative X powers remain.
template <CoefficientField F>
json convert_json(const json& j, const F& f, VarTag target, const PolyMulThresholds& th = {}) {
  const VarTag from = json_var(j);
  if (from == target) return j;
  if (from == VarTag::partial) return to_json(partial_to_theta(op_from_json(j, f), th));
  return to_json(laurent_to_partial(laurent_from_json(j, f), th));
}

}  // namespace oremul
