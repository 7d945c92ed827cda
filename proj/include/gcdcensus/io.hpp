#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gcdcensus/admissibility.hpp"
#include "gcdcensus/bigint.hpp"
#include "gcdcensus/counting.hpp"
#include "gcdcensus/density.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/model.hpp"
#include "gcdcensus/padic.hpp"

namespace gcdcensus::io {

using nlohmann::json;

namespace detail {

inline BigInt parse_gcd(const json& node, const std::string& where) {
  if (node.is_number_unsigned()) {
    const auto v = node.get<std::uint64_t>();
    if (v < 1) throw ParseError(where + ": must be a positive integer");
    return BigInt(v);
  }
  if (node.is_number_integer()) {
    const auto v = node.get<std::int64_t>();
    if (v < 1) throw ParseError(where + ": must be a positive integer");
    return BigInt(v);
  }
  if (node.is_string()) {
    BigInt v;
    try {
      v = parse_decimal(node.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (v < 1) throw ParseError(where + ": must be a positive integer");
    return v;
  }
  throw ParseError(where + ": must be a positive integer or a decimal string");
}

}  // namespace detail

/// Parses {"k": int, "conditions": [{"indices": [int...], "gcd": int | "digits"}]}.
/// Indices are 1-based. Errors name the offending field.
inline ConditionSet parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "k" && key != "conditions") throw ParseError("document: unknown field \"" + key + "\"");
  }
  if (!doc.contains("k") || !doc["k"].is_number_integer()) throw ParseError("k: expected an integer");
  const auto k = doc["k"].get<std::int64_t>();
  if (k < 2 || k > kMaxIndices) throw ParseError("k: must lie in 2.." + std::to_string(kMaxIndices));
  if (!doc.contains("conditions") || !doc["conditions"].is_array()) {
    throw ParseError("conditions: expected an array");
  }

  std::vector<Condition> conds;
  const json& list = doc["conditions"];
  for (std::size_t j = 0; j < list.size(); ++j) {
    const std::string where = "conditions[" + std::to_string(j) + "]";
    const json& item = list[j];
    if (!item.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [key, value] : item.items()) {
      if (key != "indices" && key != "gcd") throw ParseError(where + ": unknown field \"" + key + "\"");
    }
    if (!item.contains("indices") || !item["indices"].is_array()) throw ParseError(where + ".indices: expected an array");
    if (!item.contains("gcd")) throw ParseError(where + ".gcd: missing");
    IndexSet indices;
    for (const json& idx : item["indices"]) {
      if (!idx.is_number_integer()) throw ParseError(where + ".indices: entries must be integers");
      const auto i = idx.get<std::int64_t>();
      if (i < 1 || i > k) throw ParseError(where + ".indices: " + std::to_string(i) + " outside 1.." + std::to_string(k));
      if (indices.contains(static_cast<int>(i))) {
        throw ParseError(where + ".indices: " + std::to_string(i) + " listed twice");
      }
      indices.insert(static_cast<int>(i));
    }
    if (indices.size() < 2) throw ParseError(where + ".indices: need at least two indices");
    conds.push_back(Condition{indices, detail::parse_gcd(item["gcd"], where + ".gcd")});
  }
  try {
    return ConditionSet(static_cast<int>(k), std::move(conds));
  } catch (const DomainError& e) {
    throw ParseError(std::string("conditions: ") + e.what());
  }
}

inline json gcd_to_json(const BigInt& v) {
  if (fits_u64(v)) return static_cast<std::uint64_t>(v);
  return v.str();
}

inline json to_json(const ConditionSet& cs) {
  json conds = json::array();
  for (const Condition& c : cs.conditions()) {
    conds.push_back({{"indices", c.indices.indices()}, {"gcd", gcd_to_json(c.value)}});
  }
  return {{"k", cs.k()}, {"conditions", conds}};
}

inline std::string serialize_document(const ConditionSet& cs) { return to_json(cs).dump(2) + "\n"; }

/// 12 significant digits.
inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline json to_json(const Violation& v) { return {{"p", v.p.str()}, {"indices", v.indices.indices()}}; }

inline json to_json(const DensityResult& r) {
  json trace = json::array();
  for (const FactorTraceEntry& e : r.factor_trace) {
    trace.push_back({{"p", e.p.str()}, {"exact", to_string(e.exact)}, {"value", e.value}});
  }
  json primes = json::array();
  for (const BigInt& p : r.relevant_primes) primes.push_back(p.str());
  json coeffs = json::array();
  for (const Rational& c : r.polynomial.coefficients) coeffs.push_back(to_string(c));
  return {{"value", r.value},
          {"lower", r.lower},
          {"upper", r.upper},
          {"prime_cutoff", r.prime_cutoff},
          {"prime_count", r.prime_count},
          {"cover", r.cover.indices()},
          {"relevant_primes", primes},
          {"polynomial", coeffs},
          {"tail_constant", r.tail_constant},
          {"log_radius", r.log_radius},
          {"factor_trace", trace}};
}

inline json to_json(const CountReport& r) {
  return {{"x", r.x},
          {"count", r.count},
          {"density", r.density},
          {"constant", r.constant},
          {"gap", r.gap},
          {"normalized_error", r.normalized_error},
          {"sharp_normalized_error", r.sharp_normalized_error},
          {"log_power", r.log_power},
          {"sharp_log_power", r.sharp_log_power}};
}

inline json to_json(const LocalView& v) {
  json g = json::array();
  for (int x : v.valuations.g) g.push_back(x);
  json reduced = json::array();
  for (const Condition& c : v.reduced.conditions()) reduced.push_back(c.indices.indices());
  json out = {{"p", v.p.str()},
              {"g", g},
              {"v", v.valuations.v},
              {"z_set", v.z_set.indices()},
              {"s_p", v.s_p.indices()},
              {"reduced", reduced},
              {"i_set", v.i_set.indices()}};
  if (v.w_p) out["w_p"] = v.w_p->indices();
  return out;
}

inline std::string format_text(const DensityResult& r) {
  std::string out;
  out += "value " + format_real(r.value) + "\n";
  out += "lower " + format_real(r.lower) + "\n";
  out += "upper " + format_real(r.upper) + "\n";
  out += "prime_cutoff " + std::to_string(r.prime_cutoff) + "\n";
  out += "cover " + r.cover.to_string() + "\n";
  out += "generic_factor " + r.polynomial.to_string() + "\n";
  for (const FactorTraceEntry& e : r.factor_trace) {
    out += "factor p=" + e.p.str() + " " + to_string(e.exact) + " " + format_real(e.value) + "\n";
  }
  return out;
}

inline std::string format_text(const CountReport& r, bool with_constant) {
  std::string out;
  out += "x " + std::to_string(r.x) + "\n";
  out += "count " + std::to_string(r.count) + "\n";
  out += "density " + format_real(r.density) + "\n";
  if (with_constant) {
    out += "constant " + format_real(r.constant) + "\n";
    out += "gap " + format_real(r.gap) + "\n";
    out += "normalized_error " + format_real(r.normalized_error) + "\n";
    out += "sharp_normalized_error " + format_real(r.sharp_normalized_error) + "\n";
  }
  return out;
}

inline std::string format_text(const LocalView& v, const ConditionSet& cs) {
  std::string out = "p=" + v.p.str() + "\n";
  for (std::size_t j = 0; j < cs.size(); ++j) {
    out += "  g" + cs.conditions()[j].indices.to_string() + " = " + std::to_string(v.valuations.g[j]) + "\n";
  }
  out += "  v =";
  for (int x : v.valuations.v) out += " " + std::to_string(x);
  out += "\n";
  out += "  Z_p = " + v.z_set.to_string() + "\n";
  out += "  S_p = " + v.s_p.to_string() + "\n";
  out += "  reduced =";
  for (const Condition& c : v.reduced.conditions()) out += " " + c.indices.to_string();
  out += "\n";
  out += "  I_p = " + v.i_set.to_string() + "\n";
  if (v.w_p) out += "  W_p = " + v.w_p->to_string() + "\n";
  return out;
}

}  // namespace gcdcensus::io
