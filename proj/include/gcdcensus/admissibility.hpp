#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcdcensus/bigint.hpp"
#include "gcdcensus/enumerate.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/model.hpp"
#include "gcdcensus/padic.hpp"

namespace gcdcensus {

/// A condition T whose required valuation at p is below min{v_i : i in T}.
struct Violation {
  BigInt p;
  IndexSet indices;

  std::string to_string() const { return "p=" + p.str() + ", T=" + indices.to_string(); }
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct AdmissibilityResult {
  bool admissible = true;
  std::optional<Violation> violation;

  explicit operator bool() const { return admissible; }
};

/// Raised when an operation needs an admissible system and did not get one.
class InadmissibleError : public std::invalid_argument {
 public:
  explicit InadmissibleError(Violation v)
      : std::invalid_argument("inadmissible: " + v.to_string()), violation_(std::move(v)) {}

  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

/// A system is admissible iff for every prime p and condition T,
/// g_p(T) == min{v_i : i in T}. Only primes dividing some gcd value can fail.
/// The reported violation is the first in (prime, lexicographic edge) order.
inline AdmissibilityResult is_admissible(const ConditionSet& cs) {
  for (const BigInt& p : relevant_primes(cs)) {
    const Valuations val = detail::valuations_unchecked(cs, p);
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const IndexSet t = cs.conditions()[j].indices;
      int lowest = INT32_MAX;
      t.for_each([&](int i) { lowest = std::min(lowest, val.at(i)); });
      if (val.g[j] != lowest) return {false, Violation{p, t}};
    }
  }
  return {true, std::nullopt};
}

inline void require_admissible(const ConditionSet& cs) {
  if (auto r = is_admissible(cs); !r) throw InadmissibleError(*r.violation);
}

struct WitnessTuple {
  std::vector<BigInt> entries;

  friend bool operator==(const WitnessTuple&, const WitnessTuple&) = default;
};

/// n_i = prod over p of p^{v_i(p)}. Each entry has the smallest valuation any
/// solution can have at every prime.
inline WitnessTuple witness(const ConditionSet& cs) {
  require_admissible(cs);
  WitnessTuple out{std::vector<BigInt>(static_cast<std::size_t>(cs.k()), BigInt(1))};
  for (const BigInt& p : relevant_primes(cs)) {
    const Valuations val = detail::valuations_unchecked(cs, p);
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
      out.entries[i] *= boost::multiprecision::pow(p, static_cast<unsigned>(val.v[i]));
    }
  }
  return out;
}

inline constexpr std::uint64_t kBruteForceLimit = 1'000'000'000;

/// Lexicographically first tuple in [1, bound]^k meeting every condition.
/// Requires bound^k <= 10^9.
inline std::optional<std::vector<std::uint64_t>> brute_force_find(const ConditionSet& cs, std::uint64_t bound) {
  if (bound < 1) throw DomainError("search bound must be positive");
  check_enumeration_guard(bound, cs.k(), BigInt(kBruteForceLimit), "brute-force search");
  std::optional<std::vector<std::uint64_t>> found;
  detail::TupleWalker walker(cs, bound);
  walker.run([&](const std::vector<std::uint64_t>& t) {
    found = t;
    return false;
  });
  return found;
}

}  // namespace gcdcensus
