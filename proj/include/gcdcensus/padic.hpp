#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcdcensus/bigint.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/index_set.hpp"
#include "gcdcensus/model.hpp"
#include "gcdcensus/primes.hpp"

namespace gcdcensus {

/// Primes dividing some required gcd value, ascending.
inline std::vector<BigInt> relevant_primes(const ConditionSet& cs) {
  std::set<BigInt> primes;
  for (const Condition& c : cs.conditions()) {
    for (const auto& [p, e] : factorize(c.value)) primes.insert(p);
  }
  return {primes.begin(), primes.end()};
}

/// g[j] is the p-adic valuation of conditions()[j].value. v[i - 1] is the largest
/// g over conditions containing i, or 0.
struct Valuations {
  std::vector<int> g;
  std::vector<int> v;

  int at(int i) const { return v[static_cast<std::size_t>(i - 1)]; }
};

namespace detail {

inline void require_prime(const BigInt& p) {
  if (!is_prime(p)) throw DomainError(p.str() + " is not prime");
}

inline Valuations valuations_unchecked(const ConditionSet& cs, const BigInt& p) {
  Valuations out;
  out.g.reserve(cs.size());
  out.v.assign(static_cast<std::size_t>(cs.k()), 0);
  for (const Condition& c : cs.conditions()) {
    const int g = valuation(c.value, p);
    out.g.push_back(g);
    c.indices.for_each([&](int i) {
      int& slot = out.v[static_cast<std::size_t>(i - 1)];
      slot = std::max(slot, g);
    });
  }
  return out;
}

inline IndexSet z_set_from(const ConditionSet& cs, const Valuations& val) {
  IndexSet z;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    const IndexSet t = cs.conditions()[j].indices;
    const int g = val.g[j];
    t.for_each([&](int i) {
      bool forced = true;
      (t - IndexSet{i}).for_each([&](int other) { forced = forced && val.at(other) > g; });
      if (forced) z.insert(i);
    });
  }
  return z;
}

}  // namespace detail

inline Valuations valuations(const ConditionSet& cs, const BigInt& p) {
  detail::require_prime(p);
  return detail::valuations_unchecked(cs, p);
}

/// Z_p: indices i for which some condition T containing i has every other member j
/// with v_j > g_p(T), so the valuation of n_i is pinned to v_i.
inline IndexSet z_set(const ConditionSet& cs, const BigInt& p) {
  return detail::z_set_from(cs, valuations(cs, p));
}

/// Everything attached to a single prime: valuations, the forced set Z_p, the
/// reduced all-ones system on S_p = S \ Z_p, its isolated indices I_p and, once a
/// cover W of the original system is supplied, W_p = W \ (Z_p | I_p).
struct LocalView {
  BigInt p;
  Valuations valuations;
  IndexSet z_set;
  IndexSet s_p;
  ConditionSet reduced;
  IndexSet i_set;
  std::optional<IndexSet> w_p;

  int v_total() const { return std::accumulate(valuations.v.begin(), valuations.v.end(), 0); }
};

/// Builds the reduced system at p. The input must be admissible; a reduced edge
/// with fewer than two indices means it was not, and raises InternalError.
inline LocalView reduce(const ConditionSet& cs, const BigInt& p) {
  Valuations val = valuations(cs, p);
  const IndexSet z = detail::z_set_from(cs, val);
  const IndexSet s_p = cs.ground() - z;

  std::vector<IndexSet> edges;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    const IndexSet t = cs.conditions()[j].indices;
    if (!t.subset_of(s_p)) continue;
    IndexSet attained;
    t.for_each([&](int i) {
      if (val.at(i) == val.g[j]) attained.insert(i);
    });
    if (attained.size() < 2) {
      throw InternalError("reduced edge " + attained.to_string() + " from " + t.to_string() + " at p=" + p.str() +
                          " has fewer than two indices; input is not admissible");
    }
    if (std::find(edges.begin(), edges.end(), attained) == edges.end()) edges.push_back(attained);
  }

  std::vector<Condition> conds;
  conds.reserve(edges.size());
  for (IndexSet e : edges) conds.push_back(Condition{e, 1});
  ConditionSet reduced(cs.k(), std::move(conds));

  IndexSet used;
  for (const Condition& c : reduced.conditions()) used = used | c.indices;
  const IndexSet isolated = s_p - used;

  return LocalView{p, std::move(val), z, s_p, std::move(reduced), isolated, std::nullopt};
}

/// reduce() plus W_p for the cover W. W must cover cs and avoid its isolated indices.
inline LocalView local_view(const ConditionSet& cs, const BigInt& p, IndexSet w) {
  if (!is_cover(cs, w)) throw DomainError(w.to_string() + " is not a cover");
  if (!(w & isolated_indices(cs)).empty()) {
    throw DomainError("cover " + w.to_string() + " contains isolated indices");
  }
  LocalView view = reduce(cs, p);
  const IndexSet w_p = w - (view.z_set | view.i_set);
  if (!is_cover(view.reduced, w_p)) {
    throw InternalError("W_p = " + w_p.to_string() + " does not cover the reduced system at p=" + p.str());
  }
  view.w_p = w_p;
  return view;
}

/// Memoizes reduce() keyed by (system, prime). Safe for concurrent use.
class LocalViewCache {
 public:
  std::shared_ptr<const LocalView> reduced(const ConditionSet& cs, const BigInt& p) {
    Key key{hash_value(cs), p.str()};
    {
      std::shared_lock lock(mutex_);
      if (auto hit = lookup(key, cs)) return hit;
    }
    auto built = std::make_shared<const LocalView>(reduce(cs, p));
    std::unique_lock lock(mutex_);
    if (auto hit = lookup(key, cs)) return hit;
    entries_[key].push_back(Entry{cs, built});
    return built;
  }

  LocalView view(const ConditionSet& cs, const BigInt& p, IndexSet w) {
    if (!is_cover(cs, w)) throw DomainError(w.to_string() + " is not a cover");
    if (!(w & isolated_indices(cs)).empty()) {
      throw DomainError("cover " + w.to_string() + " contains isolated indices");
    }
    LocalView out = *reduced(cs, p);
    out.w_p = w - (out.z_set | out.i_set);
    return out;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    std::size_t n = 0;
    for (const auto& [key, bucket] : entries_) n += bucket.size();
    return n;
  }

 private:
  struct Key {
    std::size_t hash;
    std::string prime;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.hash ^ (std::hash<std::string>{}(k.prime) << 1U); }
  };
  struct Entry {
    ConditionSet system;
    std::shared_ptr<const LocalView> view;
  };

  std::shared_ptr<const LocalView> lookup(const Key& key, const ConditionSet& cs) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    for (const Entry& e : it->second) {
      if (e.system == cs) return e.view;
    }
    return nullptr;
  }

  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, std::vector<Entry>, KeyHash> entries_;
};

}  // namespace gcdcensus
