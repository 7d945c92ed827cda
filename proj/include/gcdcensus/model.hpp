#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gcdcensus/bigint.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/index_set.hpp"

namespace gcdcensus {

/// Requires gcd{n_i : i in indices} == value.
struct Condition {
  IndexSet indices;
  BigInt value = 1;

  friend bool operator==(const Condition&, const Condition&) = default;
};

/// A system of exact-gcd conditions on k-tuples of positive integers, viewed as a
/// weighted hypergraph on {1, ..., k}.
///
/// Conditions are kept in lexicographic order of their index sets, so two systems
/// built from the same conditions in any order compare equal.
class ConditionSet {
 public:
  ConditionSet(int k, std::vector<Condition> conditions) : k_(k), conditions_(std::move(conditions)) {
    if (k_ < 2 || k_ > kMaxIndices) {
      throw DomainError("k must lie in 2.." + std::to_string(kMaxIndices) + ", got " + std::to_string(k_));
    }
    const IndexSet ground = IndexSet::full(k_);
    for (const Condition& c : conditions_) {
      if (!c.indices.subset_of(ground)) {
        throw DomainError("condition " + c.indices.to_string() + " uses an index outside 1.." + std::to_string(k_));
      }
      if (c.indices.size() < 2) {
        throw DomainError("condition " + c.indices.to_string() + " has fewer than two indices");
      }
      if (c.value < 1) throw DomainError("condition " + c.indices.to_string() + " has gcd value < 1");
    }
    std::sort(conditions_.begin(), conditions_.end(),
              [](const Condition& a, const Condition& b) { return lex_less(a.indices, b.indices); });
    for (std::size_t j = 1; j < conditions_.size(); ++j) {
      if (conditions_[j].indices == conditions_[j - 1].indices) {
        throw DomainError("duplicate condition on " + conditions_[j].indices.to_string());
      }
    }
  }

  int k() const { return k_; }
  IndexSet ground() const { return IndexSet::full(k_); }
  const std::vector<Condition>& conditions() const { return conditions_; }
  std::size_t size() const { return conditions_.size(); }
  bool empty() const { return conditions_.empty(); }

  friend bool operator==(const ConditionSet&, const ConditionSet&) = default;

 private:
  int k_;
  std::vector<Condition> conditions_;
};

namespace detail {

inline void check_within(const ConditionSet& cs, IndexSet w) {
  if (!w.subset_of(cs.ground())) {
    throw DomainError("index set " + w.to_string() + " is not contained in 1.." + std::to_string(cs.k()));
  }
}

}  // namespace detail

/// True iff every condition has at most one index outside W.
inline bool is_cover(const ConditionSet& cs, IndexSet w) {
  detail::check_within(cs, w);
  return std::all_of(cs.conditions().begin(), cs.conditions().end(),
                     [w](const Condition& c) { return (c.indices - w).size() <= 1; });
}

/// N(W): indices x such that T \ W == {x} for some condition T.
inline IndexSet neighbors(const ConditionSet& cs, IndexSet w) {
  detail::check_within(cs, w);
  IndexSet out;
  for (const Condition& c : cs.conditions()) {
    IndexSet rest = c.indices - w;
    if (rest.size() == 1) out = out | rest;
  }
  return out;
}

/// True iff no condition's index set lies inside W.
inline bool is_independent(const ConditionSet& cs, IndexSet w) {
  detail::check_within(cs, w);
  return std::none_of(cs.conditions().begin(), cs.conditions().end(),
                      [w](const Condition& c) { return c.indices.subset_of(w); });
}

/// Indices that appear in no condition.
inline IndexSet isolated_indices(const ConditionSet& cs) {
  IndexSet used;
  for (const Condition& c : cs.conditions()) used = used | c.indices;
  return cs.ground() - used;
}

/// Calls fn(V) for each independent V within W, in increasing bitmask order.
template <typename Fn>
void for_each_independent_subset(const ConditionSet& cs, IndexSet w, Fn&& fn) {
  detail::check_within(cs, w);
  // Only edges inside W can make a subset of W dependent.
  std::vector<std::uint64_t> inner;
  for (const Condition& c : cs.conditions()) {
    if (c.indices.subset_of(w)) inner.push_back(c.indices.mask());
  }
  for_each_subset(w, [&](IndexSet v) {
    const std::uint64_t m = v.mask();
    for (std::uint64_t e : inner) {
      if ((e & ~m) == 0) return;
    }
    fn(v);
  });
}

inline std::vector<IndexSet> independent_subsets(const ConditionSet& cs, IndexSet w) {
  std::vector<IndexSet> out;
  for_each_independent_subset(cs, w, [&](IndexSet v) { out.push_back(v); });
  return out;
}

namespace detail {

inline constexpr int kExhaustiveCoverLimit = 24;

struct CoverSearch {
  std::vector<IndexSet> edges;
  IndexSet best;
  int best_size;

  void run(IndexSet chosen, IndexSet excluded) {
    if (chosen.size() >= best_size) return;
    const IndexSet* violated = nullptr;
    for (const IndexSet& e : edges) {
      if ((e - chosen).size() >= 2) {
        violated = &e;
        break;
      }
    }
    if (violated == nullptr) {
      best = chosen;
      best_size = chosen.size();
      return;
    }
    // A cover misses at most one index of this edge. Either the smallest free
    // index joins the cover, or it stays out and every other outside index joins.
    IndexSet outside = *violated - chosen;
    IndexSet free = outside - excluded;
    if (free.empty()) return;
    int a = free.min_index();
    IndexSet with_a = chosen;
    with_a.insert(a);
    run(with_a, excluded);

    IndexSet rest = outside;
    rest.erase(a);
    if (!(rest & excluded).empty()) return;
    IndexSet excl = excluded;
    excl.insert(a);
    run(chosen | rest, excl);
  }
};

}  // namespace detail

/// A cover avoiding isolated indices. Minimum size by branch and bound when
/// k <= 24, greedy otherwise. Deterministic for a fixed input.
inline IndexSet find_cover(const ConditionSet& cs) {
  const IndexSet candidates = cs.ground() - isolated_indices(cs);
  if (cs.k() <= detail::kExhaustiveCoverLimit) {
    detail::CoverSearch search;
    for (const Condition& c : cs.conditions()) search.edges.push_back(c.indices);
    search.best = candidates;
    search.best_size = candidates.size() + 1;
    search.run(IndexSet{}, IndexSet{});
    return search.best;
  }

  IndexSet w;
  while (true) {
    std::vector<int> hits(static_cast<std::size_t>(cs.k()) + 1, 0);
    bool any = false;
    for (const Condition& c : cs.conditions()) {
      IndexSet outside = c.indices - w;
      if (outside.size() >= 2) {
        any = true;
        outside.for_each([&](int i) { ++hits[static_cast<std::size_t>(i)]; });
      }
    }
    if (!any) return w;
    int pick = static_cast<int>(std::max_element(hits.begin(), hits.end()) - hits.begin());
    w.insert(pick);
  }
}

/// 1 iff the tuple meets every condition exactly.
inline int delta(const ConditionSet& cs, std::span<const BigInt> tuple) {
  if (tuple.size() != static_cast<std::size_t>(cs.k())) {
    throw DomainError("tuple has " + std::to_string(tuple.size()) + " entries, expected " + std::to_string(cs.k()));
  }
  for (const BigInt& n : tuple) {
    if (n < 1) throw DomainError("tuple entries must be positive integers");
  }
  for (const Condition& c : cs.conditions()) {
    BigInt g = 0;
    c.indices.for_each([&](int i) { g = gcd(g, tuple[static_cast<std::size_t>(i - 1)]); });
    if (g != c.value) return 0;
  }
  return 1;
}

inline int delta(const ConditionSet& cs, std::span<const std::uint64_t> tuple) {
  std::vector<BigInt> wide(tuple.begin(), tuple.end());
  return delta(cs, std::span<const BigInt>(wide));
}

/// Order-sensitive hash over (k, conditions); conditions are canonically ordered.
inline std::size_t hash_value(const ConditionSet& cs) {
  std::size_t h = std::hash<int>{}(cs.k());
  auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const Condition& c : cs.conditions()) {
    mix(std::hash<IndexSet>{}(c.indices));
    mix(std::hash<std::string>{}(c.value.str()));
  }
  return h;
}

}  // namespace gcdcensus
