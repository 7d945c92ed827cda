#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "gcdcensus/bigint.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/model.hpp"

namespace gcdcensus {

/// Throws ResourceError unless bound^k <= limit.
inline void check_enumeration_guard(std::uint64_t bound, int k, const BigInt& limit, const char* what) {
  BigInt total = boost::multiprecision::pow(BigInt(bound), static_cast<unsigned>(k));
  if (total > limit) {
    throw ResourceError(std::string(what) + ": " + std::to_string(bound) + "^" + std::to_string(k) + " exceeds the limit " +
                        limit.str());
  }
}

namespace detail {

/// Walks the tuples in [1, bound]^k satisfying a condition set, in lexicographic
/// order. Entry i only runs over multiples of the lcm of the gcd values of
/// conditions containing i, and partial gcds are threaded through the loops so a
/// condition is checked as soon as its last index is assigned.
class TupleWalker {
 public:
  TupleWalker(const ConditionSet& cs, std::uint64_t bound) : k_(cs.k()), bound_(bound) {
    const auto ku = static_cast<std::size_t>(k_);
    steps_.assign(ku + 1, 1);
    containing_.assign(ku + 1, {});
    for (std::size_t c = 0; c < cs.size(); ++c) {
      const Condition& cond = cs.conditions()[c];
      if (cond.value > BigInt(bound_)) {
        feasible_ = false;
        return;
      }
      const auto f = static_cast<std::uint64_t>(cond.value);
      values_.push_back(f);
      last_.push_back(cond.indices.max_index());
      cond.indices.for_each([&](int i) {
        auto& step = steps_[static_cast<std::size_t>(i)];
        BigInt l = boost::multiprecision::lcm(BigInt(step), BigInt(f));
        if (l > BigInt(bound_)) {
          feasible_ = false;
        } else {
          step = static_cast<std::uint64_t>(l);
        }
        containing_[static_cast<std::size_t>(i)].push_back(c);
      });
    }
    partial_.assign((ku + 1) * std::max<std::size_t>(values_.size(), 1), 0);
    tuple_.assign(ku, 0);
  }

  bool feasible() const { return feasible_; }

  /// Number of admissible values for the first entry; slots index them.
  std::uint64_t first_slots() const { return feasible_ ? bound_ / steps_[1] : 0; }

  /// Calls fn(tuple) for each satisfying tuple whose first-entry slot is
  /// congruent to `offset` modulo `stride`. Stops early when fn returns false.
  template <typename Fn>
  void run(Fn&& fn, std::uint64_t offset = 0, std::uint64_t stride = 1) {
    if (!feasible_) return;
    stop_ = false;
    const std::uint64_t step = steps_[1];
    for (std::uint64_t slot = offset; slot < first_slots() && !stop_; slot += stride) {
      visit(1, step * (slot + 1), fn);
    }
  }

 private:
  template <typename Fn>
  void visit(int i, std::uint64_t n, Fn& fn) {
    const std::size_t width = values_.size();
    const auto iu = static_cast<std::size_t>(i);
    std::uint64_t* row = partial_.data() + iu * width;
    const std::uint64_t* prev = partial_.data() + (iu - 1) * width;
    std::copy(prev, prev + width, row);
    for (std::size_t c : containing_[iu]) {
      const std::uint64_t g = std::gcd(row[c], n);
      if (last_[c] == i && g != values_[c]) return;
      row[c] = g;
    }
    tuple_[iu - 1] = n;
    if (i == k_) {
      if (!fn(static_cast<const std::vector<std::uint64_t>&>(tuple_))) stop_ = true;
      return;
    }
    const std::uint64_t step = steps_[iu + 1];
    for (std::uint64_t next = step; next <= bound_ && !stop_; next += step) visit(i + 1, next, fn);
  }

  int k_;
  std::uint64_t bound_;
  bool feasible_ = true;
  bool stop_ = false;
  std::vector<std::uint64_t> steps_;
  std::vector<std::vector<std::size_t>> containing_;
  std::vector<std::uint64_t> values_;
  std::vector<int> last_;
  std::vector<std::uint64_t> partial_;
  std::vector<std::uint64_t> tuple_;
};

}  // namespace detail
}  // namespace gcdcensus
