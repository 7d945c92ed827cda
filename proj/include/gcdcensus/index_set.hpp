#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "gcdcensus/errors.hpp"

namespace gcdcensus {

inline constexpr int kMaxIndices = 64;

/// A subset of {1, ..., k} with k <= 64, stored as a bitmask.
/// Index i maps to bit i - 1.
class IndexSet {
 public:
  constexpr IndexSet() = default;

  IndexSet(std::initializer_list<int> indices) {
    for (int i : indices) insert(i);
  }

  static constexpr IndexSet from_mask(std::uint64_t mask) {
    IndexSet s;
    s.mask_ = mask;
    return s;
  }

  /// {1, ..., k}
  static constexpr IndexSet full(int k) {
    return from_mask(k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1);
  }

  static IndexSet from_indices(const std::vector<int>& indices) {
    IndexSet s;
    for (int i : indices) s.insert(i);
    return s;
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }

  constexpr bool contains(int i) const {
    return i >= 1 && i <= kMaxIndices && ((mask_ >> (i - 1)) & 1U) != 0;
  }

  void insert(int i) {
    check_index(i);
    mask_ |= bit(i);
  }

  void erase(int i) {
    check_index(i);
    mask_ &= ~bit(i);
  }

  constexpr bool subset_of(IndexSet other) const { return (mask_ & ~other.mask_) == 0; }

  /// Largest index present, or 0 for the empty set.
  constexpr int max_index() const { return mask_ == 0 ? 0 : 64 - std::countl_zero(mask_); }
  constexpr int min_index() const { return mask_ == 0 ? 0 : std::countr_zero(mask_) + 1; }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  /// Calls fn(i) for each member in ascending order.
  template <typename Fn>
  constexpr void for_each(Fn&& fn) const {
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) fn(std::countr_zero(m) + 1);
  }

  /// "{1,3,4}"
  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for_each([&](int i) {
      if (!first) out += ',';
      out += std::to_string(i);
      first = false;
    });
    out += '}';
    return out;
  }

  friend constexpr IndexSet operator|(IndexSet a, IndexSet b) { return from_mask(a.mask_ | b.mask_); }
  friend constexpr IndexSet operator&(IndexSet a, IndexSet b) { return from_mask(a.mask_ & b.mask_); }
  /// Set difference.
  friend constexpr IndexSet operator-(IndexSet a, IndexSet b) { return from_mask(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(IndexSet a, IndexSet b) = default;

 private:
  static constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << (i - 1); }

  static void check_index(int i) {
    if (i < 1 || i > kMaxIndices) {
      throw DomainError("index " + std::to_string(i) + " outside 1.." + std::to_string(kMaxIndices));
    }
  }

  std::uint64_t mask_ = 0;
};

/// Lexicographic order on the sorted member lists: {1,2} < {1,2,3} < {1,3} < {2,3}.
inline bool lex_less(IndexSet a, IndexSet b) {
  std::uint64_t x = a.mask();
  std::uint64_t y = b.mask();
  while (x != 0 && y != 0) {
    int i = std::countr_zero(x);
    int j = std::countr_zero(y);
    if (i != j) return i < j;
    x &= x - 1;
    y &= y - 1;
  }
  return x == 0 && y != 0;
}

/// Calls fn(sub) for every subset of `set`, in increasing bitmask order.
template <typename Fn>
void for_each_subset(IndexSet set, Fn&& fn) {
  const std::uint64_t m = set.mask();
  std::uint64_t sub = 0;
  while (true) {
    fn(IndexSet::from_mask(sub));
    if (sub == m) break;
    sub = (sub - m) & m;
  }
}

}  // namespace gcdcensus

template <>
struct std::hash<gcdcensus::IndexSet> {
  std::size_t operator()(gcdcensus::IndexSet s) const noexcept { return std::hash<std::uint64_t>{}(s.mask()); }
};
