#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "gcdcensus/bigint.hpp"
#include "gcdcensus/density.hpp"
#include "gcdcensus/enumerate.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/model.hpp"

namespace gcdcensus {

inline constexpr std::uint64_t kCountLimit = 10'000'000'000ULL;

/// Exact number of tuples in [1, x]^k meeting every condition. Requires x^k <= 10^10.
inline std::uint64_t count(const ConditionSet& cs, std::uint64_t x, unsigned threads = 1) {
  if (x < 1) throw DomainError("count bound must be at least 1");
  check_enumeration_guard(x, cs.k(), BigInt(kCountLimit), "tuple count");

  const std::uint64_t slots = detail::TupleWalker(cs, x).first_slots();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(slots, 1)));
  std::atomic<std::uint64_t> total{0};
  auto work = [&](unsigned offset) {
    detail::TupleWalker walker(cs, x);
    std::uint64_t local = 0;
    walker.run(
        [&local](const std::vector<std::uint64_t>&) {
          ++local;
          return true;
        },
        offset, threads);
    total += local;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  return total.load();
}

/// Möbius function on [0, n] by a linear sieve; mu[0] is unused.
inline std::vector<int> mobius_table(std::uint64_t n) {
  std::vector<int> mu(n + 1, 1);
  std::vector<std::uint64_t> primes;
  std::vector<bool> composite(n + 1, false);
  if (n >= 1) mu[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (std::uint64_t p : primes) {
      if (i * p > n) break;
      composite[i * p] = true;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  return mu;
}

/// Number of k-tuples in [1, x]^k with gcd 1: sum_{d <= x} mu(d) floor(x/d)^k.
inline BigInt nymann_count(int k, std::uint64_t x) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (x < 1) throw DomainError("count bound must be at least 1");
  const auto mu = mobius_table(x);
  BigInt total = 0;
  for (std::uint64_t d = 1; d <= x; ++d) {
    if (mu[d] == 0) continue;
    BigInt term = boost::multiprecision::pow(BigInt(x / d), static_cast<unsigned>(k));
    total += mu[d] > 0 ? term : BigInt(-term);
  }
  return total;
}

/// Largest |N({i})| over indices; the sharper log power for the error term.
inline int sharp_log_power(const ConditionSet& cs) {
  int best = 0;
  for (int i = 1; i <= cs.k(); ++i) best = std::max(best, neighbors(cs, IndexSet{i}).size());
  return best;
}

struct CountReport {
  std::uint64_t x = 0;
  std::uint64_t count = 0;
  double density = 0.0;
  double constant = 0.0;
  double gap = 0.0;
  /// |density - constant| * x / max(1, (log x)^{k-1})
  double normalized_error = 0.0;
  /// Same with the log power replaced by max_i |N({i})|.
  double sharp_normalized_error = 0.0;
  int log_power = 0;
  int sharp_log_power = 0;
};

namespace detail {

inline double log_scale(std::uint64_t x, int power) {
  const double scale = std::pow(std::log(static_cast<double>(x)), power);
  return std::max(1.0, scale);
}

}  // namespace detail

inline CountReport empirical_report(const ConditionSet& cs, std::uint64_t x, const DensityResult& density,
                                    unsigned threads = 1) {
  CountReport r;
  r.x = x;
  r.count = count(cs, x, threads);
  r.density = static_cast<double>(r.count) / std::pow(static_cast<double>(x), cs.k());
  r.constant = density.value;
  r.gap = std::abs(r.density - r.constant);
  r.log_power = cs.k() - 1;
  r.sharp_log_power = sharp_log_power(cs);
  r.normalized_error = r.gap * static_cast<double>(x) / detail::log_scale(x, r.log_power);
  r.sharp_normalized_error = r.gap * static_cast<double>(x) / detail::log_scale(x, r.sharp_log_power);
  return r;
}

/// One report per bound; bounds must be strictly ascending.
inline std::vector<CountReport> convergence_table(const ConditionSet& cs, const std::vector<std::uint64_t>& xs,
                                                  const DensityResult& density, unsigned threads = 1) {
  for (std::size_t j = 1; j < xs.size(); ++j) {
    if (xs[j] <= xs[j - 1]) throw DomainError("convergence bounds must be strictly ascending");
  }
  std::vector<CountReport> out;
  out.reserve(xs.size());
  for (std::uint64_t x : xs) out.push_back(empirical_report(cs, x, density, threads));
  return out;
}

/// x / 2^(levels-1), ..., x / 2, x; bounds that collapse to 0 or repeat are dropped.
inline std::vector<std::uint64_t> dyadic_bounds(std::uint64_t x, int levels = 4) {
  if (levels < 1) throw DomainError("levels must be at least 1");
  std::vector<std::uint64_t> out;
  for (int j = std::min(levels - 1, 63); j >= 0; --j) {
    const std::uint64_t b = x >> j;
    if (b >= 1 && (out.empty() || b > out.back())) out.push_back(b);
  }
  return out;
}

}  // namespace gcdcensus
