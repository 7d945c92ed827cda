#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <thread>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gcdcensus/bigint.hpp"
#include "gcdcensus/errors.hpp"

namespace gcdcensus {

using u128 = unsigned __int128;

/// All primes <= limit, simple sieve of Eratosthenes.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

/// Segmented sieve over [2, limit] in fixed-width blocks. Blocks are independent
/// once the base primes up to sqrt(limit) are known, so they can be sieved in any
/// order or concurrently.
class SegmentedSieve {
 public:
  static constexpr std::uint64_t kDefaultBlock = std::uint64_t{1} << 18;

  explicit SegmentedSieve(std::uint64_t limit, std::uint64_t block = kDefaultBlock)
      : limit_(limit), block_(block) {
    if (block_ == 0) throw DomainError("sieve block width must be positive");
    base_ = primes_up_to(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1);
  }

  std::uint64_t limit() const { return limit_; }

  std::size_t block_count() const {
    if (limit_ < 2) return 0;
    return static_cast<std::size_t>(limit_ / block_ + 1);
  }

  /// Primes in block b, i.e. in [b * width, (b + 1) * width) intersected with [2, limit].
  std::vector<std::uint64_t> block_primes(std::size_t b) const {
    std::vector<std::uint64_t> out;
    const std::uint64_t lo = std::max<std::uint64_t>(2, b * block_);
    const std::uint64_t hi = std::min<std::uint64_t>(limit_ + 1, (b + 1) * block_);
    if (lo >= hi) return out;
    std::vector<char> composite(hi - lo, 0);
    for (std::uint64_t p : base_) {
      if (p * p >= hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j < hi; j += p) composite[j - lo] = 1;
    }
    for (std::uint64_t n = lo; n < hi; ++n) {
      if (!composite[n - lo]) out.push_back(n);
    }
    return out;
  }

  /// Calls fn(p) for each prime <= limit, ascending.
  template <typename Fn>
  void for_each_prime(Fn&& fn) const {
    for (std::size_t b = 0; b < block_count(); ++b) {
      for (std::uint64_t p : block_primes(b)) fn(p);
    }
  }

 private:
  std::uint64_t limit_;
  std::uint64_t block_;
  std::vector<std::uint64_t> base_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct PrimeLogSum {
  double log_sum = 0.0;
  /// Sum of |term(p)|, for rounding-error estimates.
  double abs_sum = 0.0;
  std::uint64_t prime_count = 0;
};

/// Sum of term(p) over primes p <= limit. Blocks are handed out to `threads`
/// workers and their partial sums are combined in block order, so the result is
/// bit-identical for every thread count.
template <typename Term>
PrimeLogSum sum_over_primes(std::uint64_t limit, unsigned threads, Term&& term) {
  SegmentedSieve sieve(limit);
  const std::size_t blocks = sieve.block_count();
  std::vector<CompensatedSum> partial(blocks);
  std::vector<std::uint64_t> counts(blocks, 0);
  std::vector<double> magnitudes(blocks, 0.0);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      CompensatedSum s;
      double mag = 0.0;
      auto ps = sieve.block_primes(b);
      for (std::uint64_t p : ps) {
        const double x = term(p);
        s.add(x);
        mag += std::abs(x);
      }
      partial[b] = s;
      magnitudes[b] = mag;
      counts[b] = ps.size();
    }
  };

  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  CompensatedSum total;
  PrimeLogSum out;
  for (std::size_t b = 0; b < blocks; ++b) {
    total.add(partial[b]);
    out.prime_count += counts[b];
    out.abs_sum += magnitudes[b];
  }
  out.log_sum = total.value();
  return out;
}

namespace detail {

inline u128 mul_mod(u128 a, u128 b, u128 m) {
  if (m <= UINT64_MAX) return (a * b) % m;
  using boost::multiprecision::uint256_t;
  uint256_t r = (uint256_t(a) * uint256_t(b)) % uint256_t(m);
  return static_cast<u128>(r);
}

inline u128 pow_mod(u128 base, u128 exp, u128 m) {
  u128 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if ((exp & 1U) != 0) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

inline u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline BigInt to_big(u128 n) {
  BigInt hi = static_cast<std::uint64_t>(n >> 64U);
  return (hi << 64) + static_cast<std::uint64_t>(n);
}

inline u128 to_u128(const BigInt& n) {
  return (static_cast<u128>(static_cast<std::uint64_t>(n >> 64)) << 64U) |
         static_cast<std::uint64_t>(n & BigInt(UINT64_MAX));
}

inline constexpr std::uint64_t kTrialLimit = 1'000'000;

}  // namespace detail

/// Miller-Rabin with the prime bases up to 41. Deterministic below
/// 3.3 * 10^24; a strong probable-prime test above that.
inline bool is_prime(u128 n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  u128 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    u128 x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (bit_length(n) > 128) throw DomainError("primality test limited to 128-bit integers");
  return is_prime(detail::to_u128(n));
}

namespace detail {

/// Brent's variant of Pollard rho. n must be odd and composite.
inline u128 pollard_rho(u128 n) {
  for (u128 c = 1;; ++c) {
    u128 y = 2;
    u128 x = y;
    u128 g = 1;
    u128 q = 1;
    u128 ys = y;
    const std::uint64_t batch = 128;
    auto f = [&](u128 v) {
      u128 r = mul_mod(v, v, n) + c;
      if (r >= n || r < c) r -= n;
      return r;
    };
    for (std::uint64_t r = 1; g == 1; r <<= 1U) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t done = 0; done < r && g == 1; done += batch) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(batch, r - done); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd128(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd128(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(u128 n, std::vector<u128>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u128 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorization as (prime, exponent) pairs with ascending primes.
/// Trial division to 10^6, then Miller-Rabin and Pollard rho. n must be
/// positive and at most 128 bits.
inline std::vector<std::pair<BigInt, int>> factorize(const BigInt& n) {
  if (n < 1) throw DomainError("can only factor positive integers");
  if (bit_length(n) > 128) throw DomainError("factorization limited to 128-bit integers, got " + n.str());
  u128 m = detail::to_u128(n);
  std::vector<u128> found;
  for (std::uint64_t p = 2; p <= detail::kTrialLimit && static_cast<u128>(p) * p <= m; p += (p == 2 ? 1 : 2)) {
    while (m % p == 0) {
      found.push_back(p);
      m /= p;
    }
  }
  detail::factor_into(m, found);
  std::sort(found.begin(), found.end());

  std::vector<std::pair<BigInt, int>> out;
  for (u128 p : found) {
    BigInt bp = detail::to_big(p);
    if (!out.empty() && out.back().first == bp) {
      ++out.back().second;
    } else {
      out.emplace_back(bp, 1);
    }
  }
  return out;
}

/// Exponent of p in n; n > 0, p prime.
inline int valuation(BigInt n, const BigInt& p) {
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

}  // namespace gcdcensus
