#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gcdcensus/admissibility.hpp"
#include "gcdcensus/bigint.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/index_set.hpp"
#include "gcdcensus/model.hpp"
#include "gcdcensus/padic.hpp"
#include "gcdcensus/primes.hpp"

namespace gcdcensus {

/// Local factor at a prime not dividing any gcd value, as a polynomial in t = 1/p.
/// coefficients[j] multiplies t^j.
struct FactorPolynomial {
  std::vector<Rational> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }

  Rational evaluate(const Rational& t) const {
    Rational acc = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  /// Value minus one, i.e. sum_{j >= 2} c_j t^j, evaluated in double.
  double excess(double t) const {
    double acc = 0.0;
    for (std::size_t j = coefficients.size(); j-- > 2;) acc = acc * t + to_double(coefficients[j]);
    return acc * t * t;
  }

  /// C = sum_{j >= 2} |c_j|; |value - 1| <= C t^2 for 0 <= t <= 1.
  Rational tail_constant() const {
    Rational c = 0;
    for (std::size_t j = 2; j < coefficients.size(); ++j) c += abs(coefficients[j]);
    return c;
  }

  /// "1 - 2t^2 + t^3"
  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
      const Rational& c = coefficients[j];
      if (c == 0) continue;
      const bool negative = c < 0;
      const Rational mag = abs(c);
      if (out.empty()) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      const bool unit = mag == 1;
      if (!unit || j == 0) out += gcdcensus::to_string(mag);
      if (j >= 1) out += "t";
      if (j >= 2) out += "^" + std::to_string(j);
    }
    return out.empty() ? "0" : out;
  }
};

namespace detail {

inline constexpr int kMaxSubsetSumWidth = 24;

inline void check_subset_width(IndexSet w) {
  if (w.size() > kMaxSubsetSumWidth) {
    throw ResourceError("independent-subset sum over " + std::to_string(w.size()) + " indices exceeds the limit of " +
                        std::to_string(kMaxSubsetSumWidth));
  }
}

/// Counts independent V within W by (|V|, |W| - |V| + |M(V)|) where
/// M(V) = N(V) \ W, all in `system`.
inline std::map<std::pair<int, int>, BigInt> subset_histogram(const ConditionSet& system, IndexSet w) {
  check_subset_width(w);
  std::map<std::pair<int, int>, BigInt> hist;
  const int width = w.size();
  for_each_independent_subset(system, w, [&](IndexSet v) {
    const IndexSet m = neighbors(system, v) - w;
    hist[{v.size(), width - v.size() + m.size()}] += 1;
  });
  return hist;
}

inline BigInt binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  BigInt out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

/// Coefficients of sum count * t^a (1 - t)^b.
inline std::vector<BigInt> expand_histogram(const std::map<std::pair<int, int>, BigInt>& hist) {
  std::vector<BigInt> coeffs(1, BigInt(0));
  for (const auto& [key, count] : hist) {
    const auto [a, b] = key;
    if (coeffs.size() < static_cast<std::size_t>(a + b + 1)) coeffs.resize(static_cast<std::size_t>(a + b + 1), 0);
    for (int j = 0; j <= b; ++j) {
      BigInt term = count * binomial(b, j);
      if (j % 2 == 1) term = -term;
      coeffs[static_cast<std::size_t>(a + j)] += term;
    }
  }
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  return coeffs;
}

inline void check_cover(const ConditionSet& cs, IndexSet w) {
  if (!is_cover(cs, w)) throw DomainError(w.to_string() + " is not a cover");
  if (!(w & isolated_indices(cs)).empty()) throw DomainError("cover " + w.to_string() + " contains isolated indices");
}

}  // namespace detail

/// Exact local factor at view.p:
///   p^{-sum v_i} * sum' over independent V within W_p of
///   p^{-|V|} (1 - 1/p)^{|W_p| - |V| + |M(V)| + |Z_p|},
/// with independence and M(V) = N(V) \ W_p taken in the reduced system.
inline Rational local_factor(const LocalView& view) {
  if (!view.w_p) throw DomainError("local view at p=" + view.p.str() + " has no cover");
  const Rational t(BigInt(1), view.p);
  const Rational one_minus_t = 1 - t;
  const int z = view.z_set.size();
  Rational sum = 0;
  for (const auto& [key, count] : detail::subset_histogram(view.reduced, *view.w_p)) {
    const auto [a, b] = key;
    sum += Rational(count) * pow(t, static_cast<unsigned>(a)) * pow(one_minus_t, static_cast<unsigned>(b + z));
  }
  return sum / pow(Rational(view.p), static_cast<unsigned>(view.v_total()));
}

/// The local factor for every prime outside the gcd values, as a polynomial in
/// t = 1/p. Always has c_0 = 1 and c_1 = 0.
inline FactorPolynomial generic_factor_polynomial(const ConditionSet& cs, IndexSet w) {
  detail::check_cover(cs, w);
  FactorPolynomial poly;
  for (const BigInt& c : detail::expand_histogram(detail::subset_histogram(cs, w))) poly.coefficients.emplace_back(c);
  if (poly.coefficients.empty() || poly.coefficients[0] != 1) {
    throw InternalError("generic factor polynomial has constant term " + poly.to_string());
  }
  if (poly.coefficients.size() > 1 && poly.coefficients[1] != 0) {
    throw InternalError("generic factor polynomial has nonzero linear term: " + poly.to_string());
  }
  return poly;
}

struct FactorTraceEntry {
  BigInt p;
  Rational exact;
  double value = 0.0;
};

struct DensityResult {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t prime_cutoff = 0;
  std::uint64_t prime_count = 0;
  IndexSet cover;
  std::vector<BigInt> relevant_primes;
  FactorPolynomial polynomial;
  /// C in the tail bound |log prod_{p > P}| <= 2C/P.
  double tail_constant = 0.0;
  /// Half-width of the certified interval on the log scale.
  double log_radius = 0.0;
  std::vector<FactorTraceEntry> factor_trace;
};

struct DensityOptions {
  std::optional<IndexSet> cover = std::nullopt;
  std::uint64_t prime_cutoff = 1'000'000;
  unsigned threads = 1;
  bool trace = false;
  /// With trace, primes up to this bound are listed besides the relevant ones.
  std::uint64_t trace_small_primes = 10;
  LocalViewCache* cache = nullptr;
};

/// Truncated Euler product for the density constant, over all primes up to the
/// cutoff, with a certified interval for the full infinite product.
inline DensityResult constant(const ConditionSet& cs, const DensityOptions& options = {}) {
  require_admissible(cs);
  const IndexSet cover = options.cover ? *options.cover : find_cover(cs);
  detail::check_cover(cs, cover);
  detail::check_subset_width(cover);

  DensityResult out;
  out.cover = cover;
  out.prime_cutoff = options.prime_cutoff;
  out.polynomial = generic_factor_polynomial(cs, cover);
  out.relevant_primes = relevant_primes(cs);
  const Rational c = out.polynomial.tail_constant();
  out.tail_constant = to_double(c);

  const std::uint64_t cutoff = options.prime_cutoff;
  if (cutoff < 2) throw PrimeBoundError("prime cutoff must be at least 2");
  if (!out.relevant_primes.empty() && out.relevant_primes.back() > BigInt(cutoff)) {
    throw PrimeBoundError("prime cutoff " + std::to_string(cutoff) + " is below the relevant prime " +
                          out.relevant_primes.back().str());
  }
  if (Rational(cutoff) < 2 * c) {
    throw PrimeBoundError("prime cutoff " + std::to_string(cutoff) + " is below 2C = " + to_string(Rational(2 * c)));
  }

  std::unordered_set<std::uint64_t> special;
  std::vector<std::pair<std::uint64_t, double>> special_logs;
  auto view_at = [&](const BigInt& p) {
    return options.cache != nullptr ? options.cache->view(cs, p, cover) : local_view(cs, p, cover);
  };
  for (const BigInt& p : out.relevant_primes) {
    const Rational f = local_factor(view_at(p));
    if (f <= 0) throw InternalError("local factor at p=" + p.str() + " is not positive");
    const auto pu = static_cast<std::uint64_t>(p);
    special.insert(pu);
    special_logs.emplace_back(pu, std::log(to_double(f)));
  }

  const FactorPolynomial& poly = out.polynomial;
  const PrimeLogSum sum = sum_over_primes(cutoff, options.threads, [&](std::uint64_t p) {
    if (special.contains(p)) {
      for (const auto& [q, lg] : special_logs) {
        if (q == p) return lg;
      }
    }
    return std::log1p(poly.excess(1.0 / static_cast<double>(p)));
  });

  out.value = std::exp(sum.log_sum);
  out.prime_count = sum.prime_count;
  // Rounding allowance for the per-prime logs, the summation and the final exp.
  const double rounding = 8 * DBL_EPSILON *
                          (sum.abs_sum + std::abs(sum.log_sum) + static_cast<double>(special_logs.size()) + 1.0) +
                          static_cast<double>(poly.degree() + 2) * DBL_EPSILON * out.tail_constant;
  out.log_radius = 2 * out.tail_constant / static_cast<double>(cutoff) + rounding;
  out.lower = out.value * std::exp(-out.log_radius);
  out.upper = out.value * std::exp(out.log_radius);

  if (options.trace) {
    std::vector<BigInt> traced;
    for (std::uint64_t p : primes_up_to(std::min(options.trace_small_primes, cutoff))) traced.emplace_back(p);
    for (const BigInt& p : out.relevant_primes) {
      if (std::find(traced.begin(), traced.end(), p) == traced.end()) traced.push_back(p);
    }
    std::sort(traced.begin(), traced.end());
    for (const BigInt& p : traced) {
      Rational f = local_factor(view_at(p));
      out.factor_trace.push_back(FactorTraceEntry{p, f, to_double(f)});
    }
  }
  return out;
}

/// Closed-form product over p <= cutoff of (1 - 1/p)^{k-1} (1 + (k-1)/p), the
/// density of pairwise coprime k-tuples.
inline double toth_pairwise_constant(int k, std::uint64_t cutoff, unsigned threads = 1) {
  if (k < 2) throw DomainError("k must be at least 2");
  const double km1 = k - 1;
  auto sum = sum_over_primes(cutoff, threads, [km1](std::uint64_t p) {
    const double t = 1.0 / static_cast<double>(p);
    return km1 * std::log1p(-t) + std::log1p(km1 * t);
  });
  return std::exp(sum.log_sum);
}

/// Product over p <= cutoff of sum_{x < r} C(k, x) p^{-x} (1 - 1/p)^{k-x}, the
/// density of k-tuples in which every r entries are coprime.
inline double rwise_constant(int k, int r, std::uint64_t cutoff, unsigned threads = 1) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (r < 2 || r > k) throw DomainError("r must lie in 2..k, got " + std::to_string(r));
  std::vector<double> binom;
  for (int x = 0; x <= k; ++x) binom.push_back(to_double(Rational(detail::binomial(k, x))));
  auto sum = sum_over_primes(cutoff, threads, [&](std::uint64_t p) {
    // The factor is 1 minus the binomial tail x >= r, which is O(t^r).
    const double t = 1.0 / static_cast<double>(p);
    double tail = 0.0;
    for (int x = r; x <= k; ++x) tail += binom[static_cast<std::size_t>(x)] * std::pow(t, x) * std::pow(1 - t, k - x);
    return std::log1p(-tail);
  });
  return std::exp(sum.log_sum);
}

}  // namespace gcdcensus
