// One line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gcdcensus/gcdcensus.hpp"
#include "gcdcensus/io.hpp"
#include "oracles.hpp"

using namespace gcdcensus;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

const double kInvZeta2 = 6.0 / (std::numbers::pi * std::numbers::pi);
const double kInvZeta3 = 1.0 / 1.2020569031595942854;

Verdict zeta_oracle() {
  Verdict v;
  const DensityResult r = constant(oracle::complete_uniform(2, 2), {.prime_cutoff = 1'000'000});
  v.require(r.value >= 0.60792 && r.value <= 0.60794, fmt("value %.10f outside [0.60792, 0.60794]", r.value));
  v.require(r.lower <= kInvZeta2 && kInvZeta2 <= r.upper, fmt("[%.12f, %.12f] misses 6/pi^2", r.lower, r.upper));
  if (v.ok) v.detail = fmt("value %.10f in [%.10f, %.10f]", r.value, r.lower, r.upper);
  return v;
}

Verdict toth() {
  Verdict v;
  const double a = constant(oracle::complete_uniform(3, 2), {.prime_cutoff = 1'000'000}).value;
  const double b = toth_pairwise_constant(3, 1'000'000);
  v.require(rel_close(a, b, 1e-12), fmt("constant %.17g vs closed form %.17g", a, b));
  v.require(std::abs(a - 0.286747) <= 5e-7, fmt("value %.10f is not 0.286747 to 6 digits", a));
  if (v.ok) v.detail = fmt("value %.12f, closed form %.12f", a, b);
  return v;
}

Verdict rwise() {
  Verdict v;
  const double r = rwise_constant(3, 3, 1'000'000);
  const DensityResult d = constant(ConditionSet(3, {Condition{{1, 2, 3}, 1}}), {.prime_cutoff = 1'000'000});
  v.require(d.lower <= kInvZeta3 && kInvZeta3 <= d.upper, fmt("[%.12f, %.12f] misses 1/zeta(3)", d.lower, d.upper));
  v.require(d.lower <= r && r <= d.upper, fmt("r-wise value %.12f outside [%.12f, %.12f]", r, d.lower, d.upper));
  v.require(rel_close(r, d.value, 1e-12), fmt("r-wise %.17g vs constant %.17g", r, d.value));
  if (v.ok) v.detail = fmt("r-wise %.12f, constant %.12f, 1/zeta(3) %.12f", r, d.value, kInvZeta3);
  return v;
}

std::vector<ConditionSet> triangle_sweep() {
  std::vector<ConditionSet> out;
  const IndexSet pairs[] = {{1, 2}, {1, 3}, {2, 3}};
  for (int bits = 0; bits < 8; ++bits) {
    // The full triple is optional: absent, gcd 1 or gcd 2.
    for (int triple = 0; triple < 3; ++triple) {
      std::vector<Condition> conds;
      for (int j = 0; j < 3; ++j) conds.push_back(Condition{pairs[j], (bits >> j & 1) != 0 ? 2 : 1});
      if (triple > 0) conds.push_back(Condition{{1, 2, 3}, triple});
      out.emplace_back(3, conds);
    }
  }
  return out;
}

Verdict admissibility_sweep() {
  Verdict v;
  int admissible = 0;
  int inadmissible = 0;
  for (const ConditionSet& cs : triangle_sweep()) {
    const bool decided = static_cast<bool>(is_admissible(cs));
    const auto found = brute_force_find(cs, 16);
    v.require(decided == found.has_value(), "decision disagrees with search on " + io::to_json(cs).dump());
    if (decided) {
      ++admissible;
      v.require(delta(cs, std::span<const BigInt>(witness(cs).entries)) == 1, "witness fails on " + io::to_json(cs).dump());
      if (found) v.require(delta(cs, std::span<const std::uint64_t>(*found)) == 1, "search hit fails");
    } else {
      ++inadmissible;
    }
  }
  if (v.ok) v.detail = fmt("%.0f systems: %.0f admissible, %.0f inadmissible", admissible + inadmissible, admissible, inadmissible);
  return v;
}

Verdict exact_counts() {
  Verdict v;
  const ConditionSet pair(2, {Condition{{1, 2}, 1}});
  const ConditionSet full(3, {Condition{{1, 2, 3}, 1}});
  const ConditionSet two(2, {Condition{{1, 2}, 2}});
  // Independent oracles first.
  v.require(oracle::brute_count(pair, 10) == 63 && oracle::mobius_count(2, 10) == 63, "oracle disagrees on 63");
  v.require(oracle::brute_count(full, 4) == 55 && oracle::mobius_count(3, 4) == 55, "oracle disagrees on 55");
  v.require(oracle::brute_count(two, 4) == 3, "oracle disagrees on 3");
  v.require(count(pair, 10) == 63, "count(pairwise, 10) != 63");
  v.require(count(full, 4) == 55, "count(full gcd, 4) != 55");
  v.require(nymann_count(3, 4) == 55, "nymann_count(3, 4) != 55");
  v.require(count(two, 4) == 3, "count({(1,2):2}, 4) != 3");
  if (v.ok) v.detail = "63, 55, 55, 3";
  return v;
}

Verdict convergence() {
  Verdict v;
  struct Case {
    const char* name;
    ConditionSet cs;
    std::uint64_t x;
  };
  const Case cases[] = {
      {"pairwise k=2", ConditionSet(2, {Condition{{1, 2}, 1}}), 3000},
      {"{(1,2):2}", ConditionSet(2, {Condition{{1, 2}, 2}}), 2000},
      {"{(1,2):1,(2,3):2}", ConditionSet(3, {Condition{{1, 2}, 1}, Condition{{2, 3}, 2}}), 300},
  };
  std::string summary;
  for (const Case& c : cases) {
    const DensityResult d = constant(c.cs, {.prime_cutoff = 1'000'000});
    const auto table = convergence_table(c.cs, dyadic_bounds(c.x), d);
    const CountReport& last = table.back();
    const CountReport& prev = table[table.size() - 2];
    v.require(last.x == c.x, std::string(c.name) + ": table does not end at x");
    v.require(last.gap <= 0.01, std::string(c.name) + fmt(": gap %.3g > 0.01", last.gap));
    v.require(last.normalized_error <= prev.normalized_error,
              std::string(c.name) + fmt(": normalized error rose from %.4g at x=%.0f to %.4g", prev.normalized_error,
                                        static_cast<double>(prev.x), last.normalized_error));
    summary += std::string(summary.empty() ? "" : "; ") + c.name +
               fmt(" gap %.2g, err %.3g -> %.3g", last.gap, prev.normalized_error, last.normalized_error);
  }
  if (v.ok) v.detail = summary;
  return v;
}

std::vector<ConditionSet> random_systems() {
  std::mt19937_64 rng(20261016);
  std::vector<ConditionSet> out;
  while (out.size() < 50) {
    const int k = 2 + static_cast<int>(rng() % 5);
    ConditionSet cs = oracle::random_admissible(rng, k, 6, 60);
    if (!cs.empty()) out.push_back(std::move(cs));
  }
  return out;
}

Verdict cover_independence(const std::vector<ConditionSet>& systems) {
  Verdict v;
  double worst = 0;
  for (const ConditionSet& cs : systems) {
    const IndexSet a = find_cover(cs);
    const IndexSet b = cs.ground() - isolated_indices(cs);
    v.require(a != b && is_cover(cs, b), "covers not distinct for " + io::to_json(cs).dump());
    const double x = constant(cs, {.cover = a, .prime_cutoff = 10'000}).value;
    const double y = constant(cs, {.cover = b, .prime_cutoff = 10'000}).value;
    v.require(rel_close(x, y, 1e-12), fmt("%.17g vs %.17g", x, y) + " on " + io::to_json(cs).dump());
    worst = std::max(worst, std::abs(x - y) / std::max(std::abs(x), 1e-300));
  }
  if (v.ok) v.detail = fmt("%.0f systems, worst relative difference %.3g", static_cast<double>(systems.size()), worst);
  return v;
}

Verdict polynomial_invariants(const std::vector<ConditionSet>& systems) {
  Verdict v;
  int checked = 0;
  for (const ConditionSet& cs : systems) {
    const IndexSet w = find_cover(cs);
    const FactorPolynomial poly = generic_factor_polynomial(cs, w);
    v.require(!poly.coefficients.empty() && poly.coefficients[0] == 1, "c0 != 1 on " + io::to_json(cs).dump());
    v.require(poly.coefficients.size() < 2 || poly.coefficients[1] == 0, "c1 != 0 on " + io::to_json(cs).dump());
    const std::vector<BigInt> special = relevant_primes(cs);
    int primes = 0;
    for (std::uint64_t p : primes_up_to(1000)) {
      if (primes == 20) break;
      if (std::find(special.begin(), special.end(), BigInt(p)) != special.end()) continue;
      ++primes;
      v.require(poly.evaluate(Rational(1, static_cast<long long>(p))) == local_factor(local_view(cs, p, w)),
                "generic factor differs from local factor at p=" + std::to_string(p) + " on " + io::to_json(cs).dump());
    }
    v.require(primes == 20, "fewer than 20 primes tested");
    ++checked;
  }
  if (v.ok) v.detail = fmt("%.0f systems, 20 primes each", checked);
  return v;
}

Verdict local_spot() {
  Verdict v;
  const ConditionSet cs(3, {Condition{{1, 2}, 1}, Condition{{2, 3}, 2}});
  const Rational got = local_factor(local_view(cs, 2, {2}));
  const Rational want = oracle::local_density(cs, 2);
  v.require(want == Rational(3, 32), "oracle gives " + to_string(want));
  v.require(got == Rational(3, 32), "local factor is " + to_string(got));
  if (v.ok) v.detail = "3/32 from both";
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, double budget_s, const std::function<Verdict()>& fn) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (budget_s > 0 && secs > budget_s) {
      v.ok = false;
      v.detail += fmt(" (took %.2f s, limit %.0f s)", secs, budget_s);
    }
    std::printf("%s %d %s: %s [%.2f s]\n", v.ok ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.ok ? 0 : 1;
  };

  const std::vector<ConditionSet> systems = random_systems();
  std::vector<ConditionSet> all_systems = systems;
  for (const ConditionSet& cs : triangle_sweep()) {
    if (is_admissible(cs)) all_systems.push_back(cs);
  }

  report(1, "zeta oracle", 5, zeta_oracle);
  report(2, "pairwise constant k=3", 0, toth);
  report(3, "r-wise reduction", 0, rwise);
  report(4, "admissibility vs search", 60, admissibility_sweep);
  report(5, "exact counts", 0, exact_counts);
  report(6, "empirical convergence", 120, convergence);
  report(7, "cover independence", 0, [&] { return cover_independence(systems); });
  report(8, "polynomial invariants", 0, [&] { return polynomial_invariants(all_systems); });
  report(9, "local factor spot value", 0, local_spot);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
