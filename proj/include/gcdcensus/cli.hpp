#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "gcdcensus/admissibility.hpp"
#include "gcdcensus/counting.hpp"
#include "gcdcensus/density.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/io.hpp"
#include "gcdcensus/model.hpp"
#include "gcdcensus/padic.hpp"

namespace gcdcensus::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInadmissible = 1,
  kInvalidInput = 2,
  kResourceLimit = 3,
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path);
  if (!file) throw ParseError("cannot read " + path);
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

/// "1,3" -> {1,3}; blank -> {}.
inline IndexSet parse_index_list(const std::string& text, int k) {
  IndexSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    const BigInt i = parse_decimal(item.substr(first, last - first + 1));
    if (i < 1 || i > k) throw ParseError("index " + i.str() + " outside 1.." + std::to_string(k));
    out.insert(static_cast<int>(i));
  }
  return out;
}

inline std::vector<BigInt> parse_prime_list(const std::string& text) {
  std::vector<BigInt> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    out.push_back(parse_decimal(item.substr(first, last - first + 1)));
  }
  return out;
}

inline unsigned resolve_threads(unsigned flag) {
  if (const char* env = std::getenv("GCDCENSUS_THREADS"); env != nullptr && *env != '\0') {
    try {
      const BigInt n = parse_decimal(env);
      if (n >= 1 && n <= 4096) return static_cast<unsigned>(n);
    } catch (const ParseError&) {
    }
    throw ParseError(std::string("GCDCENSUS_THREADS must be a positive integer, got \"") + env + "\"");
  }
  if (flag != 0) return flag;
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace detail

/// Runs one CLI invocation. args excludes the program name.
inline int run(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Decide, witness and count gcd-condition systems on k-tuples"};
  app.require_subcommand(1);
  unsigned threads_flag = 0;
  app.add_option("--threads", threads_flag, "worker threads (default: hardware concurrency)");

  std::string file;
  std::string format = "text";
  std::uint64_t prime_bound = 1'000'000;
  std::string cover_text;
  bool trace = false;
  std::uint64_t limit = 0;
  std::string primes_text;

  auto add_file = [&](CLI::App* sub) { sub->add_option("file", file, "condition-set JSON file, or - for stdin")->required(); };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };

  auto* check = app.add_subcommand("check", "decide admissibility");
  add_file(check);
  add_format(check);
  auto* wit = app.add_subcommand("witness", "print the canonical witness tuple");
  add_file(wit);
  add_format(wit);
  auto* cons = app.add_subcommand("constant", "evaluate the density constant");
  add_file(cons);
  add_format(cons);
  cons->add_option("--prime-bound", prime_bound, "largest prime in the Euler product");
  auto* cons_cover = cons->add_option("--cover", cover_text, "cover as comma-separated indices");
  cons->add_flag("--trace", trace, "list local factors at small and relevant primes");
  auto* cnt = app.add_subcommand("count", "count satisfying tuples up to a bound");
  add_file(cnt);
  add_format(cnt);
  cnt->add_option("--limit", limit, "enumeration bound x")->required();
  auto* ver = app.add_subcommand("verify", "compare the empirical density to the constant");
  add_file(ver);
  add_format(ver);
  ver->add_option("--limit", limit, "enumeration bound x")->required();
  ver->add_option("--prime-bound", prime_bound, "largest prime in the Euler product");
  auto* ver_cover = ver->add_option("--cover", cover_text, "cover as comma-separated indices");
  auto* fac = app.add_subcommand("factors", "print per-prime local data");
  add_file(fac);
  add_format(fac);
  fac->add_option("--primes", primes_text, "comma-separated primes (default: primes dividing some gcd)");
  auto* fac_cover = fac->add_option("--cover", cover_text, "cover as comma-separated indices");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    io.err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  const bool json_out = format == "json";
  try {
    const unsigned threads = detail::resolve_threads(threads_flag);
    const ConditionSet cs = io::parse_document(detail::read_input(file, io.in));

    auto chosen_cover = [&](CLI::Option* opt) -> std::optional<IndexSet> {
      if (opt->count() == 0) return std::nullopt;
      return detail::parse_index_list(cover_text, cs.k());
    };

    if (check->parsed()) {
      const AdmissibilityResult r = is_admissible(cs);
      if (json_out) {
        io::json j = {{"admissible", r.admissible}};
        if (r.violation) j["violation"] = io::to_json(*r.violation);
        io.out << j.dump(2) << "\n";
      } else if (r) {
        io.out << "admissible\n";
      } else {
        io.out << "inadmissible: " << r.violation->to_string() << "\n";
      }
      return r ? kOk : kInadmissible;
    }

    if (wit->parsed()) {
      const WitnessTuple w = witness(cs);
      if (json_out) {
        io::json entries = io::json::array();
        for (const BigInt& n : w.entries) entries.push_back(io::gcd_to_json(n));
        io.out << io::json{{"witness", entries}}.dump(2) << "\n";
      } else {
        for (std::size_t i = 0; i < w.entries.size(); ++i) io.out << (i == 0 ? "" : " ") << w.entries[i].str();
        io.out << "\n";
      }
      return kOk;
    }

    if (cons->parsed()) {
      DensityOptions opts;
      opts.cover = chosen_cover(cons_cover);
      opts.prime_cutoff = prime_bound;
      opts.threads = threads;
      opts.trace = trace;
      const DensityResult r = constant(cs, opts);
      io.out << (json_out ? io::to_json(r).dump(2) + "\n" : io::format_text(r));
      return kOk;
    }

    if (cnt->parsed()) {
      CountReport r;
      r.x = limit;
      r.count = count(cs, limit, threads);
      r.density = static_cast<double>(r.count) / std::pow(static_cast<double>(limit), cs.k());
      if (json_out) {
        io::json j = io::to_json(r);
        // No constant is computed here; keep the key set fixed.
        for (const char* key : {"constant", "gap", "normalized_error", "sharp_normalized_error"}) j[key] = nullptr;
        j["log_power"] = cs.k() - 1;
        j["sharp_log_power"] = sharp_log_power(cs);
        io.out << j.dump(2) << "\n";
      } else {
        io.out << io::format_text(r, false);
      }
      return kOk;
    }

    if (ver->parsed()) {
      DensityOptions opts;
      opts.cover = chosen_cover(ver_cover);
      opts.prime_cutoff = prime_bound;
      opts.threads = threads;
      const DensityResult d = constant(cs, opts);
      const CountReport r = empirical_report(cs, limit, d, threads);
      if (json_out) {
        io.out << io::json{{"count", io::to_json(r)}, {"constant", io::to_json(d)}}.dump(2) << "\n";
      } else {
        io.out << io::format_text(r, true);
        io.out << "interval " << io::format_real(d.lower) << " " << io::format_real(d.upper) << "\n";
      }
      return kOk;
    }

    if (fac->parsed()) {
      const std::optional<IndexSet> given = chosen_cover(fac_cover);
      const IndexSet cover = given ? *given : find_cover(cs);
      const bool admissible = static_cast<bool>(is_admissible(cs));
      std::vector<BigInt> primes = primes_text.empty() ? relevant_primes(cs) : detail::parse_prime_list(primes_text);
      io::json list = io::json::array();
      for (const BigInt& p : primes) {
        if (!admissible) {
          // Reduction is only defined for admissible systems; show the raw valuations.
          const Valuations val = valuations(cs, p);
          io::json j = {{"p", p.str()}, {"g", val.g}, {"v", val.v}, {"z_set", z_set(cs, p).indices()}};
          if (json_out) {
            list.push_back(j);
          } else {
            io.out << "p=" << p.str() << "\n  v =";
            for (int x : val.v) io.out << " " << x;
            io.out << "\n  Z_p = " << z_set(cs, p).to_string() << "\n";
          }
          continue;
        }
        const LocalView view = local_view(cs, p, cover);
        const Rational f = local_factor(view);
        if (json_out) {
          io::json j = io::to_json(view);
          j["local_factor"] = to_string(f);
          j["local_factor_value"] = to_double(f);
          list.push_back(j);
        } else {
          io.out << io::format_text(view, cs);
          io.out << "  local_factor = " << to_string(f) << " (" << io::format_real(to_double(f)) << ")\n";
        }
      }
      if (json_out) io.out << io::json{{"cover", cover.indices()}, {"primes", list}}.dump(2) << "\n";
      return admissible ? kOk : kInadmissible;
    }
  } catch (const InadmissibleError& e) {
    io.err << e.what() << "\n";
    return kInadmissible;
  } catch (const ResourceError& e) {
    io.err << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const PrimeBoundError& e) {
    io.err << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const ParseError& e) {
    io.err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DomainError& e) {
    io.err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace gcdcensus::cli
