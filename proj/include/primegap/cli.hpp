#pragma once

// Command-line front end: argument grammar, config validation and dispatch.
//
// Exit status: 0 success, 1 verification violations, 2 usage/config error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "primegap/emit.hpp"
#include "primegap/error.hpp"
#include "primegap/gaps.hpp"
#include "primegap/nextstep.hpp"
#include "primegap/relation.hpp"
#include "primegap/sieve.hpp"

namespace primegap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitUsage = 2;

enum class Command { primes, gaps, maximal, witness, verify, next };

struct RunConfig {
  Command command = Command::gaps;
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> kmin;
  std::optional<std::uint64_t> kmax;
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> i;
  std::optional<std::uint64_t> after;
  std::optional<std::uint64_t> ceiling;
  WitnessMode witness_mode = WitnessMode::canonical;
  bool exhaustive = false;
  std::uint64_t exhaustive_cap = 1000;
  Format format = Format::csv;
  std::string out;  // empty: standard output
  unsigned jobs = 1;
};

inline void validate(const RunConfig& cfg) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw error(errc::invalid_argument, msg);
  };
  need(cfg.jobs >= 1, "--jobs must be >= 1");
  for (const auto& v : {cfg.limit, cfg.kmin, cfg.kmax, cfg.k, cfg.i, cfg.after, cfg.ceiling}) {
    if (v) check_limit(*v, "argument");
  }
  switch (cfg.command) {
    case Command::primes:
      need(cfg.limit.has_value(), "primes requires --limit");
      break;
    case Command::gaps:
      need(cfg.limit && *cfg.limit >= 2, "gaps requires --limit >= 2");
      break;
    case Command::maximal:
      need(cfg.limit && *cfg.limit >= 3, "maximal requires --limit >= 3");
      break;
    case Command::witness:
      need(cfg.k && *cfg.k >= 1, "witness requires --k >= 1");
      break;
    case Command::verify:
      need(cfg.kmax.has_value() != cfg.limit.has_value(), "verify takes exactly one of --kmax, --limit");
      need(!cfg.limit || *cfg.limit >= 3, "verify --limit must be >= 3");
      need(!cfg.kmax || *cfg.kmax >= 1, "verify --kmax must be >= 1");
      need(!cfg.kmin || *cfg.kmin >= 1, "verify --kmin must be >= 1");
      break;
    case Command::next:
      need(cfg.after.has_value(), "next requires --after");
      break;
  }
}

namespace detail {

inline int run_primes(const RunConfig& cfg, std::ostream& os) {
  RecordWriter<PrimeRow> w(os, cfg.format);
  const std::uint64_t n = *cfg.limit;
  if (n < 2) return kExitOk;
  const auto base = primes_upto(isqrt(n));
  std::uint64_t k = 0;
  for (std::uint64_t lo = 0; lo <= n;) {
    const std::uint64_t hi = (n - lo < kDefaultSegmentSize) ? n + 1 : lo + kDefaultSegmentSize;
    sieve_range(lo, hi, base).for_each_prime([&](std::uint64_t p) { w.write({++k, p}); });
    lo = hi;
  }
  return kExitOk;
}

inline int run_gaps(const RunConfig& cfg, std::ostream& os) {
  RecordWriter<GapRecord> w(os, cfg.format);
  GapStream s(*cfg.limit);
  while (auto rec = s.next()) w.write(*rec);
  return kExitOk;
}

inline int run_maximal(const RunConfig& cfg, std::ostream& os) {
  const auto recs = maximal_gaps(*cfg.limit);
  emit<GapRecord>(os, recs, cfg.format);
  return kExitOk;
}

inline int run_witness(const RunConfig& cfg, std::ostream& os) {
  const GapRecord gap = gap_at(*cfg.k);
  std::vector<Witness> rows;
  if (cfg.i) {
    if (cfg.witness_mode == WitnessMode::all_factors) {
      rows = all_witnesses(gap, *cfg.i);
    } else {
      rows.push_back(find_witness(gap, *cfg.i));
    }
  } else if (cfg.witness_mode == WitnessMode::all_factors) {
    certify_minimality(gap);
    for (std::uint64_t i = 1; i < gap.d_k; ++i) {
      const auto ws = all_witnesses(gap, i);
      rows.insert(rows.end(), ws.begin(), ws.end());
    }
  } else {
    rows = certify_minimality(gap).witnesses;
  }
  emit<Witness>(os, rows, cfg.format);
  return kExitOk;
}

inline int run_verify(const RunConfig& cfg, std::ostream& os) {
  const std::uint64_t k_lo = cfg.kmin.value_or(1);
  const std::uint64_t k_hi = cfg.kmax ? *cfg.kmax : prime_count(*cfg.limit) - 1;
  VerifyOptions opt;
  opt.mode = cfg.witness_mode;
  opt.exhaustive_residues = cfg.exhaustive;
  opt.exhaustive_cap = cfg.exhaustive_cap;
  opt.jobs = cfg.jobs;
  const VerificationReport rep = verify_range(k_lo, k_hi, opt);
  emit_report(os, rep, cfg.format);
  return rep.clean() ? kExitOk : kExitViolations;
}

inline int run_next(const RunConfig& cfg, std::ostream& os) {
  const std::uint64_t p = *cfg.after;
  const NextPrime np = next_prime_by_minimal_d(p, cfg.ceiling.value_or(default_ceiling(p)));
  RecordWriter<NextRow> w(os, cfg.format);
  w.write({p, np.d, np.next});
  return kExitOk;
}

inline int dispatch(const RunConfig& cfg, std::ostream& os) {
  switch (cfg.command) {
    case Command::primes: return run_primes(cfg, os);
    case Command::gaps: return run_gaps(cfg, os);
    case Command::maximal: return run_maximal(cfg, os);
    case Command::witness: return run_witness(cfg, os);
    case Command::verify: return run_verify(cfg, os);
    case Command::next: return run_next(cfg, os);
  }
  return kExitUsage;
}

}  // namespace detail

// Writes to cfg.out when set, otherwise to `out`. Diagnostics go to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    if (cfg.out.empty()) {
      const int rc = detail::dispatch(cfg, out);
      out.flush();
      return rc;
    }
    std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write " << cfg.out << '\n';
      return kExitUsage;
    }
    const int rc = detail::dispatch(cfg, file);
    file.close();
    if (!file) {
      err << "error: failed writing " << cfg.out << '\n';
      return kExitUsage;
    }
    return rc;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    const bool finding = e.code() == errc::certification_failure || e.code() == errc::residue_violation;
    return finding ? kExitViolations : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

// Returns the parsed config, or the exit status when parsing ends the run
// (--help, or a usage error already reported to `err`).
inline std::variant<RunConfig, int> parse_args(int argc, const char* const* argv, std::ostream& out,
                                               std::ostream& err) {
  CLI::App app{"Prime gap enumeration, witnesses and relation verification"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "csv";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--out", cfg.out, "Output path (default: standard output)");
  app.add_option("--jobs", cfg.jobs, "Worker threads for verify")->check(CLI::PositiveNumber);

  auto u64 = [](CLI::App* sub, const char* name, std::optional<std::uint64_t>& slot, const char* help) {
    return sub->add_option_function<std::string>(
        name,
        [&slot, name](const std::string& text) {
          if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
            throw CLI::ValidationError(name, "expected an unsigned decimal integer");
          }
          try {
            slot = std::stoull(text);
          } catch (const std::out_of_range&) {
            throw CLI::ValidationError(name, "value out of range");
          }
        },
        help);
  };

  auto* primes = app.add_subcommand("primes", "List primes <= limit");
  u64(primes, "--limit", cfg.limit, "Upper bound")->required();

  auto* gaps = app.add_subcommand("gaps", "List gaps with both endpoints <= limit");
  u64(gaps, "--limit", cfg.limit, "Upper bound")->required();

  auto* maximal = app.add_subcommand("maximal", "List record-setting gaps up to limit");
  u64(maximal, "--limit", cfg.limit, "Upper bound")->required();

  bool all_factors = false;
  auto* witness = app.add_subcommand("witness", "Witness divisors inside gap k");
  u64(witness, "--k", cfg.k, "Prime index")->required();
  u64(witness, "--i", cfg.i, "Offset inside the gap (default: every offset)");
  witness->add_flag("--all-factors", all_factors, "Every prime factor, not only the least");

  auto* verify = app.add_subcommand("verify", "Verify the gap relations over a k-range");
  auto* kmax = u64(verify, "--kmax", cfg.kmax, "Last prime index");
  auto* vlimit = u64(verify, "--limit", cfg.limit, "All gaps with p_next <= limit");
  kmax->excludes(vlimit);
  u64(verify, "--kmin", cfg.kmin, "First prime index (default 1)");
  verify->add_flag("--all-factors", all_factors, "Check every prime factor of each intermediate");
  verify->add_flag("--exhaustive", cfg.exhaustive, "Check residues modulo every p_h, h <= k");
  verify->add_option("--exhaustive-cap", cfg.exhaustive_cap, "Largest k allowed with --exhaustive");

  auto* next = app.add_subcommand("next", "Next prime after P by minimal-d search");
  u64(next, "--after", cfg.after, "A prime")->required();
  u64(next, "--ceiling", cfg.ceiling, "Search bound (default 2P)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  cfg.format = format == "jsonl" ? Format::jsonl : Format::csv;
  cfg.witness_mode = all_factors ? WitnessMode::all_factors : WitnessMode::canonical;
  if (primes->parsed()) cfg.command = Command::primes;
  if (gaps->parsed()) cfg.command = Command::gaps;
  if (maximal->parsed()) cfg.command = Command::maximal;
  if (witness->parsed()) cfg.command = Command::witness;
  if (verify->parsed()) cfg.command = Command::verify;
  if (next->parsed()) cfg.command = Command::next;
  return cfg;
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse_args(argc, argv, out, err);
  if (const int* rc = std::get_if<int>(&parsed)) return *rc;
  return run(std::get<RunConfig>(parsed), out, err);
}

}  // namespace primegap::cli
