// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Expected counts were produced by tests/oracle/frozen_values.py
// (plain trial division and an independent byte sieve).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "primegap/cli.hpp"
#include "primegap/gaps.hpp"
#include "primegap/nextstep.hpp"
#include "primegap/relation.hpp"
#include "primegap/sieve.hpp"

namespace {

using namespace primegap;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

struct CliRun {
  int rc;
  std::string out;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "primegap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str()};
}

template <typename F>
errc error_code(F&& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  return errc::invalid_argument;
}

template <typename F>
bool throws_code(F&& fn, errc want) {
  try {
    fn();
  } catch (const error& e) {
    return e.code() == want;
  }
  return false;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Relation sweep over every gap with p_next <= 10^7, all prime factors.
Check relation_sweep() {
  Check c;
  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_cli({"verify", "--limit", "10000000", "--all-factors", "--jobs", std::to_string(cores)});
  const double secs = seconds_since(t0);
  // 664'578 gaps, last prime 9'999'991.
  const std::uint64_t gaps = 664'578;
  const std::uint64_t telescoped = (9'999'991 - 2) - gaps;
  const std::string want = "k_lo,k_hi,relation_checks,residue_checks,violations\n1," +
                           std::to_string(gaps) + "," + std::to_string(telescoped) + ",0,0\n";
  c.expect(r.rc == 0, "exit status " + std::to_string(r.rc));
  c.expect(r.out == want, "report was: " + r.out);
  c.expect(telescoped == 9'335'411, "telescoping constant");
  c.expect(secs <= 60.0, "took " + std::to_string(secs) + " s > 60 s");
  c.detail += (c.detail.empty() ? "" : "; ") + std::to_string(secs) + " s on " + std::to_string(cores) + " core(s)";
  return c;
}

// 2. For all k <= 1000 and every h <= k, (p_k + d_k) mod p_h != 0.
Check exhaustive_residues() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  VerifyOptions opt;
  opt.exhaustive_residues = true;
  const auto rep = verify_range(1, 1000, opt);
  c.expect(rep.clean(), "violations recorded");
  c.expect(rep.residue_checks == 500'500, "residue checks " + std::to_string(rep.residue_checks));

  // Same quantifier through the single-check operation.
  const auto gaps = gaps_by_index(1, 1000);
  std::uint64_t literal = 0;
  for (const auto& g : gaps) {
    for (std::uint64_t h = 1; h <= g.k; ++h) {
      const auto res = check_nonzero_residue(g, h, gaps[h - 1].p_k);
      c.expect(res.r != 0 && res.r < res.p_h, "residue out of range at k=" + std::to_string(g.k));
      ++literal;
    }
  }
  c.expect(literal == 500'500, "literal checks " + std::to_string(literal));
  const double secs = seconds_since(t0);
  c.expect(secs < 5.0, "took " + std::to_string(secs) + " s");
  c.detail += (c.detail.empty() ? "" : "; ") + std::to_string(secs) + " s";
  return c;
}

// 3. Sieve vs trial division to 10^5; canonical witnesses vs trial lpf for k <= 2000.
Check oracle_equivalence() {
  Check c;
  const auto base = primes_upto(isqrt(100'000));
  const auto win = sieve_range(0, 100'001, base);
  for (std::uint64_t n = 0; n <= 100'000; ++n) {
    if (win.is_prime(n) != is_prime_trial(n)) c.expect(false, "primality differs at " + std::to_string(n));
  }
  std::uint64_t witnesses = 0;
  for (const auto& g : gaps_by_index(1, 2000)) {
    const auto cert = certify_minimality(g);
    for (const auto& w : cert.witnesses) {
      ++witnesses;
      if (w.p_j != least_factor_trial(w.n)) c.expect(false, "witness differs at n=" + std::to_string(w.n));
    }
  }
  // p_2001 = 17'393; sum of (d_k - 1) over k <= 2000.
  c.expect(witnesses == (17'393 - 2) - 2000, "witness count " + std::to_string(witnesses));
  return c;
}

// 4. Minimal-d next prime vs sieve successor for every prime <= 10^6.
Check characterization_as_algorithm() {
  Check c;
  const auto sieved = gap_stream(1'000'100);
  std::uint64_t compared = 0;
  for (const auto& g : sieved) {
    if (g.p_k > 1'000'000) break;
    const auto np = next_prime_by_minimal_d(g.p_k, default_ceiling(g.p_k));
    if (np.next != g.p_next || np.d != g.d_k) c.expect(false, "successor differs after " + std::to_string(g.p_k));
    ++compared;
  }
  c.expect(compared == 78'498, "compared " + std::to_string(compared) + " primes");
  const auto stream = gap_stream(1'000'000);
  c.expect(gap_stream_incremental(2, stream.size()) == stream, "incremental stream differs");
  return c;
}

// 5. Known prime counts.
Check known_counts() {
  Check c;
  c.expect(primes_upto(10'000).size() == 1229, "pi(10^4)");
  c.expect(primes_upto(1'000'000).size() == 78'498, "pi(10^6)");
  return c;
}

// 6. CLI output byte-identical for --jobs 1 and --jobs 8 over k <= 10^5.
Check determinism() {
  Check c;
  for (const char* mode : {"--all-factors", ""}) {
    std::vector<std::string> args{"verify", "--kmax", "100000"};
    if (*mode) args.emplace_back(mode);
    auto one = args;
    one.insert(one.end(), {"--jobs", "1"});
    auto eight = args;
    eight.insert(eight.end(), {"--jobs", "8"});
    const auto a = run_cli(one);
    const auto b = run_cli(eight);
    c.expect(a.rc == 0 && b.rc == 0, "verify exit status");
    c.expect(a.out == b.out, std::string("verify output differs ") + mode);
  }
  const std::string limit = std::to_string(gap_at(100'000).p_next);
  const auto g1 = run_cli({"gaps", "--limit", limit, "--jobs", "1"});
  const auto g8 = run_cli({"gaps", "--limit", limit, "--jobs", "8"});
  c.expect(g1.rc == 0 && g1.out == g8.out, "gaps output differs");
  c.expect(std::count(g1.out.begin(), g1.out.end(), '\n') == 100'001, "gaps row count");
  return c;
}

// 7. Edge cases around k = 1 and index/offset errors.
Check edge_cases() {
  Check c;
  const auto cert = certify_minimality(1);
  c.expect(cert.witnesses.empty() && cert.attestation.n == 3, "k=1 certificate");
  c.expect(check_nonzero_residue(1, 1) == NonzeroResidue{1, 1, 2, 1}, "k=1 residue");

  VerifyOptions ex;
  ex.exhaustive_residues = true;
  const auto rep = verify_range(1, 1, ex);
  c.expect(rep.relation_checks == 0 && rep.residue_checks == 1 && rep.clean(), "verify k=1");
  c.expect(run_cli({"verify", "--kmax", "1", "--exhaustive"}).out ==
               "k_lo,k_hi,relation_checks,residue_checks,violations\n1,1,0,1,0\n",
           "cli verify k=1");

  c.expect(throws_code([] { find_witness(1, 1); }, errc::offset_out_of_range), "find_witness(1,1)");
  c.expect(throws_code([] { all_witnesses(1, 1); }, errc::offset_out_of_range), "all_witnesses(1,1)");
  c.expect(throws_code([] { find_witness(9, 0); }, errc::offset_out_of_range), "find_witness(9,0)");
  c.expect(throws_code([] { find_witness(9, 6); }, errc::offset_out_of_range), "find_witness(9,6)");
  c.expect(throws_code([] { check_nonzero_residue(9, 0); }, errc::index_out_of_range), "residue h=0");
  c.expect(throws_code([] { check_nonzero_residue(9, 10); }, errc::index_out_of_range), "residue h>k");
  c.expect(throws_code([] { check_nonzero_residue(1, 2); }, errc::index_out_of_range), "residue k=1,h=2");
  c.expect(run_cli({"witness", "--k", "1", "--i", "1"}).rc == cli::kExitUsage, "cli witness k=1 i=1");
  c.expect(error_code([] { verify_range(0, 1); }) == errc::index_out_of_range, "verify k=0");
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 relation sweep, p_next <= 1e7, all factors", relation_sweep},
      {"2 exhaustive residues, k <= 1000", exhaustive_residues},
      {"3 oracle equivalence (sieve <= 1e5, witnesses k <= 2000)", oracle_equivalence},
      {"4 minimal-d next prime vs sieve, p <= 1e6", characterization_as_algorithm},
      {"5 known counts pi(1e4)=1229, pi(1e6)=78498", known_counts},
      {"6 determinism --jobs 1 vs 8, k <= 1e5", determinism},
      {"7 edge cases (k = 1, range errors)", edge_cases},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::cout << (c.ok ? "[PASS] " : "[FAIL] ") << cr.name;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << std::endl;
    failed += c.ok ? 0 : 1;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
