#pragma once

// Witnesses for the composites strictly inside a prime gap, and the checks
// tying them to the gap width:
//
//   * every p_k + i (1 <= i < d_k) has a prime divisor p_j <= p_k;
//   * p_k + d_k leaves a nonzero residue modulo every p_h, h <= k;
//   * hence d_k mod p_j != i mod p_j for each such divisor.
//
// Failures inside verify_range are recorded as violations, never thrown.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "primegap/error.hpp"
#include "primegap/gaps.hpp"
#include "primegap/sieve.hpp"

namespace primegap {

struct Witness {
  std::uint64_t k = 0;
  std::uint64_t i = 0;
  std::uint64_t n = 0;  // p_k + i
  std::uint64_t p_j = 0;
  std::uint64_t m = 0;  // n / p_j

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct NonzeroResidue {
  std::uint64_t k = 0;
  std::uint64_t h = 0;
  std::uint64_t p_h = 0;
  std::uint64_t r = 0;  // (p_k + d_k) mod p_h, never 0

  friend bool operator==(const NonzeroResidue&, const NonzeroResidue&) = default;
};

// holds <=> lhs != rhs <=> p_j does not divide d_k - i.
struct RelationCheck {
  std::uint64_t k = 0;
  std::uint64_t i = 0;
  std::uint64_t p_j = 0;
  std::uint64_t lhs = 0;  // d_k mod p_j
  std::uint64_t rhs = 0;  // i mod p_j
  bool holds = false;

  friend bool operator==(const RelationCheck&, const RelationCheck&) = default;
};

// p_k + d_k has no prime factor <= sqrt_bound = isqrt(n).
struct PrimalityAttestation {
  std::uint64_t n = 0;
  std::uint64_t sqrt_bound = 0;
  std::uint64_t divisors_tested = 0;

  friend bool operator==(const PrimalityAttestation&, const PrimalityAttestation&) = default;
};

// One canonical witness per offset i = 1..d_k-1, in order; witnesses[i-1]
// belongs to offset i. The divisor generally changes with i.
struct MinimalityCertificate {
  GapRecord gap;
  std::vector<Witness> witnesses;
  PrimalityAttestation attestation;
};

enum class WitnessMode { canonical, all_factors };

enum class ViolationKind {
  relation,            // p_j divides d_k - i
  no_witness,          // p_k + i is prime
  witness_bound,       // witness exceeds p_k
  composite_endpoint,  // p_k + d_k has a factor <= its isqrt
  zero_residue,        // p_h divides p_k + d_k for some h <= k
};

inline const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::relation: return "relation";
    case ViolationKind::no_witness: return "no-witness";
    case ViolationKind::witness_bound: return "witness-bound";
    case ViolationKind::composite_endpoint: return "composite-endpoint";
    case ViolationKind::zero_residue: return "zero-residue";
  }
  return "unknown";
}

// For composite_endpoint, i = d_k; for zero_residue, i = 0 and p_j = p_h.
struct Violation {
  std::uint64_t k = 0;
  std::uint64_t i = 0;
  std::uint64_t p_j = 0;
  ViolationKind kind = ViolationKind::relation;

  friend bool operator==(const Violation&, const Violation&) = default;
  friend bool operator<(const Violation& a, const Violation& b) {
    return std::tie(a.k, a.i, a.p_j, a.kind) < std::tie(b.k, b.i, b.p_j, b.kind);
  }
};

struct VerificationReport {
  std::uint64_t k_lo = 0;
  std::uint64_t k_hi = 0;
  // One per intermediate p_k + i, whatever the witness mode.
  std::uint64_t relation_checks = 0;
  // One per (intermediate, witness) pair actually compared.
  std::uint64_t factor_checks = 0;
  // One per (k, h) pair in exhaustive mode, zero otherwise.
  std::uint64_t residue_checks = 0;
  std::vector<Violation> violations;
  std::chrono::duration<double> elapsed{0};

  bool clean() const noexcept { return violations.empty(); }

  // Equality of every field except elapsed.
  bool same_outcome(const VerificationReport& o) const {
    return k_lo == o.k_lo && k_hi == o.k_hi && relation_checks == o.relation_checks &&
           factor_checks == o.factor_checks && residue_checks == o.residue_checks &&
           violations == o.violations;
  }
};

// Combines reports over disjoint k-ranges. Associative and commutative.
inline VerificationReport merge(const VerificationReport& a, const VerificationReport& b) {
  VerificationReport out;
  out.k_lo = std::min(a.k_lo, b.k_lo);
  out.k_hi = std::max(a.k_hi, b.k_hi);
  out.relation_checks = a.relation_checks + b.relation_checks;
  out.factor_checks = a.factor_checks + b.factor_checks;
  out.residue_checks = a.residue_checks + b.residue_checks;
  out.violations = a.violations;
  out.violations.insert(out.violations.end(), b.violations.begin(), b.violations.end());
  std::sort(out.violations.begin(), out.violations.end());
  out.elapsed = a.elapsed + b.elapsed;
  return out;
}

namespace detail {

inline void require_offset(const GapRecord& gap, std::uint64_t i) {
  if (i == 0 || i >= gap.d_k) {
    throw error(errc::offset_out_of_range,
                "offset " + std::to_string(i) + " outside 1.." +
                    (gap.d_k > 1 ? std::to_string(gap.d_k - 1) : std::string("(empty)")) +
                    " for k=" + std::to_string(gap.k));
  }
}

inline Witness witness_for(const GapRecord& gap, std::uint64_t i, std::uint64_t q) {
  const std::uint64_t n = gap.p_k + i;
  return Witness{gap.k, i, n, q, n / q};
}

}  // namespace detail

inline Witness find_witness(const GapRecord& gap, std::uint64_t i) {
  detail::require_offset(gap, i);
  const std::uint64_t n = gap.p_k + i;
  const auto base = primes_upto(isqrt(n));
  const std::uint64_t q = lpf_range(n, n + 1, base).lpf(n);
  if (q == n) {
    throw error(errc::certification_failure, std::to_string(n) + " is prime inside the gap");
  }
  return detail::witness_for(gap, i, q);
}

inline Witness find_witness(std::uint64_t k, std::uint64_t i) { return find_witness(gap_at(k), i); }

// One witness per distinct prime factor of p_k + i, ascending.
inline std::vector<Witness> all_witnesses(const GapRecord& gap, std::uint64_t i) {
  detail::require_offset(gap, i);
  const std::uint64_t n = gap.p_k + i;
  const auto base = primes_upto(isqrt(n));
  const auto factors = factor_range(n, n + 1, base).factors(n);
  if (factors.size() == 1 && factors.front() == n) {
    throw error(errc::certification_failure, std::to_string(n) + " is prime inside the gap");
  }
  std::vector<Witness> out;
  out.reserve(factors.size());
  for (const auto q : factors) out.push_back(detail::witness_for(gap, i, q));
  return out;
}

inline std::vector<Witness> all_witnesses(std::uint64_t k, std::uint64_t i) {
  return all_witnesses(gap_at(k), i);
}

// p_h is the h-th prime; the caller vouches for the pairing.
inline NonzeroResidue check_nonzero_residue(const GapRecord& gap, std::uint64_t h,
                                            std::uint64_t p_h) {
  if (h < 1 || h > gap.k) {
    throw error(errc::index_out_of_range,
                "h=" + std::to_string(h) + " outside 1.." + std::to_string(gap.k));
  }
  if (p_h < 2) throw error(errc::invalid_argument, "p_h must be prime");
  const std::uint64_t r = gap.p_next % p_h;
  if (r == 0) {
    throw error(errc::residue_violation, std::to_string(p_h) + " divides " +
                                             std::to_string(gap.p_next) + " (k=" +
                                             std::to_string(gap.k) + ")");
  }
  return NonzeroResidue{gap.k, h, p_h, r};
}

inline NonzeroResidue check_nonzero_residue(std::uint64_t k, std::uint64_t h) {
  if (k < 1) throw error(errc::index_out_of_range, "prime index must be >= 1");
  if (h < 1 || h > k) {
    throw error(errc::index_out_of_range,
                "h=" + std::to_string(h) + " outside 1.." + std::to_string(k));
  }
  return check_nonzero_residue(gap_at(k), h, gap_at(h).p_k);
}

inline RelationCheck check_relation(const GapRecord& gap, std::uint64_t i, const Witness& w) {
  detail::require_offset(gap, i);
  const std::uint64_t n = gap.p_k + i;
  if (w.k != gap.k || w.i != i || w.n != n || w.p_j < 2 || n % w.p_j != 0 || n / w.p_j != w.m) {
    throw error(errc::witness_mismatch, "witness does not satisfy p_j * m = p_k + i");
  }
  RelationCheck rc{gap.k, i, w.p_j, gap.d_k % w.p_j, i % w.p_j, false};
  rc.holds = rc.lhs != rc.rhs;
  return rc;
}

inline RelationCheck check_relation(std::uint64_t k, std::uint64_t i, const Witness& w) {
  return check_relation(gap_at(k), i, w);
}

inline MinimalityCertificate certify_minimality(const GapRecord& gap) {
  if (gap.p_next <= gap.p_k) throw error(errc::invalid_argument, "malformed gap record");
  const auto base = primes_upto(isqrt(gap.p_next));
  const LpfWindow win = lpf_range(gap.p_k + 1, gap.p_next + 1, base);

  MinimalityCertificate cert{gap, {}, {}};
  cert.witnesses.reserve(gap.d_k - 1);
  for (std::uint64_t i = 1; i < gap.d_k; ++i) {
    const std::uint64_t n = gap.p_k + i;
    const std::uint64_t q = win.lpf(n);
    if (q == n) {
      throw error(errc::certification_failure, std::to_string(n) + " is prime inside the gap");
    }
    cert.witnesses.push_back(detail::witness_for(gap, i, q));
  }
  if (!win.is_prime(gap.p_next)) {
    throw error(errc::certification_failure, std::to_string(gap.p_next) + " is composite");
  }
  const std::uint64_t bound = isqrt(gap.p_next);
  cert.attestation = PrimalityAttestation{
      gap.p_next, bound,
      static_cast<std::uint64_t>(std::upper_bound(base.begin(), base.end(), bound) - base.begin())};
  return cert;
}

inline MinimalityCertificate certify_minimality(std::uint64_t k) {
  if (k < 1) throw error(errc::index_out_of_range, "prime index must be >= 1");
  return certify_minimality(gap_at(k));
}

struct VerifyOptions {
  WitnessMode mode = WitnessMode::canonical;
  bool exhaustive_residues = false;
  std::uint64_t exhaustive_cap = 1000;
  unsigned jobs = 1;
  // Integers per worker window.
  std::uint64_t segment = std::uint64_t{1} << 18;
};

namespace detail {

inline void verify_intermediate(const GapRecord& gap, std::uint64_t i, std::uint64_t q,
                                VerificationReport& rep) {
  const Witness w = witness_for(gap, i, q);
  if (w.p_j > gap.p_k) rep.violations.push_back({gap.k, i, q, ViolationKind::witness_bound});
  if (!check_relation(gap, i, w).holds) {
    rep.violations.push_back({gap.k, i, q, ViolationKind::relation});
  }
  ++rep.factor_checks;
}

template <typename Window>
void verify_gaps(std::span<const GapRecord> gaps, const Window& win, const VerifyOptions& opt,
                 std::span<const std::uint64_t> first_primes, VerificationReport& rep) {
  for (const GapRecord& gap : gaps) {
    for (std::uint64_t i = 1; i < gap.d_k; ++i) {
      const std::uint64_t n = gap.p_k + i;
      ++rep.relation_checks;
      if constexpr (std::is_same_v<Window, LpfWindow>) {
        const std::uint64_t q = win.lpf(n);
        if (q == n) {
          rep.violations.push_back({gap.k, i, n, ViolationKind::no_witness});
        } else {
          verify_intermediate(gap, i, q, rep);
        }
      } else {
        bool prime = false;
        win.for_each_factor(n, [&](std::uint64_t q) {
          if (q == n) {
            prime = true;
          } else {
            verify_intermediate(gap, i, q, rep);
          }
        });
        if (prime) rep.violations.push_back({gap.k, i, n, ViolationKind::no_witness});
      }
    }
    if (win.lpf(gap.p_next) != gap.p_next) {
      rep.violations.push_back({gap.k, gap.d_k, win.lpf(gap.p_next), ViolationKind::composite_endpoint});
    }
    if (opt.exhaustive_residues) {
      for (std::uint64_t h = 1; h <= gap.k; ++h) {
        ++rep.residue_checks;
        const std::uint64_t p_h = first_primes[h - 1];
        if (gap.p_next % p_h == 0) rep.violations.push_back({gap.k, 0, p_h, ViolationKind::zero_residue});
      }
    }
  }
}

inline VerificationReport verify_chunk(std::span<const GapRecord> gaps,
                                       std::span<const std::uint64_t> base,
                                       std::span<const std::uint64_t> first_primes,
                                       const VerifyOptions& opt) {
  VerificationReport rep;
  rep.k_lo = gaps.front().k;
  rep.k_hi = gaps.back().k;
  const std::uint64_t lo = gaps.front().p_k;
  const std::uint64_t hi = gaps.back().p_next + 1;
  if (opt.mode == WitnessMode::canonical) {
    verify_gaps(gaps, lpf_range(lo, hi, base), opt, first_primes, rep);
  } else {
    verify_gaps(gaps, factor_range(lo, hi, base), opt, first_primes, rep);
  }
  std::sort(rep.violations.begin(), rep.violations.end());
  return rep;
}

}  // namespace detail

// Checks every gap k_lo..k_hi. Work is split into contiguous k-chunks that
// workers claim in any order; chunk reports are merged in k order, so the
// result (elapsed aside) does not depend on the worker count.
inline VerificationReport verify_range(std::uint64_t k_lo, std::uint64_t k_hi,
                                       const VerifyOptions& opt = {}) {
  if (k_lo < 1 || k_hi < k_lo) throw error(errc::index_out_of_range, "need 1 <= k_lo <= k_hi");
  if (opt.exhaustive_residues && k_hi > opt.exhaustive_cap) {
    throw error(errc::limit_exceeded, "exhaustive residue checks capped at k=" +
                                          std::to_string(opt.exhaustive_cap));
  }
  if (opt.jobs < 1) throw error(errc::invalid_argument, "jobs must be >= 1");
  if (opt.segment < 1) throw error(errc::invalid_argument, "segment size must be positive");

  const auto start = std::chrono::steady_clock::now();
  const std::vector<GapRecord> gaps = gaps_by_index(k_lo, k_hi);
  const std::vector<std::uint64_t> base = primes_upto(isqrt(gaps.back().p_next));
  std::vector<std::uint64_t> first_primes;
  if (opt.exhaustive_residues) {
    first_primes = primes_upto(nth_prime_upper_bound(k_hi));
    first_primes.resize(k_hi);
  }

  // [begin, end) index ranges into gaps, each spanning about opt.segment integers.
  std::vector<std::pair<std::size_t, std::size_t>> chunks;
  for (std::size_t b = 0; b < gaps.size();) {
    std::size_t e = b + 1;
    while (e < gaps.size() && gaps[e].p_next - gaps[b].p_k < opt.segment) ++e;
    chunks.emplace_back(b, e);
    b = e;
  }

  std::vector<VerificationReport> parts(chunks.size());
  std::vector<std::exception_ptr> failures(chunks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c; (c = next.fetch_add(1)) < chunks.size();) {
      const auto [b, e] = chunks[c];
      try {
        parts[c] = detail::verify_chunk(std::span(gaps).subspan(b, e - b), base, first_primes, opt);
      } catch (...) {
        failures[c] = std::current_exception();
      }
    }
  };
  {
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(opt.jobs, chunks.size()));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  VerificationReport out = parts.front();
  for (std::size_t c = 1; c < parts.size(); ++c) out = merge(out, parts[c]);
  out.elapsed = std::chrono::steady_clock::now() - start;
  return out;
}

}  // namespace primegap
