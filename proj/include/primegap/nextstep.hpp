#pragma once

// Next prime as the smallest d >= 1 for which p + d leaves a nonzero residue
// modulo every prime q <= isqrt(p + d). Runs without the window sieves so it
// can cross-check them.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "primegap/error.hpp"
#include "primegap/gaps.hpp"
#include "primegap/sieve.hpp"

namespace primegap {

// Residues of an anchor prime modulo every prime <= isqrt(ceiling).
class ResidueTable {
 public:
  ResidueTable(std::uint64_t anchor, std::uint64_t ceiling) : anchor_(anchor), ceiling_(ceiling) {
    check_limit(ceiling, "ceiling");
    primes_ = small_primes(isqrt(ceiling));
    residues_.reserve(primes_.size());
    for (const auto q : primes_) residues_.push_back(anchor % q);
  }

  std::uint64_t anchor() const noexcept { return anchor_; }
  std::uint64_t ceiling() const noexcept { return ceiling_; }
  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  const std::vector<std::uint64_t>& residues() const noexcept { return residues_; }

  // True iff anchor + d is nonzero modulo every tabled q with q*q <= anchor + d
  // and q != anchor + d. Requires anchor + d <= ceiling.
  bool clears(std::uint64_t d) const noexcept {
    const std::uint64_t n = anchor_ + d;
    for (std::size_t t = 0; t < primes_.size(); ++t) {
      const std::uint64_t q = primes_[t];
      if (q > n / q) break;
      if (q == n) continue;
      if ((residues_[t] + d % q) % q == 0) return false;
    }
    return true;
  }

  // Smallest tabled prime dividing anchor + d, or 0 if none does.
  std::uint64_t divisor_of(std::uint64_t d) const noexcept {
    const std::uint64_t n = anchor_ + d;
    for (std::size_t t = 0; t < primes_.size(); ++t) {
      const std::uint64_t q = primes_[t];
      if (q >= n) break;
      if ((residues_[t] + d % q) % q == 0) return q;
    }
    return 0;
  }

  // Plain byte sieve; sized by isqrt(ceiling), so small at any sane ceiling.
  static std::vector<std::uint64_t> small_primes(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t q = 2; q <= n; ++q) {
      if (composite[q]) continue;
      out.push_back(q);
      for (std::uint64_t m = q * q; m <= n; m += q) composite[m] = true;
    }
    return out;
  }

 private:
  std::uint64_t anchor_;
  std::uint64_t ceiling_;
  std::vector<std::uint64_t> primes_;
  std::vector<std::uint64_t> residues_;
};

struct NextPrime {
  std::uint64_t d = 0;
  std::uint64_t next = 0;

  friend bool operator==(const NextPrime&, const NextPrime&) = default;
};

// Linear scan d = 1, 2, ... while p + d < ceiling.
inline NextPrime next_prime_by_minimal_d(std::uint64_t p, std::uint64_t ceiling) {
  check_limit(ceiling, "ceiling");
  if (p >= ceiling) throw error(errc::invalid_argument, "p must be below the ceiling");
  if (!is_prime_trial(p)) throw error(errc::invalid_argument, std::to_string(p) + " is not prime");
  const ResidueTable table(p, ceiling);
  for (std::uint64_t d = 1; p + d < ceiling; ++d) {
    if (table.clears(d)) return NextPrime{d, p + d};
  }
  throw error(errc::ceiling_exceeded,
              "no prime in (" + std::to_string(p) + ", " + std::to_string(ceiling) + ")");
}

// Bertrand: some prime lies in (p, 2p).
inline std::uint64_t default_ceiling(std::uint64_t p) noexcept {
  return p > kHardLimit / 2 ? kHardLimit : 2 * p;
}

// count consecutive records from start, each step via next_prime_by_minimal_d.
// k is filled only when start == 2.
inline std::vector<GapRecord> gap_stream_incremental(std::uint64_t start, std::uint64_t count) {
  if (!is_prime_trial(start)) {
    throw error(errc::invalid_argument, std::to_string(start) + " is not prime");
  }
  std::vector<GapRecord> out;
  out.reserve(count);
  std::uint64_t p = start;
  for (std::uint64_t step = 1; step <= count; ++step) {
    const NextPrime np = next_prime_by_minimal_d(p, default_ceiling(p));
    out.push_back({start == 2 ? step : kIndexUnknown, p, np.next, np.d});
    p = np.next;
  }
  return out;
}

}  // namespace primegap
