#pragma once

// Consecutive-prime gap records, streamed segment by segment.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primegap/error.hpp"
#include "primegap/sieve.hpp"

namespace primegap {

// k == 0 marks a record whose prime index is not known.
inline constexpr std::uint64_t kIndexUnknown = 0;

struct GapRecord {
  std::uint64_t k = kIndexUnknown;
  std::uint64_t p_k = 0;
  std::uint64_t p_next = 0;
  std::uint64_t d_k = 0;

  friend bool operator==(const GapRecord&, const GapRecord&) = default;
};

// Pull-based producer of GapRecords with p_next <= limit. Holds one sieve
// segment plus the base primes up to isqrt(limit).
class GapStream {
 public:
  explicit GapStream(std::uint64_t limit, std::uint64_t segment = kDefaultSegmentSize)
      : limit_(limit), segment_(segment) {
    check_limit(limit, "gap limit");
    if (segment == 0) throw error(errc::invalid_argument, "segment size must be positive");
    base_ = primes_upto(isqrt(limit));
    prev_ = next_prime();
  }

  std::optional<GapRecord> next() {
    if (prev_ == 0) return std::nullopt;
    const std::uint64_t p = next_prime();
    if (p == 0) {
      prev_ = 0;
      return std::nullopt;
    }
    GapRecord rec{++k_, prev_, p, p - prev_};
    prev_ = p;
    return rec;
  }

 private:
  // Next prime <= limit, or 0 once exhausted.
  std::uint64_t next_prime() {
    while (true) {
      if (window_) {
        if (const std::uint64_t p = window_->next_prime_from(cursor_); p != 0) {
          cursor_ = p + 1;
          return p;
        }
      }
      const std::uint64_t lo = window_ ? window_->hi() : 0;
      if (lo > limit_) return 0;
      const std::uint64_t hi = (limit_ - lo < segment_) ? limit_ + 1 : lo + segment_;
      window_.emplace(sieve_range(lo, hi, base_));
      cursor_ = lo;
    }
  }

  std::uint64_t limit_;
  std::uint64_t segment_;
  std::vector<std::uint64_t> base_;
  std::optional<PrimalityWindow> window_;
  std::uint64_t cursor_ = 0;
  std::uint64_t prev_ = 0;
  std::uint64_t k_ = 0;
};

inline std::vector<GapRecord> gap_stream(std::uint64_t limit,
                                         std::uint64_t segment = kDefaultSegmentSize) {
  if (limit < 2) throw error(errc::invalid_argument, "gap limit must be >= 2");
  std::vector<GapRecord> out;
  GapStream s(limit, segment);
  while (auto rec = s.next()) out.push_back(*rec);
  return out;
}

// Records whose width strictly exceeds every earlier width.
inline std::vector<GapRecord> maximal_gaps(std::uint64_t limit,
                                           std::uint64_t segment = kDefaultSegmentSize) {
  if (limit < 3) throw error(errc::invalid_argument, "maximal gap limit must be >= 3");
  std::vector<GapRecord> out;
  GapStream s(limit, segment);
  std::uint64_t best = 0;
  while (auto rec = s.next()) {
    if (rec->d_k > best) {
      best = rec->d_k;
      out.push_back(*rec);
    }
  }
  return out;
}

// Upper bound for the n-th prime (n >= 1): n(ln n + ln ln n) holds for n >= 6.
// Only sizes a sieve; never used in a divisibility decision.
inline std::uint64_t nth_prime_upper_bound(std::uint64_t n) {
  if (n < 6) return 13;
  const double x = static_cast<double>(n);
  const double bound = x * (std::log(x) + std::log(std::log(x)));
  if (bound >= static_cast<double>(kHardLimit) / 2) return kHardLimit;
  return static_cast<std::uint64_t>(bound) + 16;
}

// Records for prime indices k_lo..k_hi inclusive.
inline std::vector<GapRecord> gaps_by_index(std::uint64_t k_lo, std::uint64_t k_hi,
                                            std::uint64_t segment = kDefaultSegmentSize) {
  if (k_lo < 1 || k_hi < k_lo) {
    throw error(errc::index_out_of_range, "need 1 <= k_lo <= k_hi");
  }
  std::vector<GapRecord> out;
  out.reserve(k_hi - k_lo + 1);
  GapStream s(nth_prime_upper_bound(k_hi + 1), segment);
  while (auto rec = s.next()) {
    if (rec->k < k_lo) continue;
    out.push_back(*rec);
    if (rec->k == k_hi) break;
  }
  if (out.empty() || out.back().k != k_hi) {
    throw error(errc::limit_exceeded, "prime index " + std::to_string(k_hi) + " out of reach");
  }
  return out;
}

inline GapRecord gap_at(std::uint64_t k) {
  if (k < 1) throw error(errc::index_out_of_range, "prime index must be >= 1");
  return gaps_by_index(k, k).front();
}

}  // namespace primegap
