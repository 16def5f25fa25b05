#pragma once

// Prime generation over windows: primality bitmaps, least-prime-factor
// tables, distinct-factor tables and a trial-division oracle.
//
// Every window [lo, hi) is sieved with a caller-supplied list of base primes
// that must contain every prime <= isqrt(hi - 1). Windows over disjoint ranges
// are independent and may be built concurrently from one shared base list.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "primegap/error.hpp"

namespace primegap {

inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 20;

// Largest s with s * s <= n.
constexpr std::uint64_t isqrt(std::uint64_t n) noexcept {
  std::uint64_t root = 0;
  std::uint64_t bit = std::uint64_t{1} << 62;
  while (bit > n) bit >>= 2;
  while (bit != 0) {
    if (n >= root + bit) {
      n -= root + bit;
      root = (root >> 1) + bit;
    } else {
      root >>= 1;
    }
    bit >>= 2;
  }
  return root;
}

// ---------------------------------------------------------------------------
// Trial-division oracle. Deliberately naive: shares nothing with the sieves.
// ---------------------------------------------------------------------------

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using FactorMultiset = std::vector<PrimePower>;

inline FactorMultiset trial_factorize(std::uint64_t n) {
  if (n == 0) throw error(errc::invalid_argument, "cannot factor 0");
  FactorMultiset out;
  auto take = [&](std::uint64_t q) {
    unsigned e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e != 0) out.push_back({q, e});
  };
  take(2);
  for (std::uint64_t q = 3; q <= n / q; q += 2) take(q);
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  const auto f = trial_factorize(n);
  return f.size() == 1 && f.front().exponent == 1 && f.front().prime == n;
}

inline std::uint64_t least_factor_trial(std::uint64_t n) {
  if (n < 2) throw error(errc::invalid_argument, "least prime factor undefined below 2");
  return trial_factorize(n).front().prime;
}

namespace detail {

inline std::uint64_t first_multiple_at_least(std::uint64_t q, std::uint64_t from) {
  const std::uint64_t r = from % q;
  return r == 0 ? from : from + (q - r);
}

inline std::uint64_t next_prime_trial(std::uint64_t n) {
  do {
    ++n;
  } while (!is_prime_trial(n));
  return n;
}

}  // namespace detail

// Throws insufficient_base unless `base` plausibly holds every prime up to
// isqrt(hi - 1): it must start at 2, and the prime following its last entry
// must exceed the bound. Holes inside the list are not detected.
inline void require_base(std::span<const std::uint64_t> base, std::uint64_t hi) {
  const std::uint64_t bound = hi == 0 ? 0 : isqrt(hi - 1);
  if (bound < 2) return;
  if (base.empty() || base.front() != 2) {
    throw error(errc::insufficient_base,
                "base primes must include 2 for windows reaching " + std::to_string(hi - 1));
  }
  if (base.back() >= bound) return;
  if (detail::next_prime_trial(base.back()) <= bound) {
    throw error(errc::insufficient_base, "base primes stop at " + std::to_string(base.back()) +
                                             ", need all primes <= " + std::to_string(bound));
  }
}

inline void require_window(std::uint64_t lo, std::uint64_t hi) {
  if (lo >= hi) throw error(errc::invalid_argument, "empty window: lo must be < hi");
  check_limit(hi - 1, "window end");
}

// ---------------------------------------------------------------------------
// PrimalityWindow: one bit per integer in [lo, hi), set iff prime.
// ---------------------------------------------------------------------------

class PrimalityWindow {
 public:
  PrimalityWindow(std::uint64_t lo, std::uint64_t hi)
      : lo_(lo), hi_(hi), words_((hi - lo + 63) / 64, ~std::uint64_t{0}) {
    const std::uint64_t tail = (hi - lo) % 64;
    if (tail != 0) words_.back() = (std::uint64_t{1} << tail) - 1;
  }

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  std::uint64_t size() const noexcept { return hi_ - lo_; }

  bool is_prime(std::uint64_t n) const {
    if (n < lo_ || n >= hi_) throw error(errc::invalid_argument, "value outside window");
    return test(n - lo_);
  }

  std::uint64_t count() const noexcept {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  // Calls f(p) for every prime in the window, ascending.
  template <typename F>
  void for_each_prime(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        const int b = std::countr_zero(w);
        f(lo_ + wi * 64 + static_cast<std::uint64_t>(b));
        w &= w - 1;
      }
    }
  }

  // Smallest prime >= n inside the window, or 0 if none.
  std::uint64_t next_prime_from(std::uint64_t n) const noexcept {
    if (n < lo_) n = lo_;
    if (n >= hi_) return 0;
    std::uint64_t off = n - lo_;
    std::size_t wi = off / 64;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (off % 64));
    while (true) {
      if (w != 0) return lo_ + wi * 64 + static_cast<std::uint64_t>(std::countr_zero(w));
      if (++wi == words_.size()) return 0;
      w = words_[wi];
    }
  }

  std::vector<std::uint64_t> primes() const {
    std::vector<std::uint64_t> out;
    for_each_prime([&](std::uint64_t p) { out.push_back(p); });
    return out;
  }

  void clear_offset(std::uint64_t off) noexcept {
    words_[off / 64] &= ~(std::uint64_t{1} << (off % 64));
  }

 private:
  bool test(std::uint64_t off) const noexcept { return (words_[off / 64] >> (off % 64)) & 1U; }

  std::uint64_t lo_;
  std::uint64_t hi_;
  std::vector<std::uint64_t> words_;
};

inline PrimalityWindow sieve_range(std::uint64_t lo, std::uint64_t hi,
                                   std::span<const std::uint64_t> base) {
  require_window(lo, hi);
  require_base(base, hi);
  PrimalityWindow win(lo, hi);
  for (std::uint64_t n = lo; n < std::min<std::uint64_t>(hi, 2); ++n) win.clear_offset(n - lo);
  const std::uint64_t last = hi - 1;
  for (const std::uint64_t q : base) {
    if (q > last / q) break;
    std::uint64_t m = std::max(q * q, detail::first_multiple_at_least(q, lo));
    for (; m < hi; m += q) win.clear_offset(m - lo);
  }
  return win;
}

// ---------------------------------------------------------------------------
// LpfWindow: least prime factor of every n in [lo, hi), lo >= 2.
// ---------------------------------------------------------------------------

class LpfWindow {
 public:
  LpfWindow(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi), small_(hi - lo, 0) {}

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }

  // Equals n iff n is prime.
  std::uint64_t lpf(std::uint64_t n) const {
    if (n < lo_ || n >= hi_) throw error(errc::invalid_argument, "value outside window");
    const std::uint32_t q = small_[n - lo_];
    return q == 0 ? n : q;
  }

  bool is_prime(std::uint64_t n) const { return lpf(n) == n; }

 private:
  friend LpfWindow lpf_range(std::uint64_t, std::uint64_t, std::span<const std::uint64_t>);

  std::uint64_t lo_;
  std::uint64_t hi_;
  // 0 marks "no factor <= isqrt(n)"; composite entries are <= isqrt(2^63) < 2^32.
  std::vector<std::uint32_t> small_;
};

inline LpfWindow lpf_range(std::uint64_t lo, std::uint64_t hi,
                           std::span<const std::uint64_t> base) {
  if (lo < 2) throw error(errc::invalid_argument, "least prime factor undefined below 2");
  require_window(lo, hi);
  require_base(base, hi);
  LpfWindow win(lo, hi);
  const std::uint64_t last = hi - 1;
  for (const std::uint64_t q : base) {
    if (q > last / q) break;
    const auto q32 = static_cast<std::uint32_t>(q);
    std::uint64_t m = std::max(q * q, detail::first_multiple_at_least(q, lo));
    for (; m < hi; m += q) {
      auto& slot = win.small_[m - lo];
      if (slot == 0) slot = q32;
    }
  }
  return win;
}

// ---------------------------------------------------------------------------
// FactorWindow: distinct prime factors of every n in [lo, hi), lo >= 2.
// Factors <= isqrt(hi - 1) are stored (CSR layout); the at most one larger
// factor is recovered on access by dividing them out.
// ---------------------------------------------------------------------------

class FactorWindow {
 public:
  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }

  // Calls f(q) for each distinct prime factor q of n, ascending.
  template <typename F>
  void for_each_factor(std::uint64_t n, F&& f) const {
    if (n < lo_ || n >= hi_) throw error(errc::invalid_argument, "value outside window");
    const std::uint64_t off = n - lo_;
    std::uint64_t rest = n;
    for (std::uint32_t s = offsets_[off]; s < offsets_[off + 1]; ++s) {
      const std::uint64_t q = small_[s];
      do {
        rest /= q;
      } while (rest % q == 0);
      f(q);
    }
    if (rest > 1) f(rest);
  }

  std::vector<std::uint64_t> factors(std::uint64_t n) const {
    std::vector<std::uint64_t> out;
    for_each_factor(n, [&](std::uint64_t q) { out.push_back(q); });
    return out;
  }

  std::uint64_t lpf(std::uint64_t n) const {
    std::uint64_t first = 0;
    for_each_factor(n, [&](std::uint64_t q) {
      if (first == 0) first = q;
    });
    return first;
  }

 private:
  friend FactorWindow factor_range(std::uint64_t, std::uint64_t, std::span<const std::uint64_t>);

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> small_;
};

inline FactorWindow factor_range(std::uint64_t lo, std::uint64_t hi,
                                 std::span<const std::uint64_t> base) {
  if (lo < 2) throw error(errc::invalid_argument, "prime factors undefined below 2");
  require_window(lo, hi);
  require_base(base, hi);
  const std::uint64_t len = hi - lo;
  const std::uint64_t bound = isqrt(hi - 1);

  FactorWindow win;
  win.lo_ = lo;
  win.hi_ = hi;
  win.offsets_.assign(len + 1, 0);
  auto sweep = [&](auto&& visit) {
    for (const std::uint64_t q : base) {
      if (q > bound) break;
      for (std::uint64_t m = detail::first_multiple_at_least(q, lo); m < hi; m += q) visit(q, m - lo);
    }
  };
  sweep([&](std::uint64_t, std::uint64_t off) { ++win.offsets_[off + 1]; });
  for (std::uint64_t i = 0; i < len; ++i) win.offsets_[i + 1] += win.offsets_[i];
  win.small_.resize(win.offsets_[len]);
  std::vector<std::uint32_t> fill(win.offsets_.begin(), win.offsets_.end() - 1);
  sweep([&](std::uint64_t q, std::uint64_t off) {
    win.small_[fill[off]++] = static_cast<std::uint32_t>(q);
  });
  return win;
}

// ---------------------------------------------------------------------------
// primes_upto: segmented sieve over [0, n]. Materializes the whole list, so
// the practical ceiling is memory (8 bytes per prime), not the hard limit.
// ---------------------------------------------------------------------------

inline std::vector<std::uint64_t> primes_upto(std::uint64_t n,
                                              std::uint64_t segment = kDefaultSegmentSize) {
  check_limit(n, "primes_upto bound");
  if (segment == 0) throw error(errc::invalid_argument, "segment size must be positive");
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  const std::vector<std::uint64_t> base = n < 4 ? std::vector<std::uint64_t>{} : primes_upto(isqrt(n), segment);
  for (std::uint64_t lo = 0; lo <= n;) {
    const std::uint64_t hi = (n - lo < segment) ? n + 1 : lo + segment;
    sieve_range(lo, hi, base).for_each_prime([&](std::uint64_t p) { out.push_back(p); });
    lo = hi;
  }
  return out;
}

// Number of primes <= n, without materializing them.
inline std::uint64_t prime_count(std::uint64_t n, std::uint64_t segment = kDefaultSegmentSize) {
  check_limit(n, "prime_count bound");
  if (n < 2) return 0;
  const auto base = primes_upto(isqrt(n), segment);
  std::uint64_t c = 0;
  for (std::uint64_t lo = 0; lo <= n;) {
    const std::uint64_t hi = (n - lo < segment) ? n + 1 : lo + segment;
    c += sieve_range(lo, hi, base).count();
    lo = hi;
  }
  return c;
}

}  // namespace primegap
