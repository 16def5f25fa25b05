#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace primegap {

// Largest value any window, limit or ceiling may reach.
inline constexpr std::uint64_t kHardLimit = (std::uint64_t{1} << 63) - 1;

enum class errc {
  invalid_argument,
  limit_exceeded,
  insufficient_base,
  offset_out_of_range,
  index_out_of_range,
  witness_mismatch,
  certification_failure,
  residue_violation,
  ceiling_exceeded,
};

inline const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::limit_exceeded: return "limit-exceeded";
    case errc::insufficient_base: return "insufficient-base";
    case errc::offset_out_of_range: return "offset-out-of-range";
    case errc::index_out_of_range: return "index-out-of-range";
    case errc::witness_mismatch: return "witness-mismatch";
    case errc::certification_failure: return "certification-failure";
    case errc::residue_violation: return "residue-violation";
    case errc::ceiling_exceeded: return "ceiling-exceeded";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline void check_limit(std::uint64_t n, const char* what) {
  if (n > kHardLimit) {
    throw error(errc::limit_exceeded, std::string(what) + " above 2^63-1");
  }
}

}  // namespace primegap
