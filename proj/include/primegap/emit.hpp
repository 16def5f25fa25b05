#pragma once

// CSV / JSONL serialization. Every field is an unsigned decimal integer except
// the violation kind token, so no quoting or escaping is ever needed.

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>

#include "primegap/gaps.hpp"
#include "primegap/relation.hpp"

namespace primegap {

enum class Format { csv, jsonl };

struct PrimeRow {
  std::uint64_t k = 0;
  std::uint64_t p = 0;
};

struct NextRow {
  std::uint64_t p = 0;
  std::uint64_t d = 0;
  std::uint64_t next = 0;
};

struct VerifySummary {
  std::uint64_t k_lo = 0;
  std::uint64_t k_hi = 0;
  std::uint64_t relation_checks = 0;
  std::uint64_t residue_checks = 0;
  std::uint64_t violations = 0;
};

template <typename T>
struct Schema;

template <>
struct Schema<PrimeRow> {
  static constexpr std::array<std::string_view, 2> names{"k", "p"};
  static std::array<std::uint64_t, 2> values(const PrimeRow& r) { return {r.k, r.p}; }
};

template <>
struct Schema<GapRecord> {
  static constexpr std::array<std::string_view, 4> names{"k", "p_k", "p_next", "d_k"};
  static std::array<std::uint64_t, 4> values(const GapRecord& r) {
    return {r.k, r.p_k, r.p_next, r.d_k};
  }
};

template <>
struct Schema<Witness> {
  static constexpr std::array<std::string_view, 5> names{"k", "i", "n", "p_j", "m"};
  static std::array<std::uint64_t, 5> values(const Witness& r) { return {r.k, r.i, r.n, r.p_j, r.m}; }
};

template <>
struct Schema<NextRow> {
  static constexpr std::array<std::string_view, 3> names{"p", "d", "next"};
  static std::array<std::uint64_t, 3> values(const NextRow& r) { return {r.p, r.d, r.next}; }
};

template <>
struct Schema<VerifySummary> {
  static constexpr std::array<std::string_view, 5> names{"k_lo", "k_hi", "relation_checks",
                                                         "residue_checks", "violations"};
  static std::array<std::uint64_t, 5> values(const VerifySummary& r) {
    return {r.k_lo, r.k_hi, r.relation_checks, r.residue_checks, r.violations};
  }
};

template <typename T>
concept Record = requires(const T& r) {
  Schema<T>::names;
  Schema<T>::values(r);
};

// Streams one record type. CSV gets a header row up front, even when no
// record follows; JSONL objects use the header names as keys, in order.
template <Record T>
class RecordWriter {
 public:
  RecordWriter(std::ostream& os, Format fmt) : os_(os), fmt_(fmt) {
    if (fmt_ == Format::csv) {
      const auto& names = Schema<T>::names;
      for (std::size_t c = 0; c < names.size(); ++c) os_ << (c ? "," : "") << names[c];
      os_ << '\n';
    }
  }

  void write(const T& rec) {
    const auto& names = Schema<T>::names;
    const auto vals = Schema<T>::values(rec);
    if (fmt_ == Format::csv) {
      for (std::size_t c = 0; c < vals.size(); ++c) os_ << (c ? "," : "") << vals[c];
      os_ << '\n';
    } else {
      os_ << '{';
      for (std::size_t c = 0; c < vals.size(); ++c) {
        os_ << (c ? "," : "") << '"' << names[c] << "\":" << vals[c];
      }
      os_ << "}\n";
    }
  }

 private:
  std::ostream& os_;
  Format fmt_;
};

template <Record T>
void emit(std::ostream& os, std::span<const T> records, Format fmt) {
  RecordWriter<T> w(os, fmt);
  for (const auto& r : records) w.write(r);
}

// Detail row following a verify summary:
//   csv:   violation,<k>,<i>,<p_j>,<kind>
//   jsonl: {"violation":"<kind>","k":<k>,"i":<i>,"p_j":<p_j>}
inline void emit_violation(std::ostream& os, const Violation& v, Format fmt) {
  if (fmt == Format::csv) {
    os << "violation," << v.k << ',' << v.i << ',' << v.p_j << ',' << to_string(v.kind) << '\n';
  } else {
    os << "{\"violation\":\"" << to_string(v.kind) << "\",\"k\":" << v.k << ",\"i\":" << v.i
       << ",\"p_j\":" << v.p_j << "}\n";
  }
}

inline void emit_report(std::ostream& os, const VerificationReport& rep, Format fmt) {
  RecordWriter<VerifySummary> w(os, fmt);
  w.write({rep.k_lo, rep.k_hi, rep.relation_checks, rep.residue_checks, rep.violations.size()});
  for (const auto& v : rep.violations) emit_violation(os, v, fmt);
}

}  // namespace primegap
