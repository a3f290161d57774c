#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qtetra {

// One exact-equality failure. Index vectors are sized per suite (triples for
// RLLL sweeps, sextets for RRRR); lhs/rhs hold the exact rationals as
// strings for diagnosis.
struct Failure {
  std::vector<int> vidx;       // v-index tuple (empty when not applicable)
  std::vector<long> out, in;
  std::string lhs, rhs;
  std::string note;

  bool operator<(const Failure& o) const {
    if (vidx != o.vidx) return vidx < o.vidx;
    if (out != o.out) return out < o.out;
    if (in != o.in) return in < o.in;
    return note < o.note;
  }
};

struct VerificationReport {
  std::string suite;
  std::string type;
  std::uint64_t seed = 0;
  std::array<long, 2> f_window{0, 0};    // F-line index bounds
  std::array<long, 2> fp_window{0, 0};   // F+-line index bounds
  std::map<std::string, std::string> params;  // exact rationals, "num/den"
  std::map<std::string, long> counts;
  std::vector<Failure> failures;
  long elapsed_ms = 0;  // in-memory only; never serialized (determinism)

  bool pass() const { return failures.empty(); }
  void sort_failures();
  void merge(const VerificationReport& o);

  // Deterministic JSON (sorted keys, no timing data).
  std::string to_json() const;
};

}  // namespace qtetra
