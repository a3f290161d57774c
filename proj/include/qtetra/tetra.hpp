#pragma once

#include <array>
#include <string>
#include <vector>

#include "qtetra/exactnum.hpp"
#include "qtetra/report.hpp"
#include "qtetra/rkernels.hpp"
#include "qtetra/verify.hpp"

namespace qtetra {

using Sextet = std::array<long, 6>;

// The six-letter types whose four-factor tetrahedron equation has finitely
// many intermediate sextets on both sides: OOOOOO plus the two-dozen mixed
// Z/O types admitting a direct elementwise check.
const std::vector<std::string>& finite_type_list();
bool is_finite_type(const std::string& type);

// Line assignment of the four factor kernels: ABD on lines (1,2,4), ACE on
// (1,3,5), BCF on (2,3,6), DEF on (4,5,6); 0-based below.
constexpr std::array<std::array<int, 3>, 4> kFactorLines = {
    {{0, 1, 3}, {0, 2, 4}, {1, 2, 5}, {3, 4, 5}}};

struct Wiring {
  std::string type;  // six letters in {Z, O}
  SqrtScalar q;
  std::array<LineParams, 6> lines;
  std::array<RKernel, 4> factors;  // order ABD, ACE, BCF, DEF
};

// Samples line parameters and resolves every factor's integer mu-ratio
// demand by construction (free ratios drawn from the seed, cycle-closing
// ones derived). Throws on inconsistent demands.
Wiring wire_parameters(const std::string& type, std::uint64_t seed);

// Exposed for tests: resolve mu-ratio demands over an O-line relation graph.
// Each demand is (line_a, line_b, sign) requiring mu_a = sign * q^d * mu_b
// for some integer d; returns one d per demand.
std::vector<long> resolve_mu_relations(
    const std::vector<std::array<int, 3>>& demands, Rng& rng);

// Both sides of one matrix element of the four-factor relation, as exact
// finite sums over the intermediate sextet. Throws if the intermediate
// ranges cannot be bounded (misuse outside the finite list) or if the pair
// leaves an oscillator-line lattice.
std::pair<Scalar, Scalar> rrrr_check_pair(const Wiring& w, const Sextet& out,
                                          const Sextet& in);

// Test oracle: one side evaluated by scanning a whole intermediate box
// instead of constraint propagation.
Scalar rrrr_side_bruteforce(const Wiring& w, bool lhs, const Sextet& out,
                            const Sextet& in, long box_lo, long box_hi);

// Deterministic sampling of `pairs` sextet pairs, biased toward nonzero
// support; exact comparison for each.
VerificationReport rrrr_sweep(const std::string& type, std::uint64_t seed, int pairs,
                              const Window& w = Window{-2, 2, 0, 3});
VerificationReport rrrr_sweep_wiring(const Wiring& wiring, std::uint64_t seed,
                                     int pairs, const Window& w);

}  // namespace qtetra
