#pragma once

#include <array>

#include "qtetra/exactnum.hpp"
#include "qtetra/lops.hpp"
#include "qtetra/report.hpp"
#include "qtetra/rkernels.hpp"
#include "qtetra/verify.hpp"
#include "qtetra/weylrep.hpp"

namespace qtetra {

struct RhoParams {
  Scalar u, g, h;
};

// Images of the nine generators t_{ij} (1-based in the math, 0-based here)
// under the two algebra homomorphisms into the q-Weyl algebra.
using GeneratorImage = std::array<std::array<WeylElement, 3>, 3>;

GeneratorImage rho_images(int which, const RhoParams& p, const Scalar& q);

// Verifies the defining relations of the quantized coordinate ring — the
// mixed commutators, the row/column q-commutations and the quantum
// determinant — as operator identities on the window.
VerificationReport check_coordinate_ring_relations(const GeneratorImage& img,
                                                   RepTag tag, long lo, long hi,
                                                   const Scalar& q);

// Coproduct of t_{lm} (1 <= l,m <= 3) over three tensor factors, evaluated
// in the given generator images; primed composes in reversed slot order.
Composite coproduct_operator(const std::array<const GeneratorImage*, 3>& reps,
                             int l, int m, bool primed);

struct IntertwinerConfig {
  enum class Mode { OOO, ZZZ };
  Mode mode = Mode::OOO;
  SqrtScalar q;

  // OOO mode: mu3 = mu1.
  Scalar mu1{1}, mu2{1};

  // ZZZ mode: free parameters and the derived quartets satisfying the
  // constraint variety (one multiplicative tweak per violated equation in
  // the fault-injection configurations).
  SqrtScalar u, p;
  SqrtScalar h1, h2, t1, t2, t3, r1, s3;
  Quartet Q1, Q2, Q3;
  Scalar u1{1}, u2{1};  // both equal u unless violated
  Scalar g1{1}, g2{1};  // p/h_i unless violated
  int violated = 0;     // 0 = none, 1..9 = which constraint equation
};

IntertwinerConfig sample_intertwiner_config(IntertwinerConfig::Mode mode,
                                            std::uint64_t seed);
// Single-violation variants: exactly one of the nine constraint equations
// fails (1..7 the quartet relations, 8 the u-match, 9 the gh-match).
IntertwinerConfig sample_intertwiner_config_violated(std::uint64_t seed, int which);

// Per-matrix-element check of the intertwining relation for all nine
// generators, with the OOO kernel at (mu1, mu2, mu1) or the ZZZ kernel at
// the derived quartets.
VerificationReport intertwiner_check(const IntertwinerConfig& cfg, const Window& w);

// The constant identities tying the represented coproducts to the triple
// composites and their parameter-substituted transposes (ZZZ mode only),
// verified as exact multilinear identities in the Weyl algebra.
VerificationReport prop41_constant_check(const IntertwinerConfig& cfg);

}  // namespace qtetra
