#pragma once

#include <functional>
#include <vector>

#include "qtetra/exactnum.hpp"
#include "qtetra/lops.hpp"
#include "qtetra/report.hpp"
#include "qtetra/rkernels.hpp"

namespace qtetra {

// Enumeration window. Arithmetic is always exact and unbounded; windows only
// pick which (out, in) pairs a sweep checks.
struct Window {
  long f_lo = -3, f_hi = 3;   // q-Weyl lines
  long fp_lo = 0, fp_hi = 4;  // oscillator lines
  std::pair<long, long> line_range(bool plus) const {
    return plus ? std::pair<long, long>{fp_lo, fp_hi} : std::pair<long, long>{f_lo, f_hi};
  }
};

std::vector<Triple> window_triples(RType type, const Window& w);

// A kernel together with the three L operators of its conjugated six-vertex
// relation, one per tensor line.
struct RlllSystem {
  RType type = RType::ZZZ;
  SqrtScalar q;
  ParameterPoint point;
  std::array<LOperator, 3> L;
  std::array<RepTag, 3> tags;
  RKernel kernel;
};

// Deterministic per-type sampling; the sector integer of OOZ/ZOO/OZO is
// drawn from the seed and imposed by construction.
RlllSystem make_rlll_system(RType type, std::uint64_t seed, Fault fault = Fault::None);
RlllSystem make_system_from_kernel(const RKernel& kernel);

using ElementFn = std::function<Scalar(const Triple&, const Triple&)>;

// Both sides of one matrix element of the conjugated relation: lhs applies
// the left composite forward, rhs applies the right composite transposed.
// Exact and finite for every kernel because elements are compared, never
// whole vectors.
std::pair<Scalar, Scalar> rlll_check_pair(const RlllSystem& sys, const VIdx& v,
                                          const Triple& out, const Triple& in);

// All 18 nontrivial v-tuples x all (out,in) window pairs, exact equality.
VerificationReport rlll_sweep(const RlllSystem& sys, const Window& w);
VerificationReport rlll_sweep_custom(const RlllSystem& sys, const Window& w,
                                     const ElementFn& elem);

// Reduction-chain evaluation of the ZZZ element, seeded by value 1 at the
// four initial positions; independent of the closed form.
Scalar recursion_oracle_zzz(const SqrtScalar& q, const Quartet& q1, const Quartet& q2,
                            const Quartet& q3, const Triple& out, const Triple& in);

// Asserts that every element participating in a component relation shares
// the type's parity functional value.
VerificationReport sector_coupling_audit(const RlllSystem& sys, const Window& w,
                                         int sample_pairs, std::uint64_t seed);

// Elementwise agreement of the factorized and series forms (OZZ/ZZO/ZOZ).
VerificationReport series_equivalence_check(const RKernel& kernel, const Window& w);

// Transpose symmetry of the parameter-free OOO kernel on indices <= bound.
VerificationReport ooo_symmetry_check(const SqrtScalar& q, long bound);

// The q-Weyl L operator never raises the F-index under the Z-diagonal
// representation (its entries contain no negative X powers).
bool lz_keeps_subspace(const LOperator& L, const Scalar& q, long lo, long hi);

}  // namespace qtetra
