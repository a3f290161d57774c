#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "qtetra/exactnum.hpp"
#include "qtetra/weylrep.hpp"

namespace qtetra {

using Triple = std::array<long, 3>;
using TripleVector = std::map<Triple, Scalar>;

// v-index tuple (a,b,c | i,j,k) of the conjugated six-vertex relation,
// entries in {0,1}.
struct VIdx {
  int a, b, c, i, j, k;
};

// Six-vertex L operator with algebra-valued weights. Entries are indexed by
// (a,b|i,j) in {0,1}^4 and vanish unless a+b = i+j.
struct LOperator {
  RepTag tag = RepTag::ZPlus;
  Scalar r, s, t, w;                // oscillator lines store (1,1,mu^{-1},mu^2)
  std::optional<Scalar> mu;
  std::array<std::array<std::array<std::array<WeylElement, 2>, 2>, 2>, 2> entries;

  const WeylElement& entry(int a, int b, int i, int j) const {
    return entries[a][b][i][j];
  }
};

// Weyl-line L with parameters (r,s,t,w); tag ZPlus, ZMinus or X.
LOperator build_L(RepTag tag, const Scalar& r, const Scalar& s, const Scalar& t,
                  const Scalar& w, const Scalar& q);

// Oscillator L: the (1,1,mu^{-1},mu^2) specialization, acting on F+.
LOperator build_L_osc(const Scalar& mu, const Scalar& q);

// (rs)^{-1} L_{s,r,tw,w^{-1}}; for the oscillator line, L_{mu^{-1}}.
LOperator invert_L(const LOperator& L, const Scalar& q);

// Sum of pure tensors of Weyl elements acting on three lines.
struct CompositeTerm {
  WeylElement f1, f2, f3;
};
using Composite = std::vector<CompositeTerm>;

// Left composite: sum over (alpha,beta,gamma) of
//   L1[alpha beta | i j] (x) L2[a gamma | alpha k] (x) L3[b c | beta gamma].
Composite composite_left(const LOperator& L1, const LOperator& L2,
                         const LOperator& L3, const VIdx& v);

// Right composite: sum over (alpha,beta,gamma) of
//   L1[a b | alpha beta] (x) L2[alpha c | i gamma] (x) L3[beta gamma | j k].
Composite composite_right(const LOperator& L1, const LOperator& L2,
                          const LOperator& L3, const VIdx& v);

// Forward action of a composite on a basis triple; exact and finite.
TripleVector comp_apply(const Composite& comp, const std::array<RepTag, 3>& tags,
                        const Triple& in, const Scalar& q);

// Transposed action: pairs (mid, <out| comp |mid>), mid on the lattice.
TripleVector comp_apply_transposed(const Composite& comp,
                                   const std::array<RepTag, 3>& tags,
                                   const Triple& out, const Scalar& q);

// Canonical multilinear expansion: (monomial per slot) -> coefficient.
using TensorMonomial = std::array<WeylElement::Key, 3>;
std::map<TensorMonomial, Scalar> expand_composite(const Composite& comp);

// Weight-conserving v-index tuples number 20; dropping the two trivial ones
// (all-0 and all-1) leaves 18 relations.
int conservation_audit_total();
int conservation_audit_nontrivial();
std::vector<VIdx> conserving_vidx(bool include_trivial = false);

}  // namespace qtetra
