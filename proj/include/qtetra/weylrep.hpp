#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qtetra/exactnum.hpp"
#include "qtetra/report.hpp"

namespace qtetra {

// Representation acting on a Fock-like line. ZMinus is the sign-flipped
// variant of the Z-diagonal representation; O is the oscillator restriction
// of the X-diagonal one to nonnegative indices.
enum class RepTag { ZPlus, ZMinus, X, O };

inline bool is_plus_line(RepTag t) { return t == RepTag::O; }

// Element of the q-Weyl algebra in normal form: sum of c * Z^ze X^xe with Z
// strictly left of X and zero coefficients pruned.
class WeylElement {
 public:
  using Key = std::pair<long, long>;  // (zexp, xexp)

  WeylElement() = default;
  static WeylElement zero() { return {}; }
  static WeylElement one() { return monomial(0, 0, Scalar(1)); }
  static WeylElement monomial(long zexp, long xexp, Scalar c);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Scalar>& terms() const { return terms_; }

  void add_term(long zexp, long xexp, const Scalar& c);
  WeylElement operator+(const WeylElement& o) const;
  WeylElement operator-(const WeylElement& o) const;
  WeylElement scaled(const Scalar& c) const;
  bool operator==(const WeylElement& o) const { return terms_ == o.terms_; }

 private:
  std::map<Key, Scalar> terms_;
};

// Normal-ordered product: X^b Z^a = q^{ab} Z^a X^b.
WeylElement weyl_mul(const WeylElement& a, const WeylElement& b, const Scalar& q);

// Oscillator generators and their images under the embedding into the
// q-Weyl algebra: k -> X, a+ -> Z, a- -> Z^{-1}(1 - X^2).
enum class OscGen { K, APlus, AMinus };
WeylElement embed_oscillator(OscGen g);

// Finite-support vector on one line.
using StateVector = std::map<long, Scalar>;

// Image of |m> under e in the given representation, as (index, coeff) pairs.
// For the O tag the action is the X-diagonal one restricted to indices >= 0;
// a surviving negative-index coefficient means e is outside the oscillator
// image and throws.
std::vector<std::pair<long, Scalar>> act_basis(RepTag tag, const WeylElement& e,
                                               long m, const Scalar& q);

// Pairs (m, coeff) with <m_out| e |m> = coeff, m restricted to the line's
// lattice.
std::vector<std::pair<long, Scalar>> act_basis_transposed(RepTag tag,
                                                          const WeylElement& e,
                                                          long m_out, const Scalar& q);

StateVector apply_rep(RepTag tag, const WeylElement& e, const StateVector& v,
                      const Scalar& q);

// Verifies the defining relations as operator identities on every basis
// vector in [lo, hi]: XZ = qZX for the Weyl tags, and the four q-oscillator
// relations (via the embedding) for the O tag.
VerificationReport check_algebra_relations(RepTag tag, long lo, long hi, const Scalar& q);

}  // namespace qtetra
