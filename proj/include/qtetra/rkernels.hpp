#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qtetra/exactnum.hpp"
#include "qtetra/lops.hpp"

namespace qtetra {

enum class RType { ZZZ, OZZ, ZZO, ZOZ, OOZ, ZOO, OZO, OOO, XXZ, ZXX, XZX };

const char* type_name(RType t);
std::optional<RType> parse_rtype(const std::string& s);
std::array<char, 3> type_letters(RType t);    // 'Z', 'O' or 'X' per tensor slot
std::array<bool, 3> plus_slots(RType t);      // slots living on F+
std::array<RepTag, 3> line_tags(RType t);     // representation per slot

// Single-token formula mutations, used only by fault-sensitivity tests.
enum class Fault {
  None,
  ZzzPhiSign,     // q^{-phi}
  ZzzSwapD3D4,
  OzzSignY,       // +y instead of -y in the beta sum
  ZzoPochShift,   // drops the +2 in a Pochhammer argument exponent
  ZozSwapXY,
  OozNegateD,
  ZooPochShift,
  ZooSwapMu,
  OzoShiftF,
  OooSignB,       // (mu1/mu3)^b without the minus sign
  OooExpShift,    // b(k-i-1) instead of b(k-i+1)
  XxzFlipH,
  ZxxExpShift,
  XzxSignFlip,
};

// A 3D R kernel: type tag, parameter point restricted to its three lines,
// integer sector data and the free sector constants of the X-type kernels.
struct RKernel {
  RType type = RType::ZZZ;
  SqrtScalar q;
  std::array<std::optional<Quartet>, 3> quartet;  // Weyl slots
  std::array<std::optional<Scalar>, 3> mu;        // oscillator slots
  long d = 0;                                     // OOZ/ZOO/OZO sector integer
  std::array<Scalar, 2> free_const{Scalar(1), Scalar(1)};  // XXZ/ZXX/XZX seeds
  Fault fault = Fault::None;
};

// Constructors (validate the per-type parameter shape and the integer
// sector constraints; throw std::invalid_argument on violation).
RKernel make_zzz(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Quartet& q3);
RKernel make_ozz(const SqrtScalar& q, const Scalar& mu, const Quartet& q2, const Quartet& q3);
RKernel make_zzo(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Scalar& mu);
RKernel make_zoz(const SqrtScalar& q, const Quartet& q1, const Scalar& mu, const Quartet& q3);
// OOZ: requires mu1/mu2 = q^d with d an integer.
RKernel make_ooz(const SqrtScalar& q, const Scalar& mu1, const Scalar& mu2, const Quartet& q3);
RKernel make_ooz_d(const SqrtScalar& q, const Scalar& mu2, long d, const Quartet& q3);
// ZOO: requires mu3/mu2 = q^d.
RKernel make_zoo(const SqrtScalar& q, const Quartet& q1, const Scalar& mu2, const Scalar& mu3);
RKernel make_zoo_d(const SqrtScalar& q, const Quartet& q1, const Scalar& mu2, long d);
// OZO: requires -mu1/mu3 = q^d; the _d form derives mu1 = -mu3 q^d.
RKernel make_ozo(const SqrtScalar& q, const Scalar& mu1, const Quartet& q2, const Scalar& mu3);
RKernel make_ozo_d(const SqrtScalar& q, const Quartet& q2, const Scalar& mu3, long d);
RKernel make_ooo(const SqrtScalar& q, const Scalar& mu1, const Scalar& mu2, const Scalar& mu3);
RKernel make_xxz(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Quartet& q3);
RKernel make_zxx(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Quartet& q3);
RKernel make_xzx(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Quartet& q3);

// Integer d with ratio == q^d, if one exists with |d| <= max_abs.
std::optional<long> find_qpow(const Scalar& ratio, const Scalar& q, long max_abs = 64);

// Exact matrix element R^{out}_{in}. Evaluates the closed form literally
// (all zeros arise from the formula's delta/theta factors and vanishing
// q-shifted factorials, independent of support()).
Scalar r_element(const RKernel& k, const Triple& out, const Triple& in);

// Alternative terminating-series forms of the OZZ/ZZO/ZOZ kernels.
Scalar r_element_series(const RKernel& k, const Triple& out, const Triple& in);

// Exact support predicate: false implies r_element == 0.
bool support(const RKernel& k, const Triple& out, const Triple& in);

// Sector bookkeeping attached to an index pair.
struct SectorData {
  std::optional<std::array<long, 4>> dvec;  // ZZZ d1..d4
  std::optional<long> phi4;                 // 4*phi (ZZZ); phi = phi4/4 may be half-integral
  std::optional<long> e2, f2;               // 2e, 2f (OOZ/ZOO/OZO)
  std::optional<long> g, h;                 // XXZ/ZXX/XZX
  std::map<std::string, Scalar> aux;        // x, y, z where defined
};
SectorData sector_of(const RKernel& k, const Triple& out, const Triple& in);

// Parity functional whose value mod 2 is preserved by every component
// relation of the type, when the type has one.
std::optional<long> parity_functional(RType t, const Triple& out, const Triple& in);

// Parameter-substituted inverse kernels; only the locally finite types
// (OOZ, ZOO, OOO) admit one.
bool locally_finite(RType t);
RKernel invert_kernel(const RKernel& k);
Scalar r_inverse_element(const RKernel& k, const Triple& out, const Triple& in);

// Index-flipped ZZZ element R(eps1,eps2,eps3)^{abc}_{ijk}.
Scalar sign_variant_element(const RKernel& k, int e1, int e2, int e3,
                            const Triple& out, const Triple& in);

// Finite set of out-triples with support(out, in) for the locally finite
// types, enumerated from the delta and interval constraints.
std::vector<Triple> out_fiber(const RKernel& k, const Triple& in);

// Cheap memoizing wrapper around r_element with a support() fast path.
class ElementCache {
 public:
  explicit ElementCache(const RKernel* k) : k_(k) {}
  const Scalar& get(const Triple& out, const Triple& in);
  std::size_t size() const { return map_.size(); }

 private:
  const RKernel* k_;
  std::unordered_map<std::uint64_t, Scalar> map_;
  Scalar zero_{0};
};

std::uint64_t pack_sextet(const Triple& out, const Triple& in);

}  // namespace qtetra
