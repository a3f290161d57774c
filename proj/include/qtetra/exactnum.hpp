#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtetra {

// Exact rational scalar. All arithmetic is exact; division by zero throws
// instead of producing a NaN-like value.
class Scalar {
 public:
  Scalar() : v_(0) {}
  Scalar(long n) : v_(n) {}  // NOLINT: implicit on purpose
  Scalar(long num, long den) {
    if (den == 0) throw std::domain_error("Scalar: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Scalar(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Parses "num" or "num/den".
  static Scalar from_string(const std::string& s);

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }

  Scalar operator-() const { return Scalar(mpq_class(-v_)); }
  Scalar& operator+=(const Scalar& o) { v_ += o.v_; return *this; }
  Scalar& operator-=(const Scalar& o) { v_ -= o.v_; return *this; }
  Scalar& operator*=(const Scalar& o) { v_ *= o.v_; return *this; }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw std::domain_error("Scalar: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return a.v_ != b.v_; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return a.v_ < b.v_; }

  // value^e for any integer e; 0^negative throws.
  Scalar pow(long e) const;
  Scalar inv() const { return Scalar(1) / *this; }

  // "num/den", or just "num" when den == 1.
  std::string str() const { return v_.get_str(); }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

// A scalar together with an exact rational square root: root*root == value.
// Keeps half-integer powers of fundamental parameters inside the rationals.
class SqrtScalar {
 public:
  SqrtScalar() : value_(1), root_(1) {}
  static SqrtScalar from_root(const Scalar& root) {
    SqrtScalar s;
    s.root_ = root;
    s.value_ = root * root;
    return s;
  }

  const Scalar& value() const { return value_; }
  const Scalar& root() const { return root_; }

  SqrtScalar operator*(const SqrtScalar& o) const {
    return with(value_ * o.value_, root_ * o.root_);
  }
  SqrtScalar operator/(const SqrtScalar& o) const {
    return with(value_ / o.value_, root_ / o.root_);
  }
  SqrtScalar pow(long e) const { return with(value_.pow(e), root_.pow(e)); }

  // value^(twice_e/2) == root^twice_e. The exponent is passed doubled so it
  // stays an integer.
  Scalar pow_half(long twice_e) const { return root_.pow(twice_e); }

 private:
  static SqrtScalar with(Scalar v, Scalar r) {
    SqrtScalar s;
    s.value_ = std::move(v);
    s.root_ = std::move(r);
    return s;
  }
  Scalar value_, root_;
};

// p^e for a half-integer e given as twice_e = 2e; requires the square-root
// witness carried by p.
inline Scalar qpow_half(const SqrtScalar& p, long twice_e) {
  return p.pow_half(twice_e);
}

// q-shifted factorial (z;b)_m with the all-integer-m convention
// (z;b)_m = 1/(z b^m; b)_{-m}. Throws on a vanishing divisor for m < 0.
Scalar qpoch(const Scalar& z, const Scalar& b, long m);

// q-binomial [n m]_b; zero unless 0 <= m <= n.
Scalar qbinom(long n, long m, const Scalar& b);

// Pochhammer in an extended form: value = rest * 0^{zero_order}. A positive
// zero_order records vanishing factors of a nonnegative-index product; a
// negative one records a negative-index Pochhammer whose defining reciprocal
// product contains vanishing factors (an "infinite" symbol whose reciprocal
// is exactly zero). rest always collects the nonvanishing factors.
struct ExtPoch {
  long zero_order = 0;
  Scalar rest = Scalar(1);
};

ExtPoch qpoch_ext(const Scalar& z, const Scalar& b, long m);

// Running product of ExtPoch factors with numerator/denominator bookkeeping.
class ExtProduct {
 public:
  void mul_num(const ExtPoch& p) { zorder_ += p.zero_order; rest_ *= p.rest; }
  void mul_den(const ExtPoch& p) { zorder_ -= p.zero_order; rest_ /= p.rest; }
  void mul(const Scalar& s);
  void div(const Scalar& s);

  // zorder > 0 -> exact zero; zorder == 0 -> rest; zorder < 0 -> divergent.
  Scalar finalize() const;

 private:
  long zorder_ = 0;
  Scalar rest_ = Scalar(1);
};

// Terminating 2phi1 basic hypergeometric sum. Termination is detected
// exactly: the sum stops at the first n where a numerator Pochhammer factor
// (1 - alpha b^n) or (1 - beta b^n) vanishes. Inputs that do not terminate
// within max_terms, or a vanishing denominator factor inside the range,
// throw.
Scalar phi21_terminating(const Scalar& alpha, const Scalar& beta,
                         const Scalar& gamma, const Scalar& b, const Scalar& z,
                         long max_terms = 4096);

// The finite replacement of the infinite product Phi_m(z): even m gives
// (z;b)_{m/2}, odd m gives (z q;b)_{(m-1)/2} where b = q^2 and q is b's
// square-root witness. Satisfies Phi~_{m+2}(z) = (1 - z q^m) Phi~_m(z).
Scalar phi_tilde(long m, const Scalar& z, const SqrtScalar& b);

// Deterministic 64-bit generator. Sampling helpers avoid
// std::uniform_int_distribution so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  long uniform(long lo, long hi) {  // inclusive bounds
    if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(unsigned percent) { return next() % 100 < percent; }

 private:
  std::uint64_t s_;
};

// Quartet of line parameters (r,s,t,w), each carrying its square-root
// witness so ZZZ's half-integer exponents evaluate in the rationals.
struct Quartet {
  SqrtScalar r, s, t, w;
};

// One tensor line: a q-Weyl line carries a quartet, an oscillator line a
// single mu (which may be negative and never needs a root).
struct LineParams {
  std::optional<Quartet> quartet;
  std::optional<Scalar> mu;
};

// mu[target] = sign * q^qpow * mu[source]
struct MuConstraint {
  int target = 0;
  int source = 0;
  long qpow = 0;
  int sign = 1;
};

struct ConstraintSpec {
  int lines = 3;
  std::string letters = "ZZZ";  // one of Z/X/O per line
  std::vector<MuConstraint> mu_constraints;
};

// Sampled parameter point. q and every quartet entry are squares of sampled
// rationals; q's root uses only the primes {2,3} and every other fundamental
// draws a fresh pair from a disjoint prime pool, so no parameter-ratio can
// coincide with a power of q except where a constraint derives it.
struct ParameterPoint {
  SqrtScalar q;
  std::vector<LineParams> lines;
};

ParameterPoint sample_parameter_point(std::uint64_t seed, const ConstraintSpec& spec);

// A fresh fundamental parameter: the square of a ratio of two pool primes.
SqrtScalar sample_fundamental(Rng& rng, int* pool_cursor);
SqrtScalar sample_q(Rng& rng);

}  // namespace qtetra
