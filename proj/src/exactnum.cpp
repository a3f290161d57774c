#include "qtetra/exactnum.hpp"

#include <algorithm>

namespace qtetra {

Scalar Scalar::from_string(const std::string& s) {
  mpq_class v;
  if (v.set_str(s, 10) != 0) throw std::invalid_argument("Scalar: bad rational '" + s + "'");
  if (v.get_den() == 0) throw std::domain_error("Scalar: zero denominator in '" + s + "'");
  v.canonicalize();
  return Scalar(std::move(v));
}

Scalar Scalar::pow(long e) const {
  if (e == 0) return Scalar(1);
  if (is_zero()) {
    if (e < 0) throw std::domain_error("Scalar: 0 to a negative power");
    return Scalar(0);
  }
  mpq_class base = e > 0 ? v_ : mpq_class(1 / v_);
  unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), n);
  mpq_class out(num, den);  // already canonical: base was canonical
  return Scalar(std::move(out));
}

Scalar qpoch(const Scalar& z, const Scalar& b, long m) {
  if (m >= 0) {
    Scalar acc(1);
    Scalar zb = z;
    for (long s = 0; s < m; ++s) {
      acc *= Scalar(1) - zb;
      zb *= b;
    }
    return acc;
  }
  // (z;b)_m = 1 / prod_{s=m}^{-1} (1 - z b^s)
  Scalar acc(1);
  Scalar zb = z * b.pow(m);
  for (long s = m; s < 0; ++s) {
    Scalar f = Scalar(1) - zb;
    if (f.is_zero()) throw std::domain_error("qpoch: vanishing factor at negative index");
    acc *= f;
    zb *= b;
  }
  return acc.inv();
}

Scalar qbinom(long n, long m, const Scalar& b) {
  if (m < 0 || m > n) return Scalar(0);
  // (b;b)_n / ((b;b)_m (b;b)_{n-m})
  return qpoch(b, b, n) / (qpoch(b, b, m) * qpoch(b, b, n - m));
}

ExtPoch qpoch_ext(const Scalar& z, const Scalar& b, long m) {
  ExtPoch out;
  if (m >= 0) {
    Scalar zb = z;
    for (long s = 0; s < m; ++s) {
      Scalar f = Scalar(1) - zb;
      if (f.is_zero())
        ++out.zero_order;
      else
        out.rest *= f;
      zb *= b;
    }
    return out;
  }
  Scalar zb = z * b.pow(m);
  Scalar acc(1);
  long zeros = 0;
  for (long s = m; s < 0; ++s) {
    Scalar f = Scalar(1) - zb;
    if (f.is_zero())
      ++zeros;
    else
      acc *= f;
    zb *= b;
  }
  out.zero_order = -zeros;
  out.rest = acc.inv();
  return out;
}

void ExtProduct::mul(const Scalar& s) {
  if (s.is_zero())
    ++zorder_;
  else
    rest_ *= s;
}

void ExtProduct::div(const Scalar& s) {
  if (s.is_zero())
    --zorder_;
  else
    rest_ /= s;
}

Scalar ExtProduct::finalize() const {
  if (zorder_ > 0) return Scalar(0);
  if (zorder_ < 0) throw std::domain_error("ExtProduct: divergent value (degenerate parameters)");
  return rest_;
}

Scalar phi21_terminating(const Scalar& alpha, const Scalar& beta,
                         const Scalar& gamma, const Scalar& b, const Scalar& z,
                         long max_terms) {
  Scalar sum(0);
  Scalar term(1);  // (alpha;b)_n (beta;b)_n / ((gamma;b)_n (b;b)_n) z^n
  Scalar ab = alpha, bb = beta, gb = gamma, qb = b;
  for (long n = 0; n <= max_terms; ++n) {
    sum += term;
    Scalar fa = Scalar(1) - ab;
    Scalar fb = Scalar(1) - bb;
    if (fa.is_zero() || fb.is_zero()) return sum;  // series terminates after n+1 terms
    Scalar fg = Scalar(1) - gb;
    Scalar fq = Scalar(1) - qb;
    if (fg.is_zero() || fq.is_zero())
      throw std::domain_error("phi21: vanishing denominator inside the summation range");
    term *= fa * fb * z / (fg * fq);
    ab *= b;
    bb *= b;
    gb *= b;
    qb *= b;
  }
  throw std::domain_error("phi21: series did not terminate");
}

Scalar phi_tilde(long m, const Scalar& z, const SqrtScalar& b) {
  if (m % 2 == 0) return qpoch(z, b.value(), m / 2);
  return qpoch(z * b.root(), b.value(), (m - 1) / 2);  // m-1 even, division exact
}

namespace {

// q roots use only the primes {2, 3}; everything else draws from this pool.
constexpr std::array<int, 24> kPool = {5,  7,  11, 13, 17, 19, 23, 29,
                                       31, 37, 41, 43, 47, 53, 59, 61,
                                       67, 71, 73, 79, 83, 89, 97, 101};

}  // namespace

SqrtScalar sample_q(Rng& rng) {
  static const std::array<std::pair<long, long>, 6> roots = {
      std::pair<long, long>{2, 3}, {3, 2}, {4, 3}, {3, 4}, {2, 9}, {9, 2}};
  auto [n, d] = roots[rng.next() % roots.size()];
  return SqrtScalar::from_root(Scalar(n, d));
}

SqrtScalar sample_fundamental(Rng& rng, int* pool_cursor) {
  int i = (*pool_cursor)++ % static_cast<int>(kPool.size());
  int j = (*pool_cursor)++ % static_cast<int>(kPool.size());
  if (kPool[i] == kPool[j]) j = ((*pool_cursor)++) % static_cast<int>(kPool.size());
  long num = kPool[i];
  long den = kPool[j];
  if (rng.coin(50)) std::swap(num, den);
  return SqrtScalar::from_root(Scalar(num, den));
}

ParameterPoint sample_parameter_point(std::uint64_t seed, const ConstraintSpec& spec) {
  if (static_cast<int>(spec.letters.size()) != spec.lines)
    throw std::invalid_argument("sample_parameter_point: letters/lines mismatch");
  constexpr int kBudget = 16;
  for (int attempt = 0; attempt < kBudget; ++attempt) {
    Rng rng(seed + 0x1000ull * attempt);
    int cursor = static_cast<int>(rng.next() % kPool.size());
    ParameterPoint pt;
    pt.q = sample_q(rng);
    pt.lines.resize(spec.lines);
    std::vector<bool> derived(spec.lines, false);
    for (const auto& c : spec.mu_constraints) derived[c.target] = true;
    for (int l = 0; l < spec.lines; ++l) {
      char kind = spec.letters[l];
      if (kind == 'O') {
        if (!derived[l]) pt.lines[l].mu = sample_fundamental(rng, &cursor).value();
      } else if (kind == 'Z' || kind == 'X') {
        Quartet qu;
        qu.r = sample_fundamental(rng, &cursor);
        qu.s = sample_fundamental(rng, &cursor);
        qu.t = sample_fundamental(rng, &cursor);
        qu.w = sample_fundamental(rng, &cursor);
        pt.lines[l].quartet = qu;
      } else {
        throw std::invalid_argument("sample_parameter_point: unknown line kind");
      }
    }
    bool ok = true;
    for (const auto& c : spec.mu_constraints) {
      if (!pt.lines[c.source].mu) { ok = false; break; }
      pt.lines[c.target].mu =
          Scalar(c.sign) * pt.q.value().pow(c.qpow) * (*pt.lines[c.source].mu);
    }
    if (!ok) continue;
    // Degeneracy is excluded structurally by the prime pool; keep a cheap
    // backstop for the sampled q itself.
    const Scalar& q = pt.q.value();
    if (q.is_zero() || q.is_one() || q == Scalar(-1)) continue;
    return pt;
  }
  throw std::runtime_error("sample_parameter_point: resampling budget exhausted");
}

}  // namespace qtetra
