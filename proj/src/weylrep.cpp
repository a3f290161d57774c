#include "qtetra/weylrep.hpp"

#include <stdexcept>

namespace qtetra {

WeylElement WeylElement::monomial(long zexp, long xexp, Scalar c) {
  WeylElement e;
  e.add_term(zexp, xexp, c);
  return e;
}

void WeylElement::add_term(long zexp, long xexp, const Scalar& c) {
  if (c.is_zero()) return;
  Key k{zexp, xexp};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

WeylElement WeylElement::operator+(const WeylElement& o) const {
  WeylElement out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k.first, k.second, c);
  return out;
}

WeylElement WeylElement::operator-(const WeylElement& o) const {
  WeylElement out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k.first, k.second, -c);
  return out;
}

WeylElement WeylElement::scaled(const Scalar& c) const {
  WeylElement out;
  for (const auto& [k, v] : terms_) out.add_term(k.first, k.second, v * c);
  return out;
}

WeylElement weyl_mul(const WeylElement& a, const WeylElement& b, const Scalar& q) {
  WeylElement out;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      // (Z^a1 X^b1)(Z^a2 X^b2) = q^{b1 a2} Z^{a1+a2} X^{b1+b2}
      long cross = ka.second * kb.first;
      out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb * q.pow(cross));
    }
  }
  return out;
}

WeylElement embed_oscillator(OscGen g) {
  switch (g) {
    case OscGen::K:
      return WeylElement::monomial(0, 1, Scalar(1));
    case OscGen::APlus:
      return WeylElement::monomial(1, 0, Scalar(1));
    case OscGen::AMinus: {
      WeylElement e = WeylElement::monomial(-1, 0, Scalar(1));
      e.add_term(-1, 2, Scalar(-1));
      return e;
    }
  }
  throw std::logic_error("embed_oscillator: bad generator");
}

namespace {

// Single-monomial action: Z^a X^b |m> under each representation.
//   ZPlus : q^{a(m-b)} |m-b>
//   ZMinus: q^{-a(m+b)} |m+b>
//   X, O  : q^{bm} |m+a>
void monomial_action(RepTag tag, long a, long b, long m, const Scalar& q,
                     long* out_index, Scalar* out_coeff) {
  switch (tag) {
    case RepTag::ZPlus:
      *out_index = m - b;
      *out_coeff = q.pow(a * (m - b));
      return;
    case RepTag::ZMinus:
      *out_index = m + b;
      *out_coeff = q.pow(-a * (m + b));
      return;
    case RepTag::X:
    case RepTag::O:
      *out_index = m + a;
      *out_coeff = q.pow(b * m);
      return;
  }
  throw std::logic_error("monomial_action: bad tag");
}

}  // namespace

std::vector<std::pair<long, Scalar>> act_basis(RepTag tag, const WeylElement& e,
                                               long m, const Scalar& q) {
  if (tag == RepTag::O && m < 0)
    throw std::domain_error("act_basis: O-line basis index must be nonnegative");
  std::map<long, Scalar> acc;
  for (const auto& [k, c] : e.terms()) {
    long idx;
    Scalar coeff;
    monomial_action(tag, k.first, k.second, m, q, &idx, &coeff);
    auto it = acc.find(idx);
    if (it == acc.end())
      acc.emplace(idx, c * coeff);
    else {
      it->second += c * coeff;
      if (it->second.is_zero()) acc.erase(it);
    }
  }
  if (tag == RepTag::O) {
    for (const auto& [idx, c] : acc)
      if (idx < 0)
        throw std::domain_error("act_basis: element leaves the oscillator subspace");
  }
  return {acc.begin(), acc.end()};
}

std::vector<std::pair<long, Scalar>> act_basis_transposed(RepTag tag,
                                                          const WeylElement& e,
                                                          long m_out, const Scalar& q) {
  std::map<long, Scalar> acc;
  for (const auto& [k, c] : e.terms()) {
    // Preimage m with monomial sending |m> to |m_out>.
    long m;
    switch (tag) {
      case RepTag::ZPlus:
        m = m_out + k.second;
        break;
      case RepTag::ZMinus:
        m = m_out - k.second;
        break;
      case RepTag::X:
      case RepTag::O:
        m = m_out - k.first;
        break;
      default:
        throw std::logic_error("act_basis_transposed: bad tag");
    }
    if (tag == RepTag::O && m < 0) continue;  // no such basis vector on F+
    long idx;
    Scalar coeff;
    monomial_action(tag, k.first, k.second, m, q, &idx, &coeff);
    if (idx != m_out) throw std::logic_error("act_basis_transposed: shift mismatch");
    auto it = acc.find(m);
    if (it == acc.end())
      acc.emplace(m, c * coeff);
    else {
      it->second += c * coeff;
      if (it->second.is_zero()) acc.erase(it);
    }
  }
  return {acc.begin(), acc.end()};
}

StateVector apply_rep(RepTag tag, const WeylElement& e, const StateVector& v,
                      const Scalar& q) {
  StateVector out;
  for (const auto& [m, cv] : v) {
    for (const auto& [idx, c] : act_basis(tag, e, m, q)) {
      auto it = out.find(idx);
      if (it == out.end())
        out.emplace(idx, c * cv);
      else {
        it->second += c * cv;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

namespace {

bool same_action(RepTag tag, const WeylElement& a, const WeylElement& b, long lo,
                 long hi, const Scalar& q) {
  for (long m = lo; m <= hi; ++m) {
    if (tag == RepTag::O && m < 0) continue;
    if (act_basis(tag, a, m, q) != act_basis(tag, b, m, q)) return false;
  }
  return true;
}

void check_equal(RepTag tag, const WeylElement& a, const WeylElement& b, long lo,
                 long hi, const Scalar& q, const std::string& name,
                 VerificationReport* rep) {
  ++rep->counts["relations"];
  if (!same_action(tag, a, b, lo, hi, q)) {
    Failure f;
    f.note = name;
    rep->failures.push_back(f);
  }
}

}  // namespace

VerificationReport check_algebra_relations(RepTag tag, long lo, long hi, const Scalar& q) {
  if (lo > hi) throw std::invalid_argument("check_algebra_relations: empty window");
  VerificationReport rep;
  rep.suite = "algebra-relations";
  rep.f_window = {lo, hi};
  rep.fp_window = {std::max(lo, 0L), hi};
  const WeylElement X = WeylElement::monomial(0, 1, Scalar(1));
  const WeylElement Z = WeylElement::monomial(1, 0, Scalar(1));
  if (tag == RepTag::O) {
    rep.type = "O";
    const WeylElement k = embed_oscillator(OscGen::K);
    const WeylElement ap = embed_oscillator(OscGen::APlus);
    const WeylElement am = embed_oscillator(OscGen::AMinus);
    const Scalar q2 = q * q;
    WeylElement one = WeylElement::one();
    WeylElement k2 = weyl_mul(k, k, q);
    check_equal(tag, weyl_mul(k, ap, q), weyl_mul(ap, k, q).scaled(q), lo, hi, q,
                "k a+ = q a+ k", &rep);
    check_equal(tag, weyl_mul(k, am, q).scaled(q), weyl_mul(am, k, q), lo, hi, q,
                "k a- = q^{-1} a- k", &rep);
    check_equal(tag, weyl_mul(am, ap, q), one - k2.scaled(q2), lo, hi, q,
                "a- a+ = 1 - q^2 k^2", &rep);
    check_equal(tag, weyl_mul(ap, am, q), one - k2, lo, hi, q, "a+ a- = 1 - k^2", &rep);
  } else {
    rep.type = (tag == RepTag::ZPlus) ? "Z+" : (tag == RepTag::ZMinus ? "Z-" : "X");
    check_equal(tag, weyl_mul(X, Z, q), weyl_mul(Z, X, q).scaled(q), lo, hi, q,
                "XZ = qZX", &rep);
    check_equal(tag, weyl_mul(X, WeylElement::monomial(0, -1, Scalar(1)), q),
                WeylElement::one(), lo, hi, q, "X X^{-1} = 1", &rep);
    check_equal(tag, weyl_mul(Z, WeylElement::monomial(-1, 0, Scalar(1)), q),
                WeylElement::one(), lo, hi, q, "Z Z^{-1} = 1", &rep);
  }
  rep.sort_failures();
  return rep;
}

}  // namespace qtetra
