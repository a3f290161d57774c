#include "qtetra/lops.hpp"

#include <stdexcept>

namespace qtetra {

LOperator build_L(RepTag tag, const Scalar& r, const Scalar& s, const Scalar& t,
                  const Scalar& w, const Scalar& q) {
  if (tag == RepTag::O)
    throw std::invalid_argument("build_L: use build_L_osc for oscillator lines");
  if (r.is_zero() || s.is_zero() || t.is_zero() || w.is_zero())
    throw std::invalid_argument("build_L: degenerate parameters");
  LOperator L;
  L.tag = tag;
  L.r = r;
  L.s = s;
  L.t = t;
  L.w = w;
  L.entries[0][0][0][0] = WeylElement::monomial(0, 0, r);
  L.entries[1][1][1][1] = WeylElement::monomial(0, 0, s);
  L.entries[1][0][1][0] = WeylElement::monomial(0, 1, t * w);
  L.entries[0][1][0][1] = WeylElement::monomial(0, 1, -(q * t));
  L.entries[1][0][0][1] = WeylElement::monomial(1, 0, Scalar(1));
  WeylElement y = WeylElement::monomial(-1, 0, r * s);
  y.add_term(-1, 2, -(t * t * w));
  L.entries[0][1][1][0] = y;
  return L;
}

LOperator build_L_osc(const Scalar& mu, const Scalar& q) {
  if (mu.is_zero()) throw std::invalid_argument("build_L_osc: mu must be nonzero");
  LOperator L = build_L(RepTag::X, Scalar(1), Scalar(1), mu.inv(), mu * mu, q);
  L.tag = RepTag::O;
  L.mu = mu;
  return L;
}

LOperator invert_L(const LOperator& L, const Scalar& q) {
  if (L.tag == RepTag::O) return build_L_osc(L.mu->inv(), q);
  Scalar rs = L.r * L.s;
  if (rs.is_zero()) throw std::domain_error("invert_L: rs = 0");
  LOperator inv = build_L(L.tag, L.s, L.r, L.t * L.w, L.w.inv(), q);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          inv.entries[a][b][i][j] = inv.entries[a][b][i][j].scaled(rs.inv());
  return inv;
}

Composite composite_left(const LOperator& L1, const LOperator& L2,
                         const LOperator& L3, const VIdx& v) {
  Composite out;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int ga = 0; ga < 2; ++ga) {
        const WeylElement& f1 = L1.entry(al, be, v.i, v.j);
        if (f1.is_zero()) continue;
        const WeylElement& f2 = L2.entry(v.a, ga, al, v.k);
        if (f2.is_zero()) continue;
        const WeylElement& f3 = L3.entry(v.b, v.c, be, ga);
        if (f3.is_zero()) continue;
        out.push_back({f1, f2, f3});
      }
  return out;
}

Composite composite_right(const LOperator& L1, const LOperator& L2,
                          const LOperator& L3, const VIdx& v) {
  Composite out;
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int ga = 0; ga < 2; ++ga) {
        const WeylElement& f1 = L1.entry(v.a, v.b, al, be);
        if (f1.is_zero()) continue;
        const WeylElement& f2 = L2.entry(al, v.c, v.i, ga);
        if (f2.is_zero()) continue;
        const WeylElement& f3 = L3.entry(be, ga, v.j, v.k);
        if (f3.is_zero()) continue;
        out.push_back({f1, f2, f3});
      }
  return out;
}

namespace {

void accumulate(TripleVector* acc, const Triple& t, const Scalar& c) {
  auto it = acc->find(t);
  if (it == acc->end()) {
    acc->emplace(t, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) acc->erase(it);
  }
}

}  // namespace

TripleVector comp_apply(const Composite& comp, const std::array<RepTag, 3>& tags,
                        const Triple& in, const Scalar& q) {
  TripleVector acc;
  for (const auto& term : comp) {
    auto v1 = act_basis(tags[0], term.f1, in[0], q);
    auto v2 = act_basis(tags[1], term.f2, in[1], q);
    auto v3 = act_basis(tags[2], term.f3, in[2], q);
    for (const auto& [m1, c1] : v1)
      for (const auto& [m2, c2] : v2)
        for (const auto& [m3, c3] : v3)
          accumulate(&acc, Triple{m1, m2, m3}, c1 * c2 * c3);
  }
  return acc;
}

TripleVector comp_apply_transposed(const Composite& comp,
                                   const std::array<RepTag, 3>& tags,
                                   const Triple& out, const Scalar& q) {
  TripleVector acc;
  for (const auto& term : comp) {
    auto v1 = act_basis_transposed(tags[0], term.f1, out[0], q);
    auto v2 = act_basis_transposed(tags[1], term.f2, out[1], q);
    auto v3 = act_basis_transposed(tags[2], term.f3, out[2], q);
    for (const auto& [m1, c1] : v1)
      for (const auto& [m2, c2] : v2)
        for (const auto& [m3, c3] : v3)
          accumulate(&acc, Triple{m1, m2, m3}, c1 * c2 * c3);
  }
  return acc;
}

std::map<TensorMonomial, Scalar> expand_composite(const Composite& comp) {
  std::map<TensorMonomial, Scalar> acc;
  for (const auto& term : comp) {
    for (const auto& [k1, c1] : term.f1.terms())
      for (const auto& [k2, c2] : term.f2.terms())
        for (const auto& [k3, c3] : term.f3.terms()) {
          TensorMonomial key{k1, k2, k3};
          auto it = acc.find(key);
          Scalar c = c1 * c2 * c3;
          if (it == acc.end()) {
            acc.emplace(key, c);
          } else {
            it->second += c;
            if (it->second.is_zero()) acc.erase(it);
          }
        }
  }
  return acc;
}

std::vector<VIdx> conserving_vidx(bool include_trivial) {
  std::vector<VIdx> out;
  for (int m = 0; m < 64; ++m) {
    VIdx v{(m >> 5) & 1, (m >> 4) & 1, (m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1};
    if (v.a + v.b + v.c != v.i + v.j + v.k) continue;
    bool trivial = (v.a + v.b + v.c == 0) || (v.a + v.b + v.c == 3);
    if (trivial && !include_trivial) continue;
    out.push_back(v);
  }
  return out;
}

int conservation_audit_total() { return static_cast<int>(conserving_vidx(true).size()); }

int conservation_audit_nontrivial() {
  return static_cast<int>(conserving_vidx(false).size());
}

}  // namespace qtetra
