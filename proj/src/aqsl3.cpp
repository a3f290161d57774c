#include "qtetra/aqsl3.hpp"

#include <stdexcept>

namespace qtetra {

GeneratorImage rho_images(int which, const RhoParams& p, const Scalar& q) {
  if (p.u.is_zero() || p.g.is_zero() || p.h.is_zero())
    throw std::invalid_argument("rho_images: parameters must be nonzero");
  GeneratorImage img;  // all entries default to zero
  WeylElement corner = WeylElement::monomial(-1, 0, p.u);  // Z^{-1}(u - gh X^2)
  corner.add_term(-1, 2, -(p.g * p.h));
  WeylElement gx = WeylElement::monomial(0, 1, p.g);
  WeylElement qhx = WeylElement::monomial(0, 1, -(q * p.h));
  WeylElement z = WeylElement::monomial(1, 0, Scalar(1));
  WeylElement uinv = WeylElement::monomial(0, 0, p.u.inv());
  if (which == 1) {
    img[0][0] = corner;
    img[0][1] = gx;
    img[1][0] = qhx;
    img[1][1] = z;
    img[2][2] = uinv;
  } else if (which == 2) {
    img[0][0] = uinv;
    img[1][1] = corner;
    img[1][2] = gx;
    img[2][1] = qhx;
    img[2][2] = z;
  } else {
    throw std::invalid_argument("rho_images: which must be 1 or 2");
  }
  return img;
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

void expect(RepTag tag, const WeylElement& a, const WeylElement& b, long lo, long hi,
            const Scalar& q, const std::string& name, VerificationReport* rep) {
  ++rep->counts["relations"];
  if (!same_action(tag, a, b, lo, hi, q)) {
    Failure f;
    f.note = name;
    rep->failures.push_back(f);
  }
}

}  // namespace

VerificationReport check_coordinate_ring_relations(const GeneratorImage& img,
                                                   RepTag tag, long lo, long hi,
                                                   const Scalar& q) {
  VerificationReport rep;
  rep.suite = "aq-relations";
  rep.f_window = {lo, hi};
  auto t = [&](int i, int j) -> const WeylElement& { return img[i - 1][j - 1]; };
  auto mul = [&](const WeylElement& a, const WeylElement& b) { return weyl_mul(a, b, q); };

  // mixed commutators
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l) {
          if (k > l) {
            WeylElement comm = mul(t(i, k), t(j, l)) - mul(t(j, l), t(i, k));
            expect(tag, comm, WeylElement::zero(), lo, hi, q,
                   "commutator t" + std::to_string(i) + std::to_string(k) + ", t" +
                       std::to_string(j) + std::to_string(l),
                   &rep);
          } else if (k < l) {
            WeylElement comm = mul(t(i, k), t(j, l)) - mul(t(j, l), t(i, k));
            WeylElement rhs = mul(t(j, k), t(i, l)).scaled(q - q.inv());
            expect(tag, comm, rhs, lo, hi, q,
                   "twisted commutator t" + std::to_string(i) + std::to_string(k) +
                       ", t" + std::to_string(j) + std::to_string(l),
                   &rep);
          }
        }

  // column and row q-commutations
  for (int k = 1; k <= 3; ++k)
    for (int i = 1; i <= 3; ++i)
      for (int j = i + 1; j <= 3; ++j) {
        expect(tag, mul(t(i, k), t(j, k)), mul(t(j, k), t(i, k)).scaled(q), lo, hi, q,
               "column q-commutation", &rep);
        expect(tag, mul(t(k, i), t(k, j)), mul(t(k, j), t(k, i)).scaled(q), lo, hi, q,
               "row q-commutation", &rep);
      }

  // quantum determinant: signed sum over S3, sign (-q)^{length}
  struct Perm {
    int p[3];
    int len;
  };
  static const Perm perms[6] = {{{1, 2, 3}, 0}, {{2, 1, 3}, 1}, {{1, 3, 2}, 1},
                                {{2, 3, 1}, 2}, {{3, 1, 2}, 2}, {{3, 2, 1}, 3}};
  WeylElement det = WeylElement::zero();
  for (const auto& s : perms) {
    WeylElement term = mul(mul(t(1, s.p[0]), t(2, s.p[1])), t(3, s.p[2]));
    det = det + term.scaled((-q).pow(s.len));
  }
  expect(tag, det, WeylElement::one(), lo, hi, q, "quantum determinant", &rep);

  rep.sort_failures();
  return rep;
}

Composite coproduct_operator(const std::array<const GeneratorImage*, 3>& reps,
                             int l, int m, bool primed) {
  if (l < 1 || l > 3 || m < 1 || m > 3)
    throw std::invalid_argument("coproduct_operator: generator index out of range");
  Composite out;
  for (int j = 1; j <= 3; ++j)
    for (int k = 1; k <= 3; ++k) {
      // Delta t_{lm} sums t_{lj} (x) t_{jk} (x) t_{km}; the primed variant
      // conjugates by the order flip.
      const WeylElement& f1 =
          primed ? (*reps[0])[k - 1][m - 1] : (*reps[0])[l - 1][j - 1];
      const WeylElement& f2 = (*reps[1])[j - 1][k - 1];
      const WeylElement& f3 =
          primed ? (*reps[2])[l - 1][j - 1] : (*reps[2])[k - 1][m - 1];
      if (f1.is_zero() || f2.is_zero() || f3.is_zero()) continue;
      out.push_back({f1, f2, f3});
    }
  return out;
}

namespace {

void derive_zzz_quartets(IntertwinerConfig* cfg) {
  SqrtScalar lam = SqrtScalar::from_root(Scalar(3, 2));  // violation tweak
  auto tweak = [&](int which, const SqrtScalar& s) {
    return cfg->violated == which ? s * lam : s;
  };
  SqrtScalar r2 = tweak(1, cfg->r1 * cfg->t2 / cfg->t1);
  SqrtScalar s2 = tweak(2, cfg->s3 * cfg->t2 / cfg->t3);
  SqrtScalar r3 = tweak(3, r2 / (cfg->u * cfg->r1));
  SqrtScalar s1 = tweak(4, cfg->u.pow(2) * s2 / cfg->s3);
  SqrtScalar pu = cfg->p / cfg->u;
  cfg->Q1 = {cfg->r1, s1, cfg->t1, tweak(5, pu * cfg->r1 * s1 / cfg->t1.pow(2))};
  cfg->Q2 = {r2, s2, cfg->t2, tweak(6, pu * r2 * s2 / cfg->t2.pow(2))};
  cfg->Q3 = {r3, cfg->s3, cfg->t3, tweak(7, pu * r3 * cfg->s3 / cfg->t3.pow(2))};
  cfg->u1 = cfg->u.value();
  cfg->u2 = cfg->violated == 8 ? cfg->u.value() * lam.value() : cfg->u.value();
  cfg->g1 = cfg->p.value() / cfg->h1.value();
  cfg->g2 = cfg->violated == 9 ? lam.value() * cfg->p.value() / cfg->h2.value()
                               : cfg->p.value() / cfg->h2.value();
}

}  // namespace

IntertwinerConfig sample_intertwiner_config(IntertwinerConfig::Mode mode,
                                            std::uint64_t seed) {
  Rng rng(seed ^ 0xa17a17a17ull);
  int cursor = static_cast<int>(rng.next() % 24);
  IntertwinerConfig cfg;
  cfg.mode = mode;
  cfg.q = sample_q(rng);
  if (mode == IntertwinerConfig::Mode::OOO) {
    cfg.mu1 = sample_fundamental(rng, &cursor).value();
    cfg.mu2 = sample_fundamental(rng, &cursor).value();
    return cfg;
  }
  cfg.u = sample_fundamental(rng, &cursor);
  cfg.p = sample_fundamental(rng, &cursor);
  cfg.h1 = sample_fundamental(rng, &cursor);
  cfg.h2 = sample_fundamental(rng, &cursor);
  cfg.t1 = sample_fundamental(rng, &cursor);
  cfg.t2 = sample_fundamental(rng, &cursor);
  cfg.t3 = sample_fundamental(rng, &cursor);
  cfg.r1 = sample_fundamental(rng, &cursor);
  cfg.s3 = sample_fundamental(rng, &cursor);
  derive_zzz_quartets(&cfg);
  return cfg;
}

IntertwinerConfig sample_intertwiner_config_violated(std::uint64_t seed, int which) {
  if (which < 1 || which > 9)
    throw std::invalid_argument("sample_intertwiner_config_violated: which in 1..9");
  IntertwinerConfig cfg = sample_intertwiner_config(IntertwinerConfig::Mode::ZZZ, seed);
  cfg.violated = which;
  derive_zzz_quartets(&cfg);
  return cfg;
}

namespace {

struct IntertwinerSetup {
  RKernel kernel;
  GeneratorImage rho1, rho2;
  RepTag tag;
  RType rtype;
};

IntertwinerSetup build_setup(const IntertwinerConfig& cfg) {
  IntertwinerSetup s;
  const Scalar q = cfg.q.value();
  if (cfg.mode == IntertwinerConfig::Mode::OOO) {
    // The intertwiner of the tensor-product representations is the
    // parameter-free kernel: the mu-dependent one differs from it by the
    // diagonal gauge (mu1/mu2)^{i-k} and fails the relation verbatim.
    s.kernel = make_ooo(cfg.q, Scalar(1), Scalar(1), Scalar(1));
    s.rho1 = rho_images(1, {Scalar(1), cfg.mu1, cfg.mu1.inv()}, q);
    s.rho2 = rho_images(2, {Scalar(1), cfg.mu2, cfg.mu2.inv()}, q);
    s.tag = RepTag::O;
    s.rtype = RType::OOO;
  } else {
    s.kernel = make_zzz(cfg.q, cfg.Q1, cfg.Q2, cfg.Q3);
    s.rho1 = rho_images(1, {cfg.u1, cfg.g1, cfg.h1.value()}, q);
    s.rho2 = rho_images(2, {cfg.u2, cfg.g2, cfg.h2.value()}, q);
    s.tag = RepTag::ZPlus;
    s.rtype = RType::ZZZ;
  }
  return s;
}

}  // namespace

VerificationReport intertwiner_check(const IntertwinerConfig& cfg, const Window& w) {
  VerificationReport rep;
  rep.suite = "intertwiner";
  rep.type = cfg.mode == IntertwinerConfig::Mode::OOO ? "OOO" : "ZZZ";
  rep.f_window = {w.f_lo, w.f_hi};
  rep.fp_window = {w.fp_lo, w.fp_hi};
  rep.params["q"] = cfg.q.value().str();

  IntertwinerSetup s = build_setup(cfg);
  const Scalar q = cfg.q.value();
  std::array<RepTag, 3> tags{s.tag, s.tag, s.tag};
  std::array<const GeneratorImage*, 3> reps_prime{&s.rho1, &s.rho2, &s.rho1};
  std::array<const GeneratorImage*, 3> reps_plain{&s.rho2, &s.rho1, &s.rho2};

  ElementCache cache(&s.kernel);
  std::vector<Triple> triples = window_triples(s.rtype, w);
  long pairs = 0;
  for (int l = 1; l <= 3; ++l)
    for (int m = 1; m <= 3; ++m) {
      Composite opp = coproduct_operator(reps_prime, l, m, true);
      Composite op = coproduct_operator(reps_plain, l, m, false);
      std::vector<TripleVector> fwd(triples.size()), bwd(triples.size());
      for (std::size_t n = 0; n < triples.size(); ++n) {
        fwd[n] = comp_apply(opp, tags, triples[n], q);
        bwd[n] = comp_apply_transposed(op, tags, triples[n], q);
      }
      for (std::size_t oi = 0; oi < triples.size(); ++oi)
        for (std::size_t ni = 0; ni < triples.size(); ++ni) {
          ++pairs;
          Scalar lhs(0), rhs(0);
          for (const auto& [mid, c] : fwd[ni]) lhs += cache.get(triples[oi], mid) * c;
          for (const auto& [mid, c] : bwd[oi]) rhs += c * cache.get(mid, triples[ni]);
          if (lhs != rhs) {
            Failure f;
            f.vidx = {l, m};
            f.out = {triples[oi][0], triples[oi][1], triples[oi][2]};
            f.in = {triples[ni][0], triples[ni][1], triples[ni][2]};
            f.lhs = lhs.str();
            f.rhs = rhs.str();
            rep.failures.push_back(f);
          }
        }
    }
  rep.counts["generators"] = 9;
  rep.counts["pairs"] = pairs;
  rep.sort_failures();
  return rep;
}

VerificationReport prop41_constant_check(const IntertwinerConfig& cfg) {
  if (cfg.mode != IntertwinerConfig::Mode::ZZZ)
    throw std::invalid_argument("prop41_constant_check: ZZZ mode only");
  VerificationReport rep;
  rep.suite = "coproduct-constants";
  rep.type = "ZZZ";
  rep.params["q"] = cfg.q.value().str();

  IntertwinerSetup s = build_setup(cfg);
  const Scalar q = cfg.q.value();
  const Scalar u = cfg.u1;
  const Scalar p = cfg.g1 * cfg.h1.value();
  const Scalar h1 = cfg.h1.value(), h2 = cfg.h2.value();
  const Scalar r1 = cfg.Q1.r.value(), r2 = cfg.Q2.r.value(), r3 = cfg.Q3.r.value();
  const Scalar s2v = cfg.Q2.s.value();
  const Scalar t1 = cfg.Q1.t.value(), t2 = cfg.Q2.t.value(), t3 = cfg.Q3.t.value();
  const Scalar w1 = cfg.Q1.w.value(), w2 = cfg.Q2.w.value();

  // Constants tying the represented coproducts to the composites; they obey
  // A_{lm} = (-q)^{l-m} B_{lm}.
  std::array<std::array<Scalar, 3>, 3> B, A;
  B[0][0] = (r2 * r2 * s2v).inv();
  B[0][1] = p * u / (h1 * r2 * s2v * t3);
  B[0][2] = p * p / (h1 * h2 * u * r1 * t2 * t3);
  B[1][0] = h1 * t3 / (p * r2 * r2 * s2v);
  B[1][1] = u / (r2 * s2v);
  B[1][2] = p / (h2 * r2 * t1 * u);
  B[2][0] = h1 * h2 / (u * t1 * w1 * t2 * w2 * r3);
  B[2][1] = h2 * t1 * u / (p * r2 * s2v);
  B[2][2] = (r2 * u).inv();
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m) A[l][m] = (-q).pow(l - m) * B[l][m];

  // index correspondence tables
  static const std::array<std::array<int, 3>, 3> l_abc = {{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}};
  static const std::array<std::array<int, 3>, 3> l_ijk_p = {{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}};
  static const std::array<std::array<int, 3>, 3> m_ijk = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  static const std::array<std::array<int, 3>, 3> m_abc_p = {{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}};

  auto lz = [&](const Quartet& Q) {
    return build_L(RepTag::ZPlus, Q.r.value(), Q.s.value(), Q.t.value(), Q.w.value(), q);
  };
  auto lz_sub = [&](const Quartet& Q) {  // r <-> s, t -> tw, w -> w^{-1}
    return build_L(RepTag::ZPlus, Q.s.value(), Q.r.value(), Q.t.value() * Q.w.value(),
                   Q.w.value().inv(), q);
  };
  LOperator L1 = lz(cfg.Q1), L2 = lz(cfg.Q2), L3 = lz(cfg.Q3);
  LOperator M1 = lz_sub(cfg.Q1), M2 = lz_sub(cfg.Q2), M3 = lz_sub(cfg.Q3);

  std::array<const GeneratorImage*, 3> reps_prime{&s.rho1, &s.rho2, &s.rho1};
  std::array<const GeneratorImage*, 3> reps_plain{&s.rho2, &s.rho1, &s.rho2};

  auto scaled_expand = [&](Composite comp, const Scalar& c) {
    for (auto& term : comp) term.f1 = term.f1.scaled(c);
    return expand_composite(comp);
  };
  auto check = [&](const std::string& name, const std::map<TensorMonomial, Scalar>& lhs,
                   const std::map<TensorMonomial, Scalar>& rhs) {
    ++rep.counts["identities"];
    if (lhs != rhs) {
      Failure f;
      f.note = name;
      rep.failures.push_back(f);
    }
  };

  for (int l = 1; l <= 3; ++l)
    for (int m = 1; m <= 3; ++m) {
      VIdx v{l_abc[l - 1][0], l_abc[l - 1][1], l_abc[l - 1][2],
             m_ijk[m - 1][0], m_ijk[m - 1][1], m_ijk[m - 1][2]};
      // The substituted composites carry the complemented weight-2 labels:
      // out is the complement of m's in-triple, in the complement of l's
      // out-triple (the transposed reading forced by the inverse relation).
      VIdx vp{l_ijk_p[m - 1][0], l_ijk_p[m - 1][1], l_ijk_p[m - 1][2],
              m_abc_p[l - 1][0], m_abc_p[l - 1][1], m_abc_p[l - 1][2]};
      auto dp = expand_composite(coproduct_operator(reps_prime, l, m, true));
      auto dd = expand_composite(coproduct_operator(reps_plain, l, m, false));
      std::string nm = "t" + std::to_string(l) + std::to_string(m);
      check(nm + ": primed = A * left composite", dp,
            scaled_expand(composite_left(L1, L2, L3, v), A[l - 1][m - 1]));
      check(nm + ": primed = B * substituted right composite", dp,
            scaled_expand(composite_right(M1, M2, M3, vp), B[l - 1][m - 1]));
      check(nm + ": plain = A * right composite", dd,
            scaled_expand(composite_right(L1, L2, L3, v), A[l - 1][m - 1]));
      check(nm + ": plain = B * substituted left composite", dd,
            scaled_expand(composite_left(M1, M2, M3, vp), B[l - 1][m - 1]));
    }
  rep.sort_failures();
  return rep;
}

}  // namespace qtetra
