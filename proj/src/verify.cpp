#include "qtetra/verify.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>

namespace qtetra {

std::vector<Triple> window_triples(RType type, const Window& w) {
  auto plus = plus_slots(type);
  auto [lo1, hi1] = w.line_range(plus[0]);
  auto [lo2, hi2] = w.line_range(plus[1]);
  auto [lo3, hi3] = w.line_range(plus[2]);
  std::vector<Triple> out;
  out.reserve((hi1 - lo1 + 1) * (hi2 - lo2 + 1) * (hi3 - lo3 + 1));
  for (long x = lo1; x <= hi1; ++x)
    for (long y = lo2; y <= hi2; ++y)
      for (long z = lo3; z <= hi3; ++z) out.push_back({x, y, z});
  return out;
}

namespace {

ConstraintSpec spec_for(RType type, long d) {
  ConstraintSpec cs;
  cs.lines = 3;
  auto l = type_letters(type);
  cs.letters = std::string{l[0], l[1], l[2]};
  switch (type) {
    case RType::OOZ:
      cs.mu_constraints.push_back({0, 1, d, 1});
      break;
    case RType::ZOO:
      cs.mu_constraints.push_back({2, 1, d, 1});
      break;
    case RType::OZO:
      cs.mu_constraints.push_back({0, 2, d, -1});
      break;
    default:
      break;
  }
  return cs;
}

RKernel kernel_from_point(RType type, const SqrtScalar& q, const ParameterPoint& pt,
                          const std::array<Scalar, 2>& free_const) {
  auto qt = [&](int i) -> const Quartet& { return *pt.lines[i].quartet; };
  auto mu = [&](int i) -> const Scalar& { return *pt.lines[i].mu; };
  switch (type) {
    case RType::ZZZ: return make_zzz(q, qt(0), qt(1), qt(2));
    case RType::OZZ: return make_ozz(q, mu(0), qt(1), qt(2));
    case RType::ZZO: return make_zzo(q, qt(0), qt(1), mu(2));
    case RType::ZOZ: return make_zoz(q, qt(0), mu(1), qt(2));
    case RType::OOZ: return make_ooz(q, mu(0), mu(1), qt(2));
    case RType::ZOO: return make_zoo(q, qt(0), mu(1), mu(2));
    case RType::OZO: return make_ozo(q, mu(0), qt(1), mu(2));
    case RType::OOO: return make_ooo(q, mu(0), mu(1), mu(2));
    case RType::XXZ: {
      RKernel k = make_xxz(q, qt(0), qt(1), qt(2));
      k.free_const = free_const;
      return k;
    }
    case RType::ZXX: {
      RKernel k = make_zxx(q, qt(0), qt(1), qt(2));
      k.free_const = free_const;
      return k;
    }
    case RType::XZX: {
      RKernel k = make_xzx(q, qt(0), qt(1), qt(2));
      k.free_const = free_const;
      return k;
    }
  }
  throw std::logic_error("kernel_from_point: bad type");
}

LOperator line_op(char letter, const LineParams& lp, const Scalar& q) {
  if (letter == 'O') return build_L_osc(*lp.mu, q);
  RepTag tag = letter == 'X' ? RepTag::X : RepTag::ZPlus;
  const Quartet& Q = *lp.quartet;
  return build_L(tag, Q.r.value(), Q.s.value(), Q.t.value(), Q.w.value(), q);
}

void fill_params(const RlllSystem& sys, VerificationReport* rep) {
  rep->params["q"] = sys.q.value().str();
  auto letters = type_letters(sys.type);
  for (int i = 0; i < 3; ++i) {
    std::string p = std::to_string(i + 1);
    if (letters[i] == 'O') {
      rep->params["mu" + p] = sys.point.lines[i].mu->str();
    } else {
      const Quartet& Q = *sys.point.lines[i].quartet;
      rep->params["r" + p] = Q.r.value().str();
      rep->params["s" + p] = Q.s.value().str();
      rep->params["t" + p] = Q.t.value().str();
      rep->params["w" + p] = Q.w.value().str();
    }
  }
  if (sys.type == RType::OOZ || sys.type == RType::ZOO || sys.type == RType::OZO)
    rep->params["d"] = std::to_string(sys.kernel.d);
}

}  // namespace

RlllSystem make_rlll_system(RType type, std::uint64_t seed, Fault fault) {
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 17);
  long d = rng.uniform(-2, 2);
  ParameterPoint pt = sample_parameter_point(seed, spec_for(type, d));
  RlllSystem sys;
  sys.type = type;
  sys.q = pt.q;
  sys.point = pt;
  sys.tags = line_tags(type);
  auto letters = type_letters(type);
  for (int i = 0; i < 3; ++i) sys.L[i] = line_op(letters[i], pt.lines[i], pt.q.value());
  sys.kernel = kernel_from_point(type, pt.q, pt, {Scalar(1), Scalar(1)});
  sys.kernel.fault = fault;
  return sys;
}

RlllSystem make_system_from_kernel(const RKernel& kernel) {
  RlllSystem sys;
  sys.type = kernel.type;
  sys.q = kernel.q;
  sys.tags = line_tags(kernel.type);
  auto letters = type_letters(kernel.type);
  sys.point.q = kernel.q;
  sys.point.lines.resize(3);
  for (int i = 0; i < 3; ++i) {
    LineParams lp;
    lp.quartet = kernel.quartet[i];
    lp.mu = kernel.mu[i];
    sys.point.lines[i] = lp;
    sys.L[i] = line_op(letters[i], lp, kernel.q.value());
  }
  sys.kernel = kernel;
  return sys;
}

std::pair<Scalar, Scalar> rlll_check_pair(const RlllSystem& sys, const VIdx& v,
                                          const Triple& out, const Triple& in) {
  if (v.a + v.b + v.c != v.i + v.j + v.k)
    throw std::invalid_argument("rlll_check_pair: v-indices must conserve weight");
  const Scalar& q = sys.q.value();
  Composite left = composite_left(sys.L[0], sys.L[1], sys.L[2], v);
  Composite right = composite_right(sys.L[0], sys.L[1], sys.L[2], v);
  Scalar lhs(0), rhs(0);
  for (const auto& [mid, c] : comp_apply(left, sys.tags, in, q))
    lhs += r_element(sys.kernel, out, mid) * c;
  for (const auto& [mid, c] : comp_apply_transposed(right, sys.tags, out, q))
    rhs += c * r_element(sys.kernel, mid, in);
  return {lhs, rhs};
}

namespace {

VerificationReport sweep_impl(const RlllSystem& sys, const Window& w,
                              const ElementFn* custom) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.suite = "rlll";
  rep.type = type_name(sys.type);
  rep.f_window = {w.f_lo, w.f_hi};
  rep.fp_window = {w.fp_lo, w.fp_hi};
  fill_params(sys, &rep);

  const Scalar& q = sys.q.value();
  ElementCache cache(&sys.kernel);
  auto elem = [&](const Triple& o, const Triple& n) -> Scalar {
    if (custom) return (*custom)(o, n);
    return cache.get(o, n);
  };

  std::vector<Triple> triples = window_triples(sys.type, w);
  auto tuples = conserving_vidx(false);
  rep.counts["relations"] = static_cast<long>(tuples.size());
  long pairs = 0, evals = 0;
  for (const VIdx& v : tuples) {
    Composite left = composite_left(sys.L[0], sys.L[1], sys.L[2], v);
    Composite right = composite_right(sys.L[0], sys.L[1], sys.L[2], v);
    std::vector<TripleVector> fwd(triples.size()), bwd(triples.size());
    for (std::size_t n = 0; n < triples.size(); ++n) {
      fwd[n] = comp_apply(left, sys.tags, triples[n], q);
      bwd[n] = comp_apply_transposed(right, sys.tags, triples[n], q);
    }
    for (std::size_t oi = 0; oi < triples.size(); ++oi) {
      const Triple& out = triples[oi];
      for (std::size_t ni = 0; ni < triples.size(); ++ni) {
        const Triple& in = triples[ni];
        ++pairs;
        Scalar lhs(0), rhs(0);
        for (const auto& [mid, c] : fwd[ni]) {
          lhs += elem(out, mid) * c;
          ++evals;
        }
        for (const auto& [mid, c] : bwd[oi]) {
          rhs += c * elem(mid, in);
          ++evals;
        }
        if (lhs != rhs) {
          Failure f;
          f.vidx = {v.a, v.b, v.c, v.i, v.j, v.k};
          f.out = {out[0], out[1], out[2]};
          f.in = {in[0], in[1], in[2]};
          f.lhs = lhs.str();
          f.rhs = rhs.str();
          rep.failures.push_back(f);
        }
      }
    }
  }
  rep.counts["pairs"] = pairs;
  rep.counts["evaluations"] = evals;
  rep.sort_failures();
  rep.elapsed_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                         std::chrono::steady_clock::now() - t0)
                                         .count());
  return rep;
}

}  // namespace

VerificationReport rlll_sweep(const RlllSystem& sys, const Window& w) {
  return sweep_impl(sys, w, nullptr);
}

VerificationReport rlll_sweep_custom(const RlllSystem& sys, const Window& w,
                                     const ElementFn& elem) {
  return sweep_impl(sys, w, &elem);
}

Scalar recursion_oracle_zzz(const SqrtScalar& qw, const Quartet& Q1, const Quartet& Q2,
                            const Quartet& Q3, const Triple& out, const Triple& in) {
  const Scalar q = qw.value();
  const Scalar q2 = q * q;
  const Scalar r1 = Q1.r.value(), s1 = Q1.s.value(), t1 = Q1.t.value(), w1 = Q1.w.value();
  const Scalar r2 = Q2.r.value(), s2 = Q2.s.value(), t2 = Q2.t.value(), w2 = Q2.w.value();
  const Scalar r3 = Q3.r.value(), s3 = Q3.s.value(), t3 = Q3.t.value(), w3 = Q3.w.value();

  long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  Scalar acc(1);

  // Clear b, c, k in one step.
  acc *= q.pow((c + i - j) * (c - k)) * (t1 * t3 * w3 / s2).pow(k - c) /
         qpoch(q.pow(b - i - k) * s1 * s3 / s2, q2, k - c);
  long na = a - b + c;
  long ni = i - k - b + 2 * c;
  long nj = j - b;
  a = na;
  i = ni;
  j = nj;
  b = c = k = 0;

  // Step a -> 0 along (a, j) -> (a-1, j-1).
  auto f_a = [&](long aa, long ii, long jj) {
    return q.pow(ii) * (t2 * w2 / (s3 * t1 * w1)) *
           (Scalar(1) - q.pow(aa - ii + jj - 2) * r1 * w3 / (s1 * w2)) /
           (Scalar(1) - q.pow(2 * jj - 2) * r1 * r3 * w3 / (s1 * s3 * w1));
  };
  while (a > 0) {
    acc *= f_a(a, i, j);
    --a;
    --j;
  }
  while (a < 0) {
    acc /= f_a(a + 1, i, j + 1);
    ++a;
    ++j;
  }

  // Step j down to its parity along (i, j) -> (i, j-2).
  auto f_j = [&](long ii, long jj) {
    return q.pow(2 + ii) * (t2 * t2 * w2 / (r2 * s1 * s3)) *
           (Scalar(1) - q.pow(jj - 2 + ii) * r3 * w2 / (s3 * w1)) *
           (Scalar(1) - q.pow(jj - 2 - ii) * r1 * w3 / (s1 * w2)) /
           ((Scalar(1) - q.pow(jj) * r1 * r3 / r2) *
            (Scalar(1) - q.pow(2 * jj - 2) * r1 * r3 * w3 / (s1 * s3 * w1)) *
            (Scalar(1) - q.pow(2 * jj - 4) * r1 * r3 * w3 / (s1 * s3 * w1)));
  };
  while (j >= 2) {
    acc *= f_j(i, j);
    j -= 2;
  }
  while (j < 0) {
    acc /= f_j(i, j + 2);
    j += 2;
  }

  // Step i down to its parity along (i, j) -> (i-2, j).
  auto f_i = [&](long ii, long jj) {
    return q.pow(-2 * ii + jj + 2) * (s3 * t1 * t1 * w1 * w3 / (s1 * s2 * w2)) *
           (Scalar(1) - q.pow(ii + jj - 2) * r3 * w2 / (s3 * w1)) /
           ((Scalar(1) - q.pow(-ii) * s1 * s3 / s2) *
            (Scalar(1) - q.pow(-ii + jj) * r1 * w3 / (s1 * w2)));
  };
  while (i >= 2) {
    acc *= f_i(i, j);
    i -= 2;
  }
  while (i < 0) {
    acc /= f_i(i + 2, j);
    i += 2;
  }

  // Now at R^{0,0,0}_{p2,p1,0}; all four seeds are 1.
  return acc;
}

VerificationReport sector_coupling_audit(const RlllSystem& sys, const Window& w,
                                         int sample_pairs, std::uint64_t seed) {
  VerificationReport rep;
  rep.suite = "sector-coupling";
  rep.type = type_name(sys.type);
  rep.seed = seed;
  rep.f_window = {w.f_lo, w.f_hi};
  rep.fp_window = {w.fp_lo, w.fp_hi};
  if (!parity_functional(sys.type, {0, 0, 0}, {0, 0, 0})) {
    rep.counts["relations"] = 0;  // single-sector type, nothing to audit
    return rep;
  }
  Rng rng(seed);
  const Scalar& q = sys.q.value();
  std::vector<Triple> triples = window_triples(sys.type, w);
  auto tuples = conserving_vidx(false);
  long checked = 0;
  for (const VIdx& v : tuples) {
    Composite left = composite_left(sys.L[0], sys.L[1], sys.L[2], v);
    Composite right = composite_right(sys.L[0], sys.L[1], sys.L[2], v);
    for (int s = 0; s < sample_pairs; ++s) {
      const Triple& in = triples[rng.next() % triples.size()];
      const Triple& out = triples[rng.next() % triples.size()];
      std::set<long> values;
      for (const auto& [mid, c] : comp_apply(left, sys.tags, in, q))
        values.insert(*parity_functional(sys.type, out, mid));
      for (const auto& [mid, c] : comp_apply_transposed(right, sys.tags, out, q))
        values.insert(*parity_functional(sys.type, mid, in));
      ++checked;
      if (values.size() > 1) {
        Failure f;
        f.vidx = {v.a, v.b, v.c, v.i, v.j, v.k};
        f.out = {out[0], out[1], out[2]};
        f.in = {in[0], in[1], in[2]};
        f.note = "parity functional not constant across the relation";
        rep.failures.push_back(f);
      }
    }
  }
  rep.counts["relations"] = static_cast<long>(tuples.size());
  rep.counts["pairs"] = checked;
  rep.sort_failures();
  return rep;
}

VerificationReport series_equivalence_check(const RKernel& kernel, const Window& w) {
  VerificationReport rep;
  rep.suite = "series-equivalence";
  rep.type = type_name(kernel.type);
  rep.f_window = {w.f_lo, w.f_hi};
  rep.fp_window = {w.fp_lo, w.fp_hi};
  std::vector<Triple> triples = window_triples(kernel.type, w);
  long pairs = 0;
  for (const Triple& out : triples)
    for (const Triple& in : triples) {
      ++pairs;
      Scalar lhs = r_element(kernel, out, in);
      Scalar rhs = r_element_series(kernel, out, in);
      if (lhs != rhs) {
        Failure f;
        f.out = {out[0], out[1], out[2]};
        f.in = {in[0], in[1], in[2]};
        f.lhs = lhs.str();
        f.rhs = rhs.str();
        rep.failures.push_back(f);
      }
    }
  rep.counts["pairs"] = pairs;
  rep.sort_failures();
  return rep;
}

VerificationReport ooo_symmetry_check(const SqrtScalar& q, long bound) {
  VerificationReport rep;
  rep.suite = "ooo-symmetry";
  rep.type = "OOO";
  rep.fp_window = {0, bound};
  rep.params["q"] = q.value().str();
  RKernel k = make_ooo(q, Scalar(1), Scalar(1), Scalar(1));
  const Scalar q2 = q.value() * q.value();
  std::vector<Scalar> fac(bound * 2 + 2);
  for (long n = 0; n < static_cast<long>(fac.size()); ++n) fac[n] = qpoch(q2, q2, n);
  long pairs = 0;
  for (long a = 0; a <= bound; ++a)
    for (long b = 0; b <= bound; ++b)
      for (long c = 0; c <= bound; ++c)
        for (long i = 0; i <= bound; ++i) {
          long j = a + b - i;
          long kk = j + c - b;
          if (j < 0 || j > bound || kk < 0 || kk > bound) continue;
          ++pairs;
          Scalar lhs = r_element(k, {a, b, c}, {i, j, kk}) * fac[a] * fac[b] * fac[c];
          Scalar rhs = fac[i] * fac[j] * fac[kk] * r_element(k, {i, j, kk}, {a, b, c});
          if (lhs != rhs) {
            Failure f;
            f.out = {a, b, c};
            f.in = {i, j, kk};
            f.lhs = lhs.str();
            f.rhs = rhs.str();
            rep.failures.push_back(f);
          }
        }
  rep.counts["pairs"] = pairs;
  rep.sort_failures();
  return rep;
}

bool lz_keeps_subspace(const LOperator& L, const Scalar& q, long lo, long hi) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const WeylElement& e = L.entry(a, b, i, j);
          if (e.is_zero()) continue;
          for (const auto& [key, c] : e.terms())
            if (key.second < 0) return false;  // a negative X power would raise
          for (long m = lo; m <= hi; ++m)
            for (const auto& [idx, c] : act_basis(RepTag::ZPlus, e, m, q))
              if (idx > m) return false;
        }
  return true;
}

}  // namespace qtetra
