#include "qtetra/tetra.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

namespace qtetra {

const std::vector<std::string>& finite_type_list() {
  static const std::vector<std::string> kTypes = {
      // all factors locally finite
      "OOOOOO", "ZOOOOO", "OOOZOO", "OOOOOZ", "ZOOOOZ",
      // one locally non-finite factor per side
      "OZOOOO", "OOOOZO", "ZZOOOO", "ZOOZOO", "OZOZOO", "OOOZZO", "OOOZOZ",
      "OOOOZZ", "ZZOZOO", "OOOZZZ",
      // several locally non-finite factors, still finite sums
      "OOZOOO", "ZOZOOO", "ZOOOZO", "OZZOOO", "OZOOOZ", "OOZZOO", "OOZOZO",
      "OOZOOZ", "ZOZOZO", "OZZOOZ"};
  return kTypes;
}

bool is_finite_type(const std::string& type) {
  const auto& l = finite_type_list();
  return std::find(l.begin(), l.end(), type) != l.end();
}

namespace {

std::string factor_type(const std::string& type, int f) {
  return {type[kFactorLines[f][0]], type[kFactorLines[f][1]], type[kFactorLines[f][2]]};
}

struct Rel {
  int sign = 1;
  long pow = 0;
};

Rel compose(const Rel& a, const Rel& b) { return {a.sign * b.sign, a.pow + b.pow}; }
Rel inverse(const Rel& a) { return {a.sign, -a.pow}; }

// Union-find over O-lines carrying mu[i] = rel[i].sign * q^{rel[i].pow} *
// mu[root(i)].
struct MuGraph {
  std::array<int, 6> parent;
  std::array<Rel, 6> rel;
  MuGraph() {
    for (int i = 0; i < 6; ++i) parent[i] = i;
  }
  int find(int i) {
    if (parent[i] == i) return i;
    int r = find(parent[i]);
    rel[i] = compose(rel[i], rel[parent[i]]);
    parent[i] = r;
    return r;
  }
};

std::vector<long> resolve_into(MuGraph* g, const std::vector<std::array<int, 3>>& demands,
                               Rng& rng) {
  std::vector<long> ds;
  for (const auto& dm : demands) {
    int a = dm[0], b = dm[1], sign = dm[2];
    int ra = g->find(a), rb = g->find(b);
    if (ra != rb) {
      long d = rng.uniform(-2, 2);
      // mu_a = sign q^d mu_b and mu_a = rel[a] mu_ra, mu_b = rel[b] mu_rb
      // => mu_ra = rel[a]^{-1} sign q^d rel[b] mu_rb.
      Rel link = compose(compose(inverse(g->rel[a]), Rel{sign, d}), g->rel[b]);
      g->parent[ra] = rb;
      g->rel[ra] = link;
      ds.push_back(d);
    } else {
      Rel have = compose(g->rel[a], inverse(g->rel[b]));  // mu_a = have * mu_b
      if (have.sign != sign)
        throw std::invalid_argument("wire_parameters: inconsistent integrality demands");
      ds.push_back(have.pow);
    }
  }
  return ds;
}

}  // namespace

std::vector<long> resolve_mu_relations(
    const std::vector<std::array<int, 3>>& demands, Rng& rng) {
  MuGraph g;
  return resolve_into(&g, demands, rng);
}

Wiring wire_parameters(const std::string& type, std::uint64_t seed) {
  if (!is_finite_type(type))
    throw std::invalid_argument("wire_parameters: type not in the finite list");

  Rng rng(seed * 0x9e3779b97f4a7c15ull + 0xabcdef);
  int cursor = static_cast<int>(rng.next() % 24);

  // Collect the mu-ratio demands of the four factor kernels.
  std::vector<std::array<int, 3>> demands;
  for (int f = 0; f < 4; ++f) {
    std::string ft = factor_type(type, f);
    const auto& ln = kFactorLines[f];
    if (ft == "OOZ") demands.push_back({ln[0], ln[1], 1});
    else if (ft == "ZOO") demands.push_back({ln[2], ln[1], 1});
    else if (ft == "OZO") demands.push_back({ln[0], ln[2], -1});
  }

  MuGraph g;
  {
    Rng rel_rng(seed + 1);
    resolve_into(&g, demands, rel_rng);
  }

  Wiring w;
  w.type = type;
  w.q = sample_q(rng);
  const Scalar& qv = w.q.value();
  std::array<std::optional<Scalar>, 6> root_mu;
  for (int l = 0; l < 6; ++l) {
    if (type[l] == 'O') {
      int r = g.find(l);
      if (!root_mu[r]) root_mu[r] = sample_fundamental(rng, &cursor).value();
      Rel rl = g.rel[l];
      if (g.parent[l] == l) rl = Rel{};  // root carries the identity relation
      w.lines[l].mu = Scalar(rl.sign) * qv.pow(rl.pow) * (*root_mu[r]);
    } else {
      Quartet qu;
      qu.r = sample_fundamental(rng, &cursor);
      qu.s = sample_fundamental(rng, &cursor);
      qu.t = sample_fundamental(rng, &cursor);
      qu.w = sample_fundamental(rng, &cursor);
      w.lines[l].quartet = qu;
    }
  }

  for (int f = 0; f < 4; ++f) {
    std::string ft = factor_type(type, f);
    const auto& ln = kFactorLines[f];
    auto qt = [&](int s) -> const Quartet& { return *w.lines[ln[s]].quartet; };
    auto mu = [&](int s) -> const Scalar& { return *w.lines[ln[s]].mu; };
    auto rt = parse_rtype(ft);
    if (!rt) throw std::logic_error("wire_parameters: unexpected factor type " + ft);
    switch (*rt) {
      case RType::ZZZ: w.factors[f] = make_zzz(w.q, qt(0), qt(1), qt(2)); break;
      case RType::OZZ: w.factors[f] = make_ozz(w.q, mu(0), qt(1), qt(2)); break;
      case RType::ZZO: w.factors[f] = make_zzo(w.q, qt(0), qt(1), mu(2)); break;
      case RType::ZOZ: w.factors[f] = make_zoz(w.q, qt(0), mu(1), qt(2)); break;
      case RType::OOZ: w.factors[f] = make_ooz(w.q, mu(0), mu(1), qt(2)); break;
      case RType::ZOO: w.factors[f] = make_zoo(w.q, qt(0), mu(1), mu(2)); break;
      case RType::OZO: w.factors[f] = make_ozo(w.q, mu(0), qt(1), mu(2)); break;
      case RType::OOO: w.factors[f] = make_ooo(w.q, mu(0), mu(1), mu(2)); break;
      default:
        throw std::logic_error("wire_parameters: X-type factor cannot appear");
    }
  }
  return w;
}

namespace {

// Slot sources: 0..5 intermediate variable; -1..-6 fixed out[0..5];
// -7..-12 fixed in[0..5].
struct FactorUse {
  int kernel_idx;
  std::array<int, 6> src;  // out1,out2,out3,in1,in2,in3
};

constexpr int kOut(int i) { return -1 - i; }
constexpr int kIn(int i) { return -7 - i; }

std::array<FactorUse, 4> lhs_uses() {
  return {FactorUse{0, {0, 1, 3, kIn(0), kIn(1), kIn(3)}},
          FactorUse{1, {kOut(0), 2, 4, 0, kIn(2), kIn(4)}},
          FactorUse{2, {kOut(1), kOut(2), 5, 1, 2, kIn(5)}},
          FactorUse{3, {kOut(3), kOut(4), kOut(5), 3, 4, 5}}};
}

std::array<FactorUse, 4> rhs_uses() {
  return {FactorUse{0, {kOut(0), kOut(1), kOut(3), 0, 1, 3}},
          FactorUse{1, {0, kOut(2), kOut(4), kIn(0), 2, 4}},
          FactorUse{2, {1, 2, kOut(5), kIn(1), kIn(2), 5}},
          FactorUse{3, {3, 4, 5, kIn(3), kIn(4), kIn(5)}}};
}

// Linear constraint over the six slots of one factor:
//   sum coeff[s] * slot[s] + cst  (>= 0, or == 0 when eq).
struct SlotCon {
  std::array<int, 6> coeff;
  long cst;
  bool eq;
};

std::vector<SlotCon> kernel_constraints(const RKernel& k) {
  std::vector<SlotCon> cs;
  auto ge0 = [&](int slot) {
    SlotCon c{{0, 0, 0, 0, 0, 0}, 0, false};
    c.coeff[slot] = 1;
    cs.push_back(c);
  };
  long d = k.d;
  switch (k.type) {
    case RType::OOZ:
      cs.push_back({{1, 1, 0, -1, -1, 0}, 0, true});
      ge0(0); ge0(1); ge0(3); ge0(4);
      cs.push_back({{-1, 0, -1, 0, 1, 1}, d, false});   // e >= out1
      cs.push_back({{1, 0, -1, 0, -1, 1}, d, false});   // e >= in2
      cs.push_back({{0, 1, 1, 1, 0, -1}, -d, false});   // f >= 0
      break;
    case RType::ZOO:
      cs.push_back({{0, 1, 1, 0, -1, -1}, 0, true});
      ge0(1); ge0(2); ge0(4); ge0(5);
      cs.push_back({{-1, 0, -1, 1, 1, 0}, -d, false});  // e >= out3
      cs.push_back({{-1, 0, 1, 1, -1, 0}, -d, false});  // e >= in2
      cs.push_back({{1, 1, 0, -1, 0, 1}, d, false});    // f >= 0
      break;
    case RType::OZO:
      cs.push_back({{1, 0, -1, -1, 0, 1}, 0, true});
      ge0(0); ge0(2); ge0(3); ge0(5);
      cs.push_back({{0, -1, 0, -1, 1, 1}, -d - 1, false});  // e >= in1
      cs.push_back({{0, -1, 0, 1, 1, -1}, -d - 1, false});  // e >= in3
      cs.push_back({{1, 1, 1, 0, -1, 0}, d + 1, false});    // f >= 0
      break;
    case RType::OOO:
      cs.push_back({{1, 1, 0, -1, -1, 0}, 0, true});
      cs.push_back({{0, 1, 1, 0, -1, -1}, 0, true});
      for (int s = 0; s < 6; ++s) ge0(s);
      break;
    case RType::OZZ:
      ge0(0); ge0(3);
      break;
    case RType::ZZO:
      ge0(2); ge0(5);
      break;
    case RType::ZOZ:
      ge0(1); ge0(4);
      break;
    case RType::ZZZ:
      break;
    default:
      throw std::logic_error("kernel_constraints: X-type factor cannot appear");
  }
  return cs;
}

// Constraint over the intermediate variables after substituting fixed slots.
struct VarCon {
  std::array<long, 6> coeff;
  long cst;
  bool eq;
};

constexpr long kInf = std::numeric_limits<long>::max() / 4;

struct Bounds {
  std::array<long, 6> lo, hi;
  Bounds() {
    lo.fill(-kInf);
    hi.fill(kInf);
  }
  bool bounded() const {
    for (int v = 0; v < 6; ++v)
      if (lo[v] <= -kInf || hi[v] >= kInf) return false;
    return true;
  }
};

long floor_div(long a, long b) {
  long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
long ceil_div(long a, long b) { return -floor_div(-a, b); }

// One bounds-tightening pass; returns false on a proven contradiction.
bool tighten(const std::vector<VarCon>& cons, Bounds* b) {
  bool changed = true;
  int rounds = 0;
  while (changed && rounds++ < 240) {
    changed = false;
    for (const auto& c : cons) {
      for (int pass = 0; pass < (c.eq ? 2 : 1); ++pass) {
        // treat pass 1 as the negated inequality (for equalities)
        long sgn = pass == 0 ? 1 : -1;
        for (int v = 0; v < 6; ++v) {
          long cv = sgn * c.coeff[v];
          if (cv == 0) continue;
          // cv * x_v >= -sgn*cst - sum_{u != v} max(sgn*coeff_u * x_u)
          long rest = sgn * c.cst;
          bool finite = true;
          for (int u = 0; u < 6 && finite; ++u) {
            if (u == v) continue;
            long cu = sgn * c.coeff[u];
            if (cu == 0) continue;
            long ub = cu > 0 ? b->hi[u] : b->lo[u];
            if (ub >= kInf || ub <= -kInf) {
              finite = false;
              break;
            }
            rest += cu * ub;
          }
          if (!finite) continue;
          if (cv > 0) {
            long nlo = ceil_div(-rest, cv);
            if (nlo > b->lo[v]) {
              b->lo[v] = nlo;
              changed = true;
            }
          } else {
            // cv x >= -rest with cv < 0  =>  x <= rest / (-cv)
            long nhi = floor_div(rest, -cv);
            if (nhi < b->hi[v]) {
              b->hi[v] = nhi;
              changed = true;
            }
          }
          if (b->lo[v] > b->hi[v]) return false;
        }
      }
    }
  }
  return true;
}

struct SideContext {
  std::array<FactorUse, 4> uses;
  std::vector<VarCon> cons;
};

long fixed_value(int src, const Sextet& out, const Sextet& in) {
  if (src <= -7) return in[-src - 7];
  return out[-src - 1];
}

SideContext build_side(const Wiring& w, bool lhs, const Sextet& out, const Sextet& in) {
  SideContext ctx;
  ctx.uses = lhs ? lhs_uses() : rhs_uses();
  for (const auto& use : ctx.uses) {
    const RKernel& k = w.factors[use.kernel_idx];
    for (const auto& sc : kernel_constraints(k)) {
      VarCon vc{{0, 0, 0, 0, 0, 0}, sc.cst, sc.eq};
      for (int s = 0; s < 6; ++s) {
        if (sc.coeff[s] == 0) continue;
        int src = use.src[s];
        if (src >= 0)
          vc.coeff[src] += sc.coeff[s];
        else
          vc.cst += sc.coeff[s] * fixed_value(src, out, in);
      }
      ctx.cons.push_back(vc);
    }
  }
  return ctx;
}

bool satisfied(const VarCon& c, const std::array<long, 6>& vals) {
  long s = c.cst;
  for (int v = 0; v < 6; ++v) s += c.coeff[v] * vals[v];
  return c.eq ? s == 0 : s >= 0;
}

Scalar sum_side(const Wiring& w, const SideContext& ctx, const Sextet& out,
                const Sextet& in, std::array<ElementCache, 4>* caches) {
  Bounds b;
  if (!tighten(ctx.cons, &b)) return Scalar(0);
  if (!b.bounded())
    throw std::domain_error("rrrr: intermediate enumeration not provably finite");

  Scalar total(0);
  std::array<long, 6> vals{};
  // depth-first over the variables, retightening one variable at a time
  std::function<void(int, Bounds)> rec = [&](int v, Bounds cur) {
    if (v == 6) {
      for (const auto& c : ctx.cons)
        if (!satisfied(c, vals)) return;
      Scalar prod(1);
      for (const auto& use : ctx.uses) {
        const RKernel& k = w.factors[use.kernel_idx];
        Triple o, n;
        for (int s = 0; s < 3; ++s) {
          int so = use.src[s];
          o[s] = so >= 0 ? vals[so] : fixed_value(so, out, in);
          int si = use.src[s + 3];
          n[s] = si >= 0 ? vals[si] : fixed_value(si, out, in);
        }
        if (!support(k, o, n)) return;
        prod *= (*caches)[use.kernel_idx].get(o, n);
        if (prod.is_zero()) return;
      }
      total += prod;
      return;
    }
    for (long x = cur.lo[v]; x <= cur.hi[v]; ++x) {
      vals[v] = x;
      Bounds next = cur;
      next.lo[v] = next.hi[v] = x;
      if (!tighten(ctx.cons, &next)) continue;
      rec(v + 1, next);
    }
  };
  rec(0, b);
  return total;
}

void check_lattice(const Wiring& w, const Sextet& s, const char* what) {
  for (int l = 0; l < 6; ++l)
    if (w.type[l] == 'O' && s[l] < 0)
      throw std::invalid_argument(std::string("rrrr: ") + what +
                                  " violates an oscillator-line lattice bound");
}

}  // namespace

std::pair<Scalar, Scalar> rrrr_check_pair(const Wiring& w, const Sextet& out,
                                          const Sextet& in) {
  check_lattice(w, out, "out index");
  check_lattice(w, in, "in index");
  std::array<ElementCache, 4> caches{ElementCache(&w.factors[0]), ElementCache(&w.factors[1]),
                                     ElementCache(&w.factors[2]), ElementCache(&w.factors[3])};
  SideContext lhs = build_side(w, true, out, in);
  SideContext rhs = build_side(w, false, out, in);
  return {sum_side(w, lhs, out, in, &caches), sum_side(w, rhs, out, in, &caches)};
}

Scalar rrrr_side_bruteforce(const Wiring& w, bool lhs, const Sextet& out,
                            const Sextet& in, long box_lo, long box_hi) {
  auto uses = lhs ? lhs_uses() : rhs_uses();
  Scalar total(0);
  std::array<long, 6> vals{};
  std::function<void(int)> rec = [&](int v) {
    if (v == 6) {
      Scalar prod(1);
      for (const auto& use : uses) {
        const RKernel& k = w.factors[use.kernel_idx];
        Triple o, n;
        for (int s = 0; s < 3; ++s) {
          int so = use.src[s];
          o[s] = so >= 0 ? vals[so] : fixed_value(so, out, in);
          int si = use.src[s + 3];
          n[s] = si >= 0 ? vals[si] : fixed_value(si, out, in);
        }
        if (!support(k, o, n)) return;
        prod *= r_element(k, o, n);
        if (prod.is_zero()) return;
      }
      total += prod;
      return;
    }
    long lo = w.type[v] == 'O' ? std::max(box_lo, 0L) : box_lo;
    for (long x = lo; x <= box_hi; ++x) {
      vals[v] = x;
      rec(v + 1);
    }
  };
  rec(0);
  return total;
}

namespace {

// Random out-triple of one factor with support, within per-line windows.
std::optional<Triple> sample_fiber(const RKernel& k, const Triple& in, const Window& w,
                                   Rng& rng) {
  auto plus = plus_slots(k.type);
  std::vector<Triple> candidates;
  if (locally_finite(k.type)) {
    candidates = out_fiber(k, in);
  } else {
    auto [lo1, hi1] = w.line_range(plus[0]);
    auto [lo2, hi2] = w.line_range(plus[1]);
    auto [lo3, hi3] = w.line_range(plus[2]);
    for (long a = lo1 - 1; a <= hi1 + 1; ++a)
      for (long b = lo2 - 1; b <= hi2 + 1; ++b)
        for (long c = lo3 - 1; c <= hi3 + 1; ++c)
          if (support(k, {a, b, c}, in)) candidates.push_back({a, b, c});
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.next() % candidates.size()];
}

long sample_line_index(char letter, const Window& w, Rng& rng) {
  auto [lo, hi] = w.line_range(letter == 'O');
  return rng.uniform(lo, hi);
}

}  // namespace

VerificationReport rrrr_sweep_wiring(const Wiring& wiring, std::uint64_t seed,
                                     int pairs, const Window& w) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.suite = "rrrr";
  rep.type = wiring.type;
  rep.seed = seed;
  rep.f_window = {w.f_lo, w.f_hi};
  rep.fp_window = {w.fp_lo, w.fp_hi};
  rep.params["q"] = wiring.q.value().str();
  for (int l = 0; l < 6; ++l) {
    std::string p = std::to_string(l + 1);
    if (wiring.lines[l].mu) {
      rep.params["mu" + p] = wiring.lines[l].mu->str();
    } else {
      const Quartet& Q = *wiring.lines[l].quartet;
      rep.params["r" + p] = Q.r.value().str();
      rep.params["s" + p] = Q.s.value().str();
      rep.params["t" + p] = Q.t.value().str();
      rep.params["w" + p] = Q.w.value().str();
    }
  }

  Rng rng(seed ^ 0x5bd1e9955bd1e995ull);
  auto uses = lhs_uses();
  long nonzero = 0, zero_pairs = 0;
  for (int n = 0; n < pairs; ++n) {
    Sextet in{};
    Sextet out{};
    bool biased = rng.coin(80);
    bool have_path = false;
    if (biased) {
      // Follow one path through the four factors so the pair is likely to
      // have nonzero amplitude; retry a few in-sextets if a fiber is empty.
      for (int attempt = 0; attempt < 5 && !have_path; ++attempt) {
        for (int l = 0; l < 6; ++l) in[l] = sample_line_index(wiring.type[l], w, rng);
        std::array<long, 6> vals{};
        bool ok = true;
        for (const auto& use : uses) {
          const RKernel& k = wiring.factors[use.kernel_idx];
          Triple tin;
          for (int s = 0; s < 3; ++s) {
            int si = use.src[s + 3];
            tin[s] = si >= 0 ? vals[si] : in[-si - 7];
          }
          auto got = sample_fiber(k, tin, w, rng);
          if (!got) {
            ok = false;
            break;
          }
          for (int s = 0; s < 3; ++s) {
            int so = use.src[s];
            if (so >= 0)
              vals[so] = (*got)[s];
            else
              out[-so - 1] = (*got)[s];
          }
        }
        have_path = ok;
      }
    }
    if (!have_path) {
      for (int l = 0; l < 6; ++l) in[l] = sample_line_index(wiring.type[l], w, rng);
      for (int l = 0; l < 6; ++l) out[l] = sample_line_index(wiring.type[l], w, rng);
    }

    auto [lhs, rhs] = rrrr_check_pair(wiring, out, in);
    if (lhs.is_zero() && rhs.is_zero())
      ++zero_pairs;
    else
      ++nonzero;
    if (lhs != rhs) {
      Failure f;
      f.out = {out.begin(), out.end()};
      f.in = {in.begin(), in.end()};
      f.lhs = lhs.str();
      f.rhs = rhs.str();
      rep.failures.push_back(f);
    }
  }
  rep.counts["pairs"] = pairs;
  rep.counts["nonzero_pairs"] = nonzero;
  rep.counts["zero_pairs"] = zero_pairs;
  rep.sort_failures();
  rep.elapsed_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                         std::chrono::steady_clock::now() - t0)
                                         .count());
  return rep;
}

VerificationReport rrrr_sweep(const std::string& type, std::uint64_t seed, int pairs,
                              const Window& w) {
  Wiring wiring = wire_parameters(type, seed);
  return rrrr_sweep_wiring(wiring, seed, pairs, w);
}

}  // namespace qtetra
