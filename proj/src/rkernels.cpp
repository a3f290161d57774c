#include "qtetra/rkernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtetra {

namespace {

constexpr std::array<const char*, 11> kNames = {"ZZZ", "OZZ", "ZZO", "ZOZ", "OOZ",
                                                "ZOO", "OZO", "OOO", "XXZ", "ZXX",
                                                "XZX"};

long mod2(long m) { return ((m % 2) + 2) % 2; }

}  // namespace

const char* type_name(RType t) { return kNames[static_cast<int>(t)]; }

std::optional<RType> parse_rtype(const std::string& s) {
  for (int i = 0; i < static_cast<int>(kNames.size()); ++i)
    if (s == kNames[i]) return static_cast<RType>(i);
  return std::nullopt;
}

std::array<char, 3> type_letters(RType t) {
  const char* n = type_name(t);
  return {n[0], n[1], n[2]};
}

std::array<bool, 3> plus_slots(RType t) {
  auto l = type_letters(t);
  return {l[0] == 'O', l[1] == 'O', l[2] == 'O'};
}

std::array<RepTag, 3> line_tags(RType t) {
  auto l = type_letters(t);
  std::array<RepTag, 3> tags{};
  for (int i = 0; i < 3; ++i)
    tags[i] = l[i] == 'O' ? RepTag::O : (l[i] == 'X' ? RepTag::X : RepTag::ZPlus);
  return tags;
}

std::optional<long> find_qpow(const Scalar& ratio, const Scalar& q, long max_abs) {
  if (ratio.sign() <= 0) return std::nullopt;
  Scalar r = ratio;
  if (r.is_one()) return 0;
  Scalar up = ratio;
  for (long d = 1; d <= max_abs; ++d) {
    up /= q;
    if (up.is_one()) return d;
  }
  Scalar down = ratio;
  for (long d = 1; d <= max_abs; ++d) {
    down *= q;
    if (down.is_one()) return -d;
  }
  return std::nullopt;
}

namespace {

RKernel base_kernel(RType type, const SqrtScalar& q) {
  RKernel k;
  k.type = type;
  k.q = q;
  return k;
}

void require_nonzero(const Scalar& s, const char* what) {
  if (s.is_zero()) throw std::invalid_argument(std::string("kernel: zero parameter ") + what);
}

}  // namespace

RKernel make_zzz(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Quartet& q3) {
  RKernel k = base_kernel(RType::ZZZ, q);
  k.quartet = {q1, q2, q3};
  return k;
}

RKernel make_ozz(const SqrtScalar& q, const Scalar& mu, const Quartet& q2, const Quartet& q3) {
  require_nonzero(mu, "mu");
  RKernel k = base_kernel(RType::OZZ, q);
  k.mu[0] = mu;
  k.quartet[1] = q2;
  k.quartet[2] = q3;
  return k;
}

RKernel make_zzo(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Scalar& mu) {
  require_nonzero(mu, "mu");
  RKernel k = base_kernel(RType::ZZO, q);
  k.quartet[0] = q1;
  k.quartet[1] = q2;
  k.mu[2] = mu;
  return k;
}

RKernel make_zoz(const SqrtScalar& q, const Quartet& q1, const Scalar& mu, const Quartet& q3) {
  require_nonzero(mu, "mu");
  RKernel k = base_kernel(RType::ZOZ, q);
  k.quartet[0] = q1;
  k.mu[1] = mu;
  k.quartet[2] = q3;
  return k;
}

RKernel make_ooz(const SqrtScalar& q, const Scalar& mu1, const Scalar& mu2, const Quartet& q3) {
  require_nonzero(mu1, "mu1");
  require_nonzero(mu2, "mu2");
  auto d = find_qpow(mu1 / mu2, q.value());
  if (!d) throw std::invalid_argument("OOZ kernel: mu1/mu2 must be an integer power of q");
  RKernel k = base_kernel(RType::OOZ, q);
  k.mu[0] = mu1;
  k.mu[1] = mu2;
  k.quartet[2] = q3;
  k.d = *d;
  return k;
}

RKernel make_ooz_d(const SqrtScalar& q, const Scalar& mu2, long d, const Quartet& q3) {
  return make_ooz(q, mu2 * q.value().pow(d), mu2, q3);
}

RKernel make_zoo(const SqrtScalar& q, const Quartet& q1, const Scalar& mu2, const Scalar& mu3) {
  require_nonzero(mu2, "mu2");
  require_nonzero(mu3, "mu3");
  auto d = find_qpow(mu3 / mu2, q.value());
  if (!d) throw std::invalid_argument("ZOO kernel: mu3/mu2 must be an integer power of q");
  RKernel k = base_kernel(RType::ZOO, q);
  k.quartet[0] = q1;
  k.mu[1] = mu2;
  k.mu[2] = mu3;
  k.d = *d;
  return k;
}

RKernel make_zoo_d(const SqrtScalar& q, const Quartet& q1, const Scalar& mu2, long d) {
  return make_zoo(q, q1, mu2, mu2 * q.value().pow(d));
}

RKernel make_ozo(const SqrtScalar& q, const Scalar& mu1, const Quartet& q2, const Scalar& mu3) {
  require_nonzero(mu1, "mu1");
  require_nonzero(mu3, "mu3");
  auto d = find_qpow(-(mu1 / mu3), q.value());
  if (!d) throw std::invalid_argument("OZO kernel: -mu1/mu3 must be an integer power of q");
  RKernel k = base_kernel(RType::OZO, q);
  k.mu[0] = mu1;
  k.quartet[1] = q2;
  k.mu[2] = mu3;
  k.d = *d;
  return k;
}

RKernel make_ozo_d(const SqrtScalar& q, const Quartet& q2, const Scalar& mu3, long d) {
  return make_ozo(q, -(mu3 * q.value().pow(d)), q2, mu3);
}

RKernel make_ooo(const SqrtScalar& q, const Scalar& mu1, const Scalar& mu2, const Scalar& mu3) {
  require_nonzero(mu1, "mu1");
  require_nonzero(mu2, "mu2");
  require_nonzero(mu3, "mu3");
  RKernel k = base_kernel(RType::OOO, q);
  k.mu = {mu1, mu2, mu3};
  return k;
}

RKernel make_xxz(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Quartet& q3) {
  RKernel k = base_kernel(RType::XXZ, q);
  k.quartet = {q1, q2, q3};
  return k;
}

RKernel make_zxx(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Quartet& q3) {
  RKernel k = base_kernel(RType::ZXX, q);
  k.quartet = {q1, q2, q3};
  return k;
}

RKernel make_xzx(const SqrtScalar& q, const Quartet& q1, const Quartet& q2, const Quartet& q3) {
  RKernel k = base_kernel(RType::XZX, q);
  k.quartet = {q1, q2, q3};
  return k;
}

namespace {

struct Q3v {
  Scalar r, s, t, w;
};

Q3v vals(const Quartet& q) {
  return {q.r.value(), q.s.value(), q.t.value(), q.w.value()};
}

Scalar zzz_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  long d1 = a + c - j;
  long d2 = b - i - k;
  long d3 = -a - b + c + i + j - k;
  long d4 = a - b - c - i + j + k;
  if (K.fault == Fault::ZzzSwapD3D4) std::swap(d3, d4);
  long phi4 = (d1 - d2) * (d1 + d2 + d3 + d4) + d3 * d4 - 4 * d1;
  if (phi4 % 2 != 0) throw std::logic_error("ZZZ: phi not half-integral");
  long two_phi = phi4 / 2;
  if (K.fault == Fault::ZzzPhiSign) two_phi = -two_phi;

  const Quartet& Q1 = *K.quartet[0];
  const Quartet& Q2 = *K.quartet[1];
  const Quartet& Q3 = *K.quartet[2];
  SqrtScalar p1 = Q2.r / (Q1.t * Q3.t * Q1.w);
  SqrtScalar p2 = Q2.s / (Q1.t * Q3.t * Q3.w);
  SqrtScalar p3 = Q2.t / (Q1.s * Q3.t);
  SqrtScalar p4 = (Q2.t * Q2.w) / (Q3.s * Q1.t * Q1.w);
  Scalar val = p1.pow_half(d1) * p2.pow_half(d2) * p3.pow_half(d3) * p4.pow_half(d4) *
               K.q.pow_half(two_phi);

  auto [r1, s1, t1, w1] = vals(Q1);
  auto [r2, s2, t2, w2] = vals(Q2);
  auto [r3, s3, t3, w3] = vals(Q3);
  const Scalar& q = K.q.value();
  SqrtScalar base2 = SqrtScalar::from_root(q);  // value q^2, root q
  Scalar num = phi_tilde(d2, s1 * s3 / s2, base2) *
               phi_tilde(d3, r3 * w2 / (s3 * w1), base2) *
               phi_tilde(d4, r1 * w3 / (s1 * w2), base2);
  Scalar den = phi_tilde(-d1, q * q * r1 * r3 / r2, base2) *
               phi_tilde(d3 + d4, r1 * r3 * w3 / (s1 * s3 * w1), base2);
  return val * num / den;
}

Scalar ozz_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  const Scalar& mu = *K.mu[0];
  auto [r2, s2, t2, w2] = vals(*K.quartet[1]);
  auto [r3, s3, t3, w3] = vals(*K.quartet[2]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;

  ExtProduct P;
  P.mul((r2 / r3).pow(a));
  P.mul((s3 / s2).pow(i));
  P.mul((t2 * w2 / (mu * s2)).pow(j - b));
  P.mul((-(mu * t3) / r3).pow(k - c));
  P.mul_den(qpoch_ext(q2, q2, a));
  P.mul(q.pow((a - b + j - 1) * c - (i - b + j - 1) * k - a * j + b * i));

  Scalar x = mu * mu * s2 / (r2 * w2);
  Scalar y = r3 * w3 / (mu * mu * s3);
  Scalar ystep = K.fault == Fault::OzzSignY ? y : -y;
  Scalar sum(0);
  for (long beta = 0; beta <= i; ++beta) {
    sum += q.pow(beta * (beta + 2 * j - 2 * b - 1)) * ystep.pow(beta) *
           qbinom(i, beta, q2) * qpoch(x * q.pow(2 * k - 2 * c - 2 * beta + 2), q2, a);
  }
  P.mul(sum);
  return P.finalize();
}

Scalar zzo_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  auto [r1, s1, t1, w1] = vals(*K.quartet[0]);
  auto [r2, s2, t2, w2] = vals(*K.quartet[1]);
  const Scalar& mu = *K.mu[2];
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;

  ExtProduct P;
  P.mul((r2 / r1).pow(c));
  P.mul((s1 / s2).pow(k));
  P.mul((mu * t2 / s2).pow(j - b));
  P.mul((-(t1 * w1) / (mu * r1)).pow(i - a));
  P.mul_den(qpoch_ext(q2, q2, c));
  P.mul(q.pow((c - b + j - 1) * a - (k - b + j - 1) * i - c * j + b * k));

  Scalar x = s2 * w2 / (mu * mu * r2);
  Scalar y = mu * mu * r1 / (s1 * w1);
  long shift = K.fault == Fault::ZzoPochShift ? 0 : 2;
  Scalar sum(0);
  for (long beta = 0; beta <= k; ++beta) {
    sum += q.pow(beta * (beta + 2 * j - 2 * b - 1)) * (-y).pow(beta) *
           qbinom(k, beta, q2) *
           qpoch(x * q.pow(2 * i - 2 * a - 2 * beta + shift), q2, c);
  }
  P.mul(sum);
  return P.finalize();
}

Scalar zoz_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (j < 0) return Scalar(0);
  auto [r1, s1, t1, w1] = vals(*K.quartet[0]);
  const Scalar& mu = *K.mu[1];
  auto [r3, s3, t3, w3] = vals(*K.quartet[2]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;

  ExtProduct P;
  P.mul((s1 * s3).pow(b));
  P.div((r1 * r3).pow(j));
  P.mul((r1 / (mu * t1)).pow(a - i));
  P.mul((mu * r3 / (t3 * w3)).pow(c - k));
  P.mul_den(qpoch_ext(q2, q2, b));
  P.mul(q.pow((j - b) * (a + c) + b * (a + c - i - k) - (i - a) * (k - c)));

  Scalar x = mu * mu * s1 / (r1 * w1);
  Scalar y = mu * mu * r3 / (s3 * w3);
  if (K.fault == Fault::ZozSwapXY) std::swap(x, y);
  Scalar q2inv = q2.inv();
  Scalar sum(0);
  for (long beta = 0; beta <= b; ++beta) {
    sum += q.pow(beta * (beta + 2 * i - 2 * a + 1)) * (-y).pow(beta) *
           qbinom(b, beta, q2) *
           qpoch(q.pow(2 * j + 2 * k - 2 * c - 2 * beta) / x, q2inv, beta) *
           qpoch(q.pow(2 * k - 2 * c - 2 * beta + 2) / x, q2, b - beta);
  }
  P.mul(sum);
  return P.finalize();
}

Scalar ooz_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (i < 0 || j < 0) return Scalar(0);
  if (a + b != i + j) return Scalar(0);
  long d = K.fault == Fault::OozNegateD ? -K.d : K.d;
  long e2 = a - c + j + k + d;
  if (mod2(e2) != 0) return Scalar(0);
  long e = e2 / 2;
  long f = (b + c + i - k - d) / 2;

  const Scalar& mu2 = *K.mu[1];
  auto [r3, s3, t3, w3] = vals(*K.quartet[2]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;

  ExtProduct P;
  P.mul(s3.pow(i));
  P.mul((mu2 * t3).pow(-a));
  P.mul((mu2 * s3 / (t3 * w3)).pow(j));
  P.mul((t3 * t3 * w3 / (r3 * s3)).pow(e));
  P.mul(q.pow(c * j - b * k));
  P.mul_num(qpoch_ext(q.pow(2 + 2 * e - 2 * j), q2, j));
  P.mul_num(qpoch_ext(q.pow(2 * a + 2), q2, i - a));
  P.mul_den(qpoch_ext(q2, q2, f));
  P.mul_den(qpoch_ext(q.pow(2 * a - 2 * e), q2, e - a));
  return P.finalize();
}

Scalar zoo_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (j < 0 || k < 0) return Scalar(0);
  if (b + c != j + k) return Scalar(0);
  long e2 = -a + c + i + j - K.d;
  if (mod2(e2) != 0) return Scalar(0);
  long e = e2 / 2;
  long f = (a + b - i + k + K.d) / 2;

  Scalar mu2 = *K.mu[1];
  Scalar mu3 = *K.mu[2];
  if (K.fault == Fault::ZooSwapMu) std::swap(mu2, mu3);
  auto [r1, s1, t1, w1] = vals(*K.quartet[0]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;
  long shift = K.fault == Fault::ZooPochShift ? 0 : 2;

  ExtProduct P;
  P.mul(s1.pow(k));
  P.mul((mu2 / (t1 * w1)).pow(c));
  P.mul((s1 / (mu2 * t1)).pow(j));
  P.mul((t1 * t1 * w1 / (r1 * s1)).pow(e));
  P.mul(q.pow(a * j - b * i));
  P.mul_num(qpoch_ext(q.pow(2 + 2 * e - 2 * j), q2, j));
  P.mul_num(qpoch_ext(q.pow(shift + 2 * c), q2, k - c));
  P.mul_den(qpoch_ext(q2, q2, f));
  P.mul_den(qpoch_ext(q.pow(2 * c - 2 * e), q2, e - c));
  return P.finalize();
}

Scalar ozo_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (a < 0 || c < 0 || i < 0 || k < 0) return Scalar(0);
  if (a - c != i - k) return Scalar(0);
  long e2 = i + j + k - b - K.d - 1;
  if (mod2(e2) != 0) return Scalar(0);
  long e = e2 / 2;
  long f = (a + b + c - j + K.d + 1) / 2;
  if (K.fault == Fault::OzoShiftF) f -= 1;

  const Scalar& mu3 = *K.mu[2];
  auto [r2, s2, t2, w2] = vals(*K.quartet[1]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;

  ExtProduct P;
  P.mul(r2.pow(c));
  P.mul((mu3 * t2).pow(-k));
  P.mul((mu3 * r2 / (t2 * w2)).pow(i));
  P.mul((t2 * t2 * w2 / (r2 * s2)).pow(e));
  P.mul(q.pow(b * k - c * j));
  P.mul_num(qpoch_ext(q.pow(2 + 2 * e - 2 * k), q2, k));
  P.mul_den(qpoch_ext(q2, q2, f));
  P.mul_den(qpoch_ext(q.pow(2 * i - 2 * e), q2, e - i));
  return P.finalize();
}

Scalar ooo_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (a < 0 || b < 0 || c < 0 || i < 0 || j < 0 || k < 0) return Scalar(0);
  if (a + b != i + j || b + c != j + k) return Scalar(0);
  const Scalar& mu1 = *K.mu[0];
  const Scalar& mu2 = *K.mu[1];
  const Scalar& mu3 = *K.mu[2];
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;
  Scalar mb = K.fault == Fault::OooSignB ? mu1 / mu3 : -(mu1 / mu3);
  long eshift = K.fault == Fault::OooExpShift ? -1 : 1;
  return (mu3 / mu2).pow(i) * mb.pow(b) * (mu2 / mu1).pow(k) *
         q.pow(i * k + b * (k - i + eshift)) * qbinom(a + b, a, q2) *
         phi21_terminating(q.pow(-2 * b), q.pow(-2 * i), q.pow(-2 * a - 2 * b), q2,
                           q.pow(-2 * c));
}

Scalar xxz_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (i + j != a + b) return Scalar(0);
  long m = a - c + j + k;
  long h = mod2(m);
  long g = (m - h) / 2;
  long hh = K.fault == Fault::XxzFlipH ? 1 - h : h;

  auto [r1, s1, t1, w1] = vals(*K.quartet[0]);
  auto [r2, s2, t2, w2] = vals(*K.quartet[1]);
  auto [r3, s3, t3, w3] = vals(*K.quartet[2]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;

  ExtProduct P;
  P.mul((s1 * s3 / s2).pow(i));
  P.mul((s1 * t3 / t2).pow(-a));
  P.mul((s1 * s3 * t2 * w2 / (r1 * s2 * t3 * w3)).pow(j));
  P.mul((r2 * s2 * t3 * t3 * w3 / (t2 * t2 * w2 * r3 * s3)).pow(g));
  P.mul(q.pow(c * j - b * k));
  P.mul_num(qpoch_ext(q.pow(b + c + i - k + 2) * t1 * t2 * w2 / (r1 * s2), q2, g - a - b));
  P.mul_num(qpoch_ext(q.pow(hh + 2) * t1 * w1 * t2 / (r2 * s1), q2, g));
  P.mul_num(qpoch_ext(q.pow(2 * a + 2) * t1 * t1 * w1 / (r1 * s1), q2, i - a));
  P.mul_den(qpoch_ext(q.pow(-b + c + i - k) * r2 * t1 / (r1 * t2), q2, g - a));
  P.mul_den(qpoch_ext(q.pow(h + 2) * s2 * t1 * w1 / (s1 * t2 * w2), q2, g - j));
  P.mul(K.free_const[h]);
  return P.finalize();
}

Scalar zxx_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (j + k != b + c) return Scalar(0);
  long m = -a + c + i + j;
  long h = mod2(m);
  long g = (m - h) / 2;
  long shift = K.fault == Fault::ZxxExpShift ? 0 : 2;

  auto [r1, s1, t1, w1] = vals(*K.quartet[0]);
  auto [r2, s2, t2, w2] = vals(*K.quartet[1]);
  auto [r3, s3, t3, w3] = vals(*K.quartet[2]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;

  ExtProduct P;
  P.mul((s1 * s3 / s2).pow(k));
  P.mul((s3 * t1 * w1 / (t2 * w2)).pow(-c));
  P.mul((s1 * s3 * t2 / (r3 * s2 * t1)).pow(j));
  P.mul((r2 * s2 * t1 * t1 * w1 / (t2 * t2 * w2 * r1 * s1)).pow(g));
  P.mul(q.pow(a * j - b * i));
  P.mul_num(qpoch_ext(q.pow(a + b - i + k + shift) * t2 * t3 * w3 / (r3 * s2), q2, g - b - c));
  P.mul_num(qpoch_ext(q.pow(h + 2) * t2 * t3 * w2 / (r2 * s3), q2, g));
  P.mul_num(qpoch_ext(q.pow(2 * c + 2) * t3 * t3 * w3 / (r3 * s3), q2, k - c));
  P.mul_den(qpoch_ext(q.pow(a - b - i + k) * r2 * t3 * w3 / (r3 * t2 * w2), q2, g - c));
  P.mul_den(qpoch_ext(q.pow(h + 2) * s2 * t3 / (s3 * t2), q2, g - j));
  P.mul(K.free_const[h]);
  return P.finalize();
}

Scalar xzx_element(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (a - c != i - k) return Scalar(0);
  long m = -b + i + j + k;
  long h = mod2(m);
  long g = (m - h) / 2;
  int sgn = K.fault == Fault::XzxSignFlip ? 1 : -1;

  auto [r1, s1, t1, w1] = vals(*K.quartet[0]);
  auto [r2, s2, t2, w2] = vals(*K.quartet[1]);
  auto [r3, s3, t3, w3] = vals(*K.quartet[2]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;

  ExtProduct P;
  P.mul((r2 / (r1 * r3)).pow(c));
  P.mul((s1 * t3 / t2).pow(k));
  P.mul((r2 * t3 * w3 / (r3 * t2 * w2)).pow(i));
  P.mul((r3 * s3 * t2 * t2 * w2 / (t3 * t3 * w3 * r2 * s2)).pow(g));
  P.mul(q.pow(b * k - c * j));
  P.mul_num(qpoch_ext(Scalar(sgn) * q.pow(h + 1) * t1 * t3 * w3 / (s1 * s3), q2, g));
  P.mul_den(qpoch_ext(-(q.pow(h + 1)) * r3 * t1 / (s1 * t3), q2, g - k));
  P.mul_num(qpoch_ext(-(q.pow(-h + 1)) * s3 * t1 * w1 / (r1 * t3 * w3), q2, i - g));
  P.mul_den(qpoch_ext(-(q.pow(-h + 3)) * t1 * t3 * w1 / (r1 * r3), q2, c + i - g));
  P.mul(K.free_const[h]);
  return P.finalize();
}

}  // namespace

Scalar r_element(const RKernel& k, const Triple& out, const Triple& in) {
  switch (k.type) {
    case RType::ZZZ: return zzz_element(k, out, in);
    case RType::OZZ: return ozz_element(k, out, in);
    case RType::ZZO: return zzo_element(k, out, in);
    case RType::ZOZ: return zoz_element(k, out, in);
    case RType::OOZ: return ooz_element(k, out, in);
    case RType::ZOO: return zoo_element(k, out, in);
    case RType::OZO: return ozo_element(k, out, in);
    case RType::OOO: return ooo_element(k, out, in);
    case RType::XXZ: return xxz_element(k, out, in);
    case RType::ZXX: return zxx_element(k, out, in);
    case RType::XZX: return xzx_element(k, out, in);
  }
  throw std::logic_error("r_element: bad type");
}

namespace {

Scalar ozz_series(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (i < 0) return Scalar(0);
  const Scalar& mu = *K.mu[0];
  auto [r2, s2, t2, w2] = vals(*K.quartet[1]);
  auto [r3, s3, t3, w3] = vals(*K.quartet[2]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;
  Scalar x = mu * mu * s2 / (r2 * w2);
  Scalar y = r3 * w3 / (mu * mu * s3);
  Scalar z = x * q.pow(2 * k - 2 * c + 2);

  ExtProduct P;
  P.mul((r2 / r3).pow(a));
  P.mul((s3 / s2).pow(i));
  P.mul((t2 * w2 / (mu * s2)).pow(j - b));
  P.mul((-(mu * t3) / r3).pow(k - c));
  P.mul_num(qpoch_ext(z, q2, a));
  P.mul_den(qpoch_ext(q2, q2, a));
  P.mul(q.pow((a - b + j - 1) * c - (i - b + j - 1) * k - a * j + b * i));
  P.mul(phi21_terminating(q.pow(-2 * i), q2 / z, q.pow(-2 * a + 2) / z, q2,
                          y * q.pow(2 * i + 2 * j - 2 * a - 2 * b)));
  return P.finalize();
}

Scalar zzo_series(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (k < 0) return Scalar(0);
  auto [r1, s1, t1, w1] = vals(*K.quartet[0]);
  auto [r2, s2, t2, w2] = vals(*K.quartet[1]);
  const Scalar& mu = *K.mu[2];
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;
  Scalar x = s2 * w2 / (mu * mu * r2);
  Scalar y = mu * mu * r1 / (s1 * w1);
  Scalar z = x * q.pow(2 * i - 2 * a + 2);

  ExtProduct P;
  P.mul((r2 / r1).pow(c));
  P.mul((s1 / s2).pow(k));
  P.mul((mu * t2 / s2).pow(j - b));
  P.mul((-(t1 * w1) / (mu * r1)).pow(i - a));
  P.mul_num(qpoch_ext(z, q2, c));
  P.mul_den(qpoch_ext(q2, q2, c));
  P.mul(q.pow((c - b + j - 1) * a - (k - b + j - 1) * i - c * j + b * k));
  P.mul(phi21_terminating(q.pow(-2 * k), q2 / z, q.pow(-2 * c + 2) / z, q2,
                          y * q.pow(2 * j + 2 * k - 2 * b - 2 * c)));
  return P.finalize();
}

Scalar zoz_series(const RKernel& K, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  if (j < 0) return Scalar(0);
  auto [r1, s1, t1, w1] = vals(*K.quartet[0]);
  const Scalar& mu = *K.mu[1];
  auto [r3, s3, t3, w3] = vals(*K.quartet[2]);
  const Scalar& q = K.q.value();
  Scalar q2 = q * q;
  Scalar x = mu * mu * s1 / (r1 * w1);
  Scalar y = mu * mu * r3 / (s3 * w3);

  ExtProduct P;
  P.mul((s1 * s3).pow(b));
  P.div((r1 * r3).pow(j));
  P.mul((r1 / (mu * t1)).pow(a - i));
  P.mul((mu * r3 / (t3 * w3)).pow(c - k));
  P.mul_num(qpoch_ext(q.pow(2 - 2 * c + 2 * k) / x, q2, b));
  P.mul_den(qpoch_ext(q2, q2, b));
  P.mul(q.pow((j - b) * (a + c) + b * (a + c - i - k) - (i - a) * (k - c)));

  Scalar sum(0);
  for (long beta = 0; beta <= b; ++beta) {
    sum += (q.pow(2 * i + 2 * j - 2 * a - 2 * b + 2) * y).pow(beta) *
           qpoch(q.pow(-2 * b), q2, beta) * qpoch(q.pow(2 * c - 2 * k) * x, q2, beta) *
           qpoch(q.pow(2 * c - 2 * j - 2 * k) * x, q2, 2 * beta) /
           (qpoch(q2, q2, beta) * qpoch(q.pow(-2 * b + 2 * c - 2 * k) * x, q2, 2 * beta) *
            qpoch(q.pow(2 * c - 2 * j - 2 * k) * x, q2, beta));
  }
  P.mul(sum);
  return P.finalize();
}

}  // namespace

Scalar r_element_series(const RKernel& k, const Triple& out, const Triple& in) {
  switch (k.type) {
    case RType::OZZ: return ozz_series(k, out, in);
    case RType::ZZO: return zzo_series(k, out, in);
    case RType::ZOZ: return zoz_series(k, out, in);
    default:
      throw std::invalid_argument("r_element_series: only OZZ/ZZO/ZOZ have a series form");
  }
}

bool support(const RKernel& k, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], kk = in[2];
  switch (k.type) {
    case RType::ZZZ:
      return true;
    case RType::OZZ:
      return a >= 0 && i >= 0;
    case RType::ZZO:
      return c >= 0 && kk >= 0;
    case RType::ZOZ:
      return b >= 0 && j >= 0;
    case RType::OOZ: {
      if (a < 0 || b < 0 || i < 0 || j < 0) return false;
      if (a + b != i + j) return false;
      long e2 = a - c + j + kk + k.d;
      if (mod2(e2) != 0) return false;
      long e = e2 / 2;
      long f = (b + c + i - kk - k.d) / 2;
      return e >= std::max(a, j) && f >= 0;
    }
    case RType::ZOO: {
      if (b < 0 || c < 0 || j < 0 || kk < 0) return false;
      if (b + c != j + kk) return false;
      long e2 = -a + c + i + j - k.d;
      if (mod2(e2) != 0) return false;
      long e = e2 / 2;
      long f = (a + b - i + kk + k.d) / 2;
      return e >= std::max(c, j) && f >= 0;
    }
    case RType::OZO: {
      if (a < 0 || c < 0 || i < 0 || kk < 0) return false;
      if (a - c != i - kk) return false;
      long e2 = i + j + kk - b - k.d - 1;
      if (mod2(e2) != 0) return false;
      long e = e2 / 2;
      long f = (a + b + c - j + k.d + 1) / 2;
      return e >= std::max(i, kk) && f >= 0;
    }
    case RType::OOO:
      return a >= 0 && b >= 0 && c >= 0 && i >= 0 && j >= 0 && kk >= 0 &&
             a + b == i + j && b + c == j + kk;
    case RType::XXZ:
      return a + b == i + j;
    case RType::ZXX:
      return b + c == j + kk;
    case RType::XZX:
      return a - c == i - kk;
  }
  return true;
}

SectorData sector_of(const RKernel& k, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], kk = in[2];
  SectorData s;
  switch (k.type) {
    case RType::ZZZ: {
      long d1 = a + c - j, d2 = b - i - kk;
      long d3 = -a - b + c + i + j - kk, d4 = a - b - c - i + j + kk;
      s.dvec = {d1, d2, d3, d4};
      s.phi4 = (d1 - d2) * (d1 + d2 + d3 + d4) + d3 * d4 - 4 * d1;
      break;
    }
    case RType::OZZ: {
      const Scalar& mu = *k.mu[0];
      auto [r2, s2, t2, w2] = vals(*k.quartet[1]);
      auto [r3, s3, t3, w3] = vals(*k.quartet[2]);
      s.aux["x"] = mu * mu * s2 / (r2 * w2);
      s.aux["y"] = r3 * w3 / (mu * mu * s3);
      s.aux["z"] = s.aux["x"] * k.q.value().pow(2 * kk - 2 * c + 2);
      break;
    }
    case RType::ZZO: {
      auto [r1, s1, t1, w1] = vals(*k.quartet[0]);
      auto [r2, s2, t2, w2] = vals(*k.quartet[1]);
      const Scalar& mu = *k.mu[2];
      s.aux["x"] = s2 * w2 / (mu * mu * r2);
      s.aux["y"] = mu * mu * r1 / (s1 * w1);
      s.aux["z"] = s.aux["x"] * k.q.value().pow(2 * i - 2 * a + 2);
      break;
    }
    case RType::ZOZ: {
      auto [r1, s1, t1, w1] = vals(*k.quartet[0]);
      const Scalar& mu = *k.mu[1];
      auto [r3, s3, t3, w3] = vals(*k.quartet[2]);
      s.aux["x"] = mu * mu * s1 / (r1 * w1);
      s.aux["y"] = mu * mu * r3 / (s3 * w3);
      break;
    }
    case RType::OOZ:
      s.e2 = a - c + j + kk + k.d;
      s.f2 = b + c + i - kk - k.d;
      break;
    case RType::ZOO:
      s.e2 = -a + c + i + j - k.d;
      s.f2 = a + b - i + kk + k.d;
      break;
    case RType::OZO:
      s.e2 = i + j + kk - b - k.d - 1;
      s.f2 = a + b + c - j + k.d + 1;
      break;
    case RType::OOO:
      break;
    case RType::XXZ: {
      long m = a - c + j + kk;
      s.h = mod2(m);
      s.g = (m - *s.h) / 2;
      break;
    }
    case RType::ZXX: {
      long m = -a + c + i + j;
      s.h = mod2(m);
      s.g = (m - *s.h) / 2;
      break;
    }
    case RType::XZX: {
      long m = -b + i + j + kk;
      s.h = mod2(m);
      s.g = (m - *s.h) / 2;
      break;
    }
  }
  return s;
}

std::optional<long> parity_functional(RType t, const Triple& out, const Triple& in) {
  const long a = out[0], b = out[1], c = out[2], i = in[0], j = in[1], k = in[2];
  switch (t) {
    case RType::ZZZ:
      return mod2(a + c - j) * 2 + mod2(b - i - k);  // the pair, packed
    case RType::OOZ:
    case RType::XXZ:
      return mod2(a - c + j + k);
    case RType::ZOO:
    case RType::ZXX:
      return mod2(-a + c + i + j);
    case RType::OZO:
      return mod2(a + b + c - j);
    case RType::XZX:
      return mod2(-b + i + j + k);
    default:
      return std::nullopt;  // single-sector types
  }
}

bool locally_finite(RType t) {
  return t == RType::OOZ || t == RType::ZOO || t == RType::OOO;
}

namespace {

Quartet inverted_quartet(const Quartet& q) {
  Quartet out;
  out.r = q.s;
  out.s = q.r;
  out.t = q.t * q.w;
  out.w = q.w.pow(-1);
  return out;
}

}  // namespace

RKernel invert_kernel(const RKernel& k) {
  if (!locally_finite(k.type))
    throw std::domain_error("invert_kernel: kernel is not locally finite");
  RKernel inv = k;
  switch (k.type) {
    case RType::OOZ:
      inv.mu[0] = k.mu[0]->inv();
      inv.mu[1] = k.mu[1]->inv();
      inv.quartet[2] = inverted_quartet(*k.quartet[2]);
      inv.d = -k.d;
      break;
    case RType::ZOO:
      inv.mu[1] = k.mu[1]->inv();
      inv.mu[2] = k.mu[2]->inv();
      inv.quartet[0] = inverted_quartet(*k.quartet[0]);
      inv.d = -k.d;
      break;
    case RType::OOO:
      inv.mu[0] = k.mu[0]->inv();
      inv.mu[1] = k.mu[1]->inv();
      inv.mu[2] = k.mu[2]->inv();
      break;
    default:
      break;
  }
  return inv;
}

Scalar r_inverse_element(const RKernel& k, const Triple& out, const Triple& in) {
  return r_element(invert_kernel(k), out, in);
}

Scalar sign_variant_element(const RKernel& k, int e1, int e2, int e3,
                            const Triple& out, const Triple& in) {
  if (k.type != RType::ZZZ)
    throw std::invalid_argument("sign_variant_element: ZZZ only");
  Triple o{e1 * out[0], e2 * out[1], e3 * out[2]};
  Triple n{e1 * in[0], e2 * in[1], e3 * in[2]};
  return r_element(k, o, n);
}

std::vector<Triple> out_fiber(const RKernel& k, const Triple& in) {
  const long i = in[0], j = in[1], kk = in[2];
  std::vector<Triple> out;
  auto push_if = [&](long a, long b, long c) {
    Triple t{a, b, c};
    if (support(k, t, in)) out.push_back(t);
  };
  switch (k.type) {
    case RType::OOZ: {
      if (i < 0 || j < 0) return out;
      for (long a = 0; a <= i + j; ++a) {
        long b = i + j - a;
        long clo = kk + k.d - b - i;
        long chi = kk + k.d - std::labs(b - i);
        for (long c = clo; c <= chi; ++c) push_if(a, b, c);
      }
      return out;
    }
    case RType::ZOO: {
      if (j < 0 || kk < 0) return out;
      for (long b = 0; b <= j + kk; ++b) {
        long c = j + kk - b;
        long alo = i - k.d - b - kk;
        long ahi = i - k.d - std::labs(b - kk);
        for (long a = alo; a <= ahi; ++a) push_if(a, b, c);
      }
      return out;
    }
    case RType::OOO: {
      if (i < 0 || j < 0 || kk < 0) return out;
      for (long b = 0; b <= std::min(i + j, j + kk); ++b)
        push_if(i + j - b, b, j + kk - b);
      return out;
    }
    default:
      throw std::domain_error("out_fiber: kernel is not locally finite");
  }
}

std::uint64_t pack_sextet(const Triple& out, const Triple& in) {
  std::uint64_t key = 0;
  for (long v : {out[0], out[1], out[2], in[0], in[1], in[2]}) {
    if (v < -500 || v > 500) throw std::out_of_range("pack_sextet: index out of range");
    key = (key << 10) | static_cast<std::uint64_t>(v + 512);
  }
  return key;
}

const Scalar& ElementCache::get(const Triple& out, const Triple& in) {
  // The support fast path is only sound for the unmutated formulas.
  if (k_->fault == Fault::None && !support(*k_, out, in)) return zero_;
  std::uint64_t key = pack_sextet(out, in);
  auto it = map_.find(key);
  if (it != map_.end()) return it->second;
  auto [pos, ok] = map_.emplace(key, r_element(*k_, out, in));
  return pos->second;
}

}  // namespace qtetra
