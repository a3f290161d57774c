// Command-line front end: verification suites, element probes and
// machine-readable reports for the quantized six-vertex kernels.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtetra/aqsl3.hpp"
#include "qtetra/tetra.hpp"
#include "qtetra/verify.hpp"

namespace {

using namespace qtetra;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct WindowOpt {
  std::string f = "-3..3";
  std::string fplus = "0..4";
};

bool parse_range(const std::string& s, long* lo, long* hi) {
  auto pos = s.find("..");
  if (pos == std::string::npos) return false;
  try {
    *lo = std::stol(s.substr(0, pos));
    *hi = std::stol(s.substr(pos + 2));
  } catch (...) {
    return false;
  }
  return *lo <= *hi;
}

Window make_window(const WindowOpt& w) {
  Window out;
  if (!parse_range(w.f, &out.f_lo, &out.f_hi) ||
      !parse_range(w.fplus, &out.fp_lo, &out.fp_hi))
    throw CLI::ValidationError("window", "expected lo..hi");
  if (out.fp_lo < 0) throw CLI::ValidationError("window", "F+ window must start at >= 0");
  return out;
}

Fault parse_fault(const std::string& name) {
  static const std::map<std::string, Fault> kFaults = {
      {"none", Fault::None},
      {"zzz-phi-sign", Fault::ZzzPhiSign},
      {"zzz-swap-d34", Fault::ZzzSwapD3D4},
      {"ozz-sign-y", Fault::OzzSignY},
      {"zzo-poch-shift", Fault::ZzoPochShift},
      {"zoz-swap-xy", Fault::ZozSwapXY},
      {"ooz-negate-d", Fault::OozNegateD},
      {"zoo-poch-shift", Fault::ZooPochShift},
      {"zoo-swap-mu", Fault::ZooSwapMu},
      {"ozo-shift-f", Fault::OzoShiftF},
      {"ooo-sign-b", Fault::OooSignB},
      {"ooo-exp-shift", Fault::OooExpShift},
      {"xxz-flip-h", Fault::XxzFlipH},
      {"zxx-exp-shift", Fault::ZxxExpShift},
      {"xzx-sign-flip", Fault::XzxSignFlip},
  };
  auto it = kFaults.find(name);
  if (it == kFaults.end()) throw CLI::ValidationError("--inject-fault", "unknown fault " + name);
  return it->second;
}

void emit(const VerificationReport& rep, const std::string& out_path) {
  std::string doc = rep.to_json();
  if (out_path.empty()) {
    std::cout << doc;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    f << doc;
  }
  std::cerr << rep.suite << " " << rep.type << ": " << (rep.pass() ? "pass" : "FAIL")
            << " (" << rep.failures.size() << " failures, " << rep.elapsed_ms << " ms)\n";
}

// Optional parameter file: rationals as "num/den" strings, roots for the
// square-carrying fundamentals.
//   {"schema_version": 1, "q_root": "2/3",
//    "lines": {"1": {"mu": "25/49"} | {"r_root": "5/7", ...}}, "d": 1}
struct FileParams {
  SqrtScalar q;
  std::map<int, LineParams> lines;
  std::optional<long> d;
};

FileParams load_params(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CLI::ValidationError("--params", "cannot open " + path);
  nlohmann::json j;
  f >> j;
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
    throw CLI::ValidationError("--params", "unsupported schema_version");
  FileParams out;
  out.q = SqrtScalar::from_root(Scalar::from_string(j.at("q_root").get<std::string>()));
  for (auto& [key, line] : j.at("lines").items()) {
    LineParams lp;
    if (line.contains("mu")) {
      lp.mu = Scalar::from_string(line["mu"].get<std::string>());
    } else {
      Quartet qu;
      qu.r = SqrtScalar::from_root(Scalar::from_string(line.at("r_root").get<std::string>()));
      qu.s = SqrtScalar::from_root(Scalar::from_string(line.at("s_root").get<std::string>()));
      qu.t = SqrtScalar::from_root(Scalar::from_string(line.at("t_root").get<std::string>()));
      qu.w = SqrtScalar::from_root(Scalar::from_string(line.at("w_root").get<std::string>()));
      lp.quartet = qu;
    }
    out.lines[std::stoi(key)] = lp;
  }
  if (j.contains("d")) out.d = j["d"].get<long>();
  return out;
}

RlllSystem system_from_file(RType type, const FileParams& fp) {
  ParameterPoint pt;
  pt.q = fp.q;
  pt.lines.resize(3);
  for (int i = 0; i < 3; ++i) {
    auto it = fp.lines.find(i + 1);
    if (it == fp.lines.end())
      throw CLI::ValidationError("--params", "missing line " + std::to_string(i + 1));
    pt.lines[i] = it->second;
  }
  auto letters = type_letters(type);
  RKernel k;
  const SqrtScalar& q = pt.q;
  auto qt = [&](int i) -> const Quartet& {
    if (!pt.lines[i].quartet)
      throw CLI::ValidationError("--params", "line " + std::to_string(i + 1) + " needs a quartet");
    return *pt.lines[i].quartet;
  };
  auto mu = [&](int i) -> const Scalar& {
    if (!pt.lines[i].mu)
      throw CLI::ValidationError("--params", "line " + std::to_string(i + 1) + " needs mu");
    return *pt.lines[i].mu;
  };
  switch (type) {
    case RType::ZZZ: k = make_zzz(q, qt(0), qt(1), qt(2)); break;
    case RType::OZZ: k = make_ozz(q, mu(0), qt(1), qt(2)); break;
    case RType::ZZO: k = make_zzo(q, qt(0), qt(1), mu(2)); break;
    case RType::ZOZ: k = make_zoz(q, qt(0), mu(1), qt(2)); break;
    case RType::OOZ: k = make_ooz(q, mu(0), mu(1), qt(2)); break;
    case RType::ZOO: k = make_zoo(q, qt(0), mu(1), mu(2)); break;
    case RType::OZO: k = make_ozo(q, mu(0), qt(1), mu(2)); break;
    case RType::OOO: k = make_ooo(q, mu(0), mu(1), mu(2)); break;
    case RType::XXZ: k = make_xxz(q, qt(0), qt(1), qt(2)); break;
    case RType::ZXX: k = make_zxx(q, qt(0), qt(1), qt(2)); break;
    case RType::XZX: k = make_xzx(q, qt(0), qt(1), qt(2)); break;
  }
  return make_system_from_kernel(k);
}

int run_rlll(const std::string& type_s, std::uint64_t seed, int trials,
             const WindowOpt& wopt, const std::string& fault_s,
             const std::string& params_path, const std::string& out_path) {
  auto type = parse_rtype(type_s);
  if (!type) {
    std::cerr << "unknown kernel type " << type_s << "\n";
    return kExitConfig;
  }
  Window w = make_window(wopt);
  Fault fault = parse_fault(fault_s);
  VerificationReport total;
  bool first = true;
  for (int t = 0; t < trials; ++t) {
    RlllSystem sys;
    if (!params_path.empty()) {
      sys = system_from_file(*type, load_params(params_path));
      sys.kernel.fault = fault;
    } else {
      sys = make_rlll_system(*type, seed + t, fault);
    }
    VerificationReport rep = rlll_sweep(sys, w);
    rep.seed = seed + t;
    if (first) {
      total = rep;
      first = false;
    } else {
      total.params.clear();  // per-trial params differ; counts aggregate
      total.merge(rep);
    }
    if (!params_path.empty()) break;
  }
  total.counts["trials"] = params_path.empty() ? trials : 1;
  total.seed = seed;
  emit(total, out_path);
  return total.pass() ? kExitPass : kExitFail;
}

int run_rrrr(const std::string& type_s, bool all, std::uint64_t seed, int pairs,
             const WindowOpt& wopt, const std::string& fault_s, const std::string& out_path) {
  Window w = make_window(wopt);
  Fault fault = parse_fault(fault_s);
  std::vector<std::string> types;
  if (all) {
    types = finite_type_list();
  } else {
    if (!is_finite_type(type_s)) {
      std::cerr << "type " << type_s << " is not in the finite list\n";
      return kExitConfig;
    }
    types.push_back(type_s);
  }
  VerificationReport total;
  total.suite = "rrrr";
  total.type = all ? "all" : type_s;
  total.seed = seed;
  total.f_window = {w.f_lo, w.f_hi};
  total.fp_window = {w.fp_lo, w.fp_hi};
  for (const auto& t : types) {
    Wiring wiring = wire_parameters(t, seed);
    if (fault != Fault::None)
      for (auto& k : wiring.factors) k.fault = fault;
    VerificationReport rep = rrrr_sweep_wiring(wiring, seed, pairs, w);
    for (auto& f : rep.failures) f.note = t;
    if (types.size() == 1) total.params = rep.params;
    total.counts["types"] += 1;
    total.merge(rep);
  }
  emit(total, out_path);
  return total.pass() ? kExitPass : kExitFail;
}

bool parse_triple(const std::string& s, Triple* out) {
  long v[3];
  if (sscanf(s.c_str(), "%ld,%ld,%ld", &v[0], &v[1], &v[2]) != 3) return false;
  *out = {v[0], v[1], v[2]};
  return true;
}

int run_element(const std::string& type_s, std::uint64_t seed, const std::string& out_s,
                const std::string& in_s, const std::string& params_path) {
  auto type = parse_rtype(type_s);
  if (!type) {
    std::cerr << "unknown kernel type " << type_s << "\n";
    return kExitConfig;
  }
  Triple out, in;
  if (!parse_triple(out_s, &out) || !parse_triple(in_s, &in)) {
    std::cerr << "indices must be comma-separated integer triples\n";
    return kExitConfig;
  }
  RlllSystem sys = params_path.empty()
                       ? make_rlll_system(*type, seed)
                       : system_from_file(*type, load_params(params_path));
  Scalar v = r_element(sys.kernel, out, in);
  SectorData sec = sector_of(sys.kernel, out, in);
  nlohmann::ordered_json j;
  j["type"] = type_s;
  j["out"] = {out[0], out[1], out[2]};
  j["in"] = {in[0], in[1], in[2]};
  j["value"] = v.str();
  j["support"] = support(sys.kernel, out, in);
  if (!support(sys.kernel, out, in)) {
    j["note"] = "outside the kernel support: delta/interval/parity predicate fails";
  }
  if (sec.dvec) j["d"] = *sec.dvec;
  if (sec.phi4) j["phi4"] = *sec.phi4;
  if (sec.e2) j["e2"] = *sec.e2;
  if (sec.f2) j["f2"] = *sec.f2;
  if (sec.g) j["g"] = *sec.g;
  if (sec.h) j["h"] = *sec.h;
  for (const auto& [k2, s] : sec.aux) j[k2] = s.str();
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int run_intertwiner(const std::string& mode_s, std::uint64_t seed, const WindowOpt& wopt,
                    int violate, const std::string& out_path) {
  Window w = make_window(wopt);
  IntertwinerConfig cfg;
  if (mode_s == "OOO") {
    cfg = sample_intertwiner_config(IntertwinerConfig::Mode::OOO, seed);
  } else if (mode_s == "ZZZ") {
    cfg = violate ? sample_intertwiner_config_violated(seed, violate)
                  : sample_intertwiner_config(IntertwinerConfig::Mode::ZZZ, seed);
  } else {
    std::cerr << "mode must be OOO or ZZZ\n";
    return kExitConfig;
  }
  VerificationReport rep = intertwiner_check(cfg, w);
  rep.seed = seed;
  if (cfg.mode == IntertwinerConfig::Mode::ZZZ) {
    VerificationReport ab = prop41_constant_check(cfg);
    rep.merge(ab);
  }
  emit(rep, out_path);
  return rep.pass() ? kExitPass : kExitFail;
}

int run_algebra_check(const std::string& tag_s, int rho, std::uint64_t seed,
                      const WindowOpt& wopt, const std::string& out_path) {
  Window w = make_window(wopt);
  Rng rng(seed);
  int cursor = static_cast<int>(rng.next() % 24);
  SqrtScalar q = sample_q(rng);
  VerificationReport rep;
  if (rho == 0) {
    RepTag tag;
    if (tag_s == "Z+" || tag_s == "Z") tag = RepTag::ZPlus;
    else if (tag_s == "Z-") tag = RepTag::ZMinus;
    else if (tag_s == "X") tag = RepTag::X;
    else if (tag_s == "O") tag = RepTag::O;
    else {
      std::cerr << "unknown representation tag " << tag_s << "\n";
      return kExitConfig;
    }
    long lo = tag == RepTag::O ? std::max(0L, w.fp_lo) : w.f_lo;
    long hi = tag == RepTag::O ? w.fp_hi : w.f_hi;
    rep = check_algebra_relations(tag, lo, hi, q.value());
  } else {
    RhoParams p{sample_fundamental(rng, &cursor).value(),
                sample_fundamental(rng, &cursor).value(),
                sample_fundamental(rng, &cursor).value()};
    auto img = rho_images(rho, p, q.value());
    RepTag tag = tag_s == "X" ? RepTag::X : RepTag::ZPlus;
    rep = check_coordinate_ring_relations(img, tag, w.f_lo, w.f_hi, q.value());
    rep.type = "rho" + std::to_string(rho) + "/" + tag_s;
  }
  rep.seed = seed;
  emit(rep, out_path);
  return rep.pass() ? kExitPass : kExitFail;
}

int run_recursions(const std::string& type_s, std::uint64_t seed, const std::string& out_s,
                   const std::string& in_s) {
  auto type = parse_rtype(type_s);
  if (!type) {
    std::cerr << "unknown kernel type " << type_s << "\n";
    return kExitConfig;
  }
  Triple out, in;
  if (!parse_triple(out_s, &out) || !parse_triple(in_s, &in)) {
    std::cerr << "indices must be comma-separated integer triples\n";
    return kExitConfig;
  }
  RlllSystem sys = make_rlll_system(*type, seed);
  const Scalar& q = sys.q.value();
  nlohmann::ordered_json doc;
  doc["type"] = type_s;
  doc["out"] = {out[0], out[1], out[2]};
  doc["in"] = {in[0], in[1], in[2]};
  doc["relations"] = nlohmann::ordered_json::array();
  for (const VIdx& v : conserving_vidx(false)) {
    nlohmann::ordered_json rel;
    rel["v"] = {v.a, v.b, v.c, v.i, v.j, v.k};
    auto lhs_terms = comp_apply(composite_left(sys.L[0], sys.L[1], sys.L[2], v),
                                sys.tags, in, q);
    auto rhs_terms = comp_apply_transposed(composite_right(sys.L[0], sys.L[1], sys.L[2], v),
                                           sys.tags, out, q);
    Scalar lhs(0), rhs(0);
    rel["lhs_terms"] = nlohmann::ordered_json::array();
    for (const auto& [mid, c] : lhs_terms) {
      rel["lhs_terms"].push_back({{"coeff", c.str()}, {"R_out_mid", {mid[0], mid[1], mid[2]}}});
      lhs += c * r_element(sys.kernel, out, mid);
    }
    rel["rhs_terms"] = nlohmann::ordered_json::array();
    for (const auto& [mid, c] : rhs_terms) {
      rel["rhs_terms"].push_back({{"coeff", c.str()}, {"R_mid_in", {mid[0], mid[1], mid[2]}}});
      rhs += c * r_element(sys.kernel, mid, in);
    }
    rel["lhs"] = lhs.str();
    rel["rhs"] = rhs.str();
    rel["equal"] = lhs == rhs;
    doc["relations"].push_back(rel);
  }
  std::cout << doc.dump(2) << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification of quantized six-vertex kernels and tetrahedron identities"};
  app.require_subcommand(1);

  std::string type, fault = "none", params_path, out_path;
  std::uint64_t seed = 1;
  int trials = 1, pairs = 500, violate = 0, rho = 0;
  bool all = false;
  WindowOpt wopt;
  std::string out_idx = "0,0,0", in_idx = "0,0,0", mode = "OOO", tag = "Z+";

  auto add_window = [&](CLI::App* cmd) {
    cmd->add_option("--window", wopt.f, "F-line index window lo..hi")->capture_default_str();
    cmd->add_option("--fplus-window", wopt.fplus, "F+-line index window lo..hi")
        ->capture_default_str();
  };

  CLI::App* rlll = app.add_subcommand("rlll", "verify the conjugated six-vertex relation");
  rlll->add_option("--type", type, "kernel type (ZZZ, OZZ, ...)")->required();
  rlll->add_option("--seed", seed, "sampling seed")->required();
  rlll->add_option("--trials", trials, "number of parameter points")->capture_default_str();
  rlll->add_option("--inject-fault", fault, "test instrumentation: mutate a kernel formula");
  rlll->add_option("--params", params_path, "JSON parameter file (overrides sampling)");
  rlll->add_option("--out", out_path, "write the JSON report here");
  add_window(rlll);

  CLI::App* rrrr = app.add_subcommand("rrrr", "verify four-kernel tetrahedron identities");
  rrrr->add_option("--type", type, "six-letter type (ZOOOOO, ...)");
  rrrr->add_flag("--all", all, "iterate every finitely checkable type");
  rrrr->add_option("--seed", seed, "sampling seed")->required();
  rrrr->add_option("--pairs", pairs, "sextet pairs per type")->capture_default_str();
  rrrr->add_option("--inject-fault", fault, "test instrumentation: mutate a kernel formula");
  rrrr->add_option("--out", out_path, "write the JSON report here");
  add_window(rrrr);

  CLI::App* element = app.add_subcommand("element", "print one kernel element with sector data");
  element->add_option("--type", type)->required();
  element->add_option("--seed", seed)->capture_default_str();
  element->add_option("--out-idx", out_idx, "a,b,c")->required();
  element->add_option("--in-idx", in_idx, "i,j,k")->required();
  element->add_option("--params", params_path, "JSON parameter file");

  CLI::App* inter = app.add_subcommand("intertwiner", "coordinate-ring intertwiner checks");
  inter->add_option("--mode", mode, "OOO or ZZZ")->capture_default_str();
  inter->add_option("--seed", seed)->required();
  inter->add_option("--violate", violate, "break one constraint equation (1..9, ZZZ mode)");
  inter->add_option("--out", out_path, "write the JSON report here");
  add_window(inter);

  CLI::App* alg = app.add_subcommand("algebra-check", "verify defining algebra relations");
  alg->add_option("--tag", tag, "representation: Z+, Z-, X or O")->capture_default_str();
  alg->add_option("--rho", rho, "coordinate-ring image 1 or 2 (0 = plain Weyl/oscillator)")
      ->capture_default_str();
  alg->add_option("--seed", seed)->capture_default_str();
  alg->add_option("--out", out_path, "write the JSON report here");
  add_window(alg);

  CLI::App* rec = app.add_subcommand("recursions",
                                     "print the 18 component relations at an index pair");
  rec->add_option("--type", type)->required();
  rec->add_option("--seed", seed)->capture_default_str();
  rec->add_option("--out-idx", out_idx, "a,b,c")->required();
  rec->add_option("--in-idx", in_idx, "i,j,k")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (rlll->parsed()) return run_rlll(type, seed, trials, wopt, fault, params_path, out_path);
    if (rrrr->parsed()) {
      if (!all && type.empty()) {
        std::cerr << "rrrr needs --type or --all\n";
        return kExitConfig;
      }
      return run_rrrr(type, all, seed, pairs, wopt, fault, out_path);
    }
    if (element->parsed()) return run_element(type, seed, out_idx, in_idx, params_path);
    if (inter->parsed()) return run_intertwiner(mode, seed, wopt, violate, out_path);
    if (alg->parsed()) return run_algebra_check(tag, rho, seed, wopt, out_path);
    if (rec->parsed()) return run_recursions(type, seed, out_idx, in_idx);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
