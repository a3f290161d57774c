#include "qtetra/report.hpp"

#include <algorithm>

#include <json.hpp>

namespace qtetra {

void VerificationReport::sort_failures() { std::sort(failures.begin(), failures.end()); }

void VerificationReport::merge(const VerificationReport& o) {
  for (const auto& [k, v] : o.counts) counts[k] += v;
  failures.insert(failures.end(), o.failures.begin(), o.failures.end());
  elapsed_ms += o.elapsed_ms;
  sort_failures();
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["type"] = type;
  j["seed"] = seed;
  j["window"] = {{"f", {f_window[0], f_window[1]}}, {"fplus", {fp_window[0], fp_window[1]}}};
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  j["counts"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : counts) j["counts"][k] = v;
  j["pass"] = pass();
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : failures) {
    nlohmann::ordered_json jf;
    jf["vidx"] = f.vidx;
    jf["out"] = f.out;
    jf["in"] = f.in;
    jf["lhs"] = f.lhs;
    jf["rhs"] = f.rhs;
    if (!f.note.empty()) jf["note"] = f.note;
    j["failures"].push_back(jf);
  }
  return j.dump(2) + "\n";
}

}  // namespace qtetra
