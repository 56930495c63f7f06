#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "qs3/errors.hpp"
#include "qs3/report.hpp"
#include "qs3/zoo.hpp"

namespace qs3 {

const char* to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::Pass: return "pass";
    case RecordStatus::Fail: return "fail";
    case RecordStatus::NotApplicable: return "n/a";
    case RecordStatus::Unstable: return "unstable";
  }
  return "?";
}

int RunReport::count(RecordStatus s) const {
  return static_cast<int>(
      std::count_if(records.begin(), records.end(),
                    [s](const IdentityRecord& r) { return r.status == s; }));
}

bool RunReport::ok() const {
  return self_check_ok && count(RecordStatus::Fail) == 0 &&
         count(RecordStatus::Unstable) == 0;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "structure", "core_identities", "rank4l3", "connections",
      "curvature", "ricci",           "pairs",   "cone"};
  return names;
}

bool is_suite_name(const std::string& s) {
  const auto& names = suite_names();
  return std::find(names.begin(), names.end(), s) != names.end();
}

std::string to_json(const RunReport& r) {
  nlohmann::json j;
  j["model"] = r.model_name;
  j["dimension"] = r.dimension;
  j["config"] = {{"points", r.config.points}, {"seed", r.config.seed},
                 {"tol", r.config.tol},       {"fd_step", r.config.fd_step},
                 {"suites", r.config.suites}};
  j["self_check"] = {{"ok", r.self_check_ok}, {"max_residual", r.self_check_residual}};
  j["classification"] = {{"classified", r.classified},
                         {"tag", r.tag},
                         {"rank", r.rank},
                         {"c", r.c},
                         {"l", r.l},
                         {"m", r.m}};
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& rec : r.records) {
    recs.push_back({{"suite", rec.suite},
                    {"id", rec.id},
                    {"statement", rec.statement},
                    {"tolerance", rec.tolerance},
                    {"max_residual", rec.max_residual},
                    {"points", rec.points},
                    {"status", to_string(rec.status)},
                    {"message", rec.message}});
  }
  j["records"] = std::move(recs);
  j["summary"] = {{"pass", r.count(RecordStatus::Pass)},
                  {"fail", r.count(RecordStatus::Fail)},
                  {"n_a", r.count(RecordStatus::NotApplicable)},
                  {"unstable", r.count(RecordStatus::Unstable)},
                  {"verdict", r.ok() ? "ok" : "fail"}};
  return j.dump(2) + "\n";
}

std::string to_text(const RunReport& r) {
  std::ostringstream out;
  char line[512];

  out << "model: " << r.model_name << "    dimension: " << r.dimension << "\n";
  std::snprintf(line, sizeof(line), "self-check: %s    max residual: %.3g\n",
                r.self_check_ok ? "ok" : "FAILED", r.self_check_residual);
  out << line;
  if (r.classified) {
    std::snprintf(line, sizeof(line),
                  "classification: %s (rank %d, c = %.6g, l = %d, m = %d)\n", r.tag.c_str(),
                  r.rank, r.c, r.l, r.m);
    out << line;
  } else {
    out << "classification: unavailable\n";
  }
  std::snprintf(line, sizeof(line), "config: points=%d seed=%llu tol=%.3g fd-step=%.3g\n",
                r.config.points, static_cast<unsigned long long>(r.config.seed),
                r.config.tol, r.config.fd_step);
  out << line;

  std::string suite;
  for (const auto& rec : r.records) {
    if (rec.suite != suite) {
      suite = rec.suite;
      out << "\n[" << suite << "]\n";
    }
    if (rec.status == RecordStatus::NotApplicable)
      std::snprintf(line, sizeof(line), "  %-8s  %-32s  %s\n", "n/a", rec.id.c_str(),
                    rec.message.c_str());
    else
      std::snprintf(line, sizeof(line), "  %-8s  %-32s  max %-10.3g tol %-8.2g (%d pts)%s%s\n",
                    to_string(rec.status), rec.id.c_str(), rec.max_residual, rec.tolerance,
                    rec.points, rec.message.empty() ? "" : "  -- ", rec.message.c_str());
    out << line;
  }

  std::snprintf(line, sizeof(line),
                "\nsummary: %d pass / %d fail / %d n-a / %d unstable -> %s\n",
                r.count(RecordStatus::Pass), r.count(RecordStatus::Fail),
                r.count(RecordStatus::NotApplicable), r.count(RecordStatus::Unstable),
                r.ok() ? "OK" : "FAIL");
  out << line;
  return out.str();
}

const std::vector<ModelEntry>& model_registry() {
  static const std::vector<ModelEntry> entries = {
      {"flat", "flat torus-like chart of dimension 4n+3; the closed family (c = 0)", "n"},
      {"s3", "round 3-sphere of radius r; maximal rank, c = 2/r", "r"},
      {"s7", "round 7-sphere of radius r; maximal rank, c = 2/r", "r"},
      {"sphere", "round (4n+3)-sphere of radius r; maximal rank, c = 2/r", "n, r"},
      {"s3xr4", "S^3(r) x R^4; proper, rank 3 in dimension 7", "r"},
      {"s3xr8", "S^3(r) x R^8; proper, rank 3 in dimension 11", "r"},
      {"product", "S^(4l+3)(r) x R^(4m); proper, rank 4l+3 in dimension 4l+3+4m",
       "l, m, r"},
  };
  return entries;
}

ManifoldModel build_model(const std::string& name, int n, int l, int m, double r,
                          double alpha) {
  ManifoldModel M;
  if (name == "flat")
    M = flat_three_cosymplectic(n);
  else if (name == "s3")
    M = sphere_three_alpha(0, r);
  else if (name == "s7")
    M = sphere_three_alpha(1, r);
  else if (name == "sphere")
    M = sphere_three_alpha(n, r);
  else if (name == "s3xr4")
    M = product_three_qs(0, 1, r);
  else if (name == "s3xr8")
    M = product_three_qs(0, 2, r);
  else if (name == "product")
    M = product_three_qs(l, m, r);
  else
    fail(ErrorKind::UnknownModel, "unknown model '" + name + "'; see the models command");
  if (alpha > 0.0) M = homothetic_deform(M, alpha);
  return M;
}

}  // namespace qs3
