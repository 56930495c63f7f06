#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qs3/model.hpp"

namespace qs3 {

enum class RecordStatus { Pass, Fail, NotApplicable, Unstable };
const char* to_string(RecordStatus s);

// One verified identity, aggregated over all sampled points: the worst
// residual seen, the tolerance it was held to, and the verdict. `statement`
// carries the formula in plain text so reports are readable standalone.
struct IdentityRecord {
  std::string suite;
  std::string id;
  std::string statement;
  double tolerance = 0.0;
  double max_residual = 0.0;
  int points = 0;
  RecordStatus status = RecordStatus::Pass;
  std::string message;
};

struct RunConfig {
  int points = 8;
  std::uint64_t seed = 1;
  double tol = 1e-7;
  double fd_step = 1e-4;
  std::vector<std::string> suites;  // validated names; empty means all
};

struct RunReport {
  std::string model_name;
  int dimension = 0;
  RunConfig config;

  bool self_check_ok = false;
  double self_check_residual = 0.0;

  bool classified = false;
  std::string tag;
  int rank = 0;
  int l = -1, m = -1;
  double c = 0.0;

  std::vector<IdentityRecord> records;

  int count(RecordStatus s) const;
  // Overall verdict: self-check passed and no record failed or was unstable.
  bool ok() const;
};

// Canonical suite order; also the dispatch order of run_verification.
const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& s);

// Runs the requested suites on the model at seeded sample points. A failed
// structural self-check short-circuits: every requested suite then reports a
// single failed preconditions record instead of running on a broken model.
RunReport run_verification(const ManifoldModel& M, const RunConfig& cfg);

// Deterministic serializations: identical configs give byte-identical output.
std::string to_json(const RunReport& r);
std::string to_text(const RunReport& r);

// -- named model registry (shared by the CLI and the acceptance tests) -------

struct ModelEntry {
  std::string name;
  std::string description;
  std::string parameters;  // which of n / l / m / r the name consumes
};
const std::vector<ModelEntry>& model_registry();

// Builds a registry model; `alpha` > 0 additionally applies the homothetic
// deformation with that scale. Throws UnknownModel for names not listed.
ManifoldModel build_model(const std::string& name, int n, int l, int m, double r, double alpha);

}  // namespace qs3
