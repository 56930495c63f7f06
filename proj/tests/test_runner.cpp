// End-to-end verification runs: every identity suite must go green on the
// healthy zoo models, reports must be deterministic, and injected faults must
// surface as failing records in every requested suite.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "qs3/errors.hpp"
#include "qs3/report.hpp"
#include "qs3/zoo.hpp"

using namespace qs3;

namespace {

RunConfig quick_config(int points = 4) {
  RunConfig cfg;
  cfg.points = points;
  cfg.seed = 2;
  return cfg;
}

int failing_records(const RunReport& rep, const std::string& suite) {
  int n = 0;
  for (const auto& r : rep.records)
    if (r.suite == suite &&
        (r.status == RecordStatus::Fail || r.status == RecordStatus::Unstable))
      ++n;
  return n;
}

}  // namespace

TEST_CASE("mixed product goes green across all suites") {
  const RunReport rep = run_verification(product_three_qs(0, 1, 1.0), quick_config());
  CHECK(rep.self_check_ok);
  CHECK(rep.classified);
  CHECK(rep.tag == "proper 3-quasi-Sasakian");
  CHECK(rep.rank == 3);
  CHECK(rep.c == doctest::Approx(2.0).epsilon(1e-10));
  for (const auto& r : rep.records) {
    INFO(r.suite, "/", r.id, " -> ", std::string(to_string(r.status)), " residual ", r.max_residual,
         " : ", r.message);
    CHECK((r.status == RecordStatus::Pass || r.status == RecordStatus::NotApplicable));
  }
  CHECK(rep.ok());
  // every suite produced records
  std::set<std::string> suites;
  for (const auto& r : rep.records) suites.insert(r.suite);
  CHECK(suites.size() == suite_names().size());
}

TEST_CASE("maximal-rank sphere goes green across all suites") {
  const RunReport rep = run_verification(sphere_three_alpha(1, 1.0), quick_config());
  CHECK(rep.tag == "3-Sasakian");
  CHECK(rep.rank == 7);
  for (const auto& r : rep.records) {
    INFO(r.suite, "/", r.id, " -> ", std::string(to_string(r.status)), " residual ", r.max_residual,
         " : ", r.message);
    CHECK((r.status == RecordStatus::Pass || r.status == RecordStatus::NotApplicable));
  }
  CHECK(rep.ok());
}

TEST_CASE("closed family goes green and skips the rank-block suites") {
  const RunReport rep = run_verification(flat_three_cosymplectic(1), quick_config());
  CHECK(rep.tag == "3-cosymplectic");
  CHECK(rep.rank == 1);
  CHECK(rep.c == 0.0);
  CHECK(rep.ok());
  bool pairs_na = false, rank_na = false;
  for (const auto& r : rep.records) {
    if (r.suite == "pairs") pairs_na = pairs_na || r.status == RecordStatus::NotApplicable;
    if (r.suite == "rank4l3") rank_na = rank_na || r.status == RecordStatus::NotApplicable;
    INFO(r.suite, "/", r.id, " -> ", std::string(to_string(r.status)), " residual ", r.max_residual);
    CHECK((r.status == RecordStatus::Pass || r.status == RecordStatus::NotApplicable));
  }
  CHECK(pairs_na);
  CHECK(rank_na);
}

TEST_CASE("homothetic deformation of a sphere verifies as alpha-Sasakian") {
  const RunReport rep =
      run_verification(build_model("s7", 0, 0, 0, 1.0, 2.0), quick_config(3));
  CHECK(rep.tag == "3-alpha-Sasakian");
  CHECK(rep.c == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.ok());
}

TEST_CASE("suite selection runs exactly the requested suites in canonical order") {
  RunConfig cfg = quick_config(2);
  cfg.suites = {"curvature", "structure"};  // order given by the caller is not kept
  const RunReport rep = run_verification(sphere_three_alpha(0, 1.0), cfg);
  std::vector<std::string> seen;
  for (const auto& r : rep.records)
    if (seen.empty() || seen.back() != r.suite) seen.push_back(r.suite);
  REQUIRE(seen.size() == 2);
  CHECK(seen[0] == "curvature");
  CHECK(seen[1] == "structure");

  RunConfig bad = quick_config(2);
  bad.suites = {"nonsense"};
  CHECK_THROWS_AS((void)run_verification(sphere_three_alpha(0, 1.0), bad), Error);
}

TEST_CASE("reports are byte-identical for identical configs") {
  const ManifoldModel M = product_three_qs(0, 1, 1.0);
  RunConfig cfg = quick_config(3);
  const std::string a = to_json(run_verification(M, cfg));
  const std::string b = to_json(run_verification(M, cfg));
  CHECK(a == b);
  CHECK(a.find("\"verdict\": \"ok\"") != std::string::npos);

  const std::string text = to_text(run_verification(M, cfg));
  CHECK(text.find("-> OK") != std::string::npos);
  CHECK(text.find("proper 3-quasi-Sasakian") != std::string::npos);
}

TEST_CASE("every suite flags an injected fault") {
  const ManifoldModel M = product_three_qs(0, 1, 1.0);
  const RunConfig cfg = quick_config(3);
  struct Fault {
    const char* which;
    int a, i, j;
  };
  const Fault faults[] = {{"g", 0, 2, 5}, {"phi", 1, 0, 3}, {"xi", 2, 1, 0}, {"eta", 0, 4, 0}};
  for (const auto& f : faults) {
    const ManifoldModel bad = perturb_component(M, f.which, f.a, f.i, f.j, 1e-3);
    const RunReport rep = run_verification(bad, cfg);
    INFO("fault on ", f.which);
    CHECK_FALSE(rep.ok());
    for (const auto& s : suite_names()) CHECK(failing_records(rep, s) >= 1);
  }
}

TEST_CASE("registry builds every advertised model") {
  CHECK(build_model("flat", 1, 0, 0, 1.0, 0.0).dim() == 7);
  CHECK(build_model("s3", 0, 0, 0, 1.0, 0.0).dim() == 3);
  CHECK(build_model("s7", 0, 0, 0, 2.0, 0.0).dim() == 7);
  CHECK(build_model("sphere", 2, 0, 0, 1.0, 0.0).dim() == 11);
  CHECK(build_model("s3xr4", 0, 0, 0, 1.0, 0.0).dim() == 7);
  CHECK(build_model("s3xr8", 0, 0, 0, 1.0, 0.0).dim() == 11);
  CHECK(build_model("product", 0, 1, 1, 1.0, 0.0).dim() == 11);
  CHECK_THROWS_AS((void)build_model("klein", 0, 0, 0, 1.0, 0.0), Error);
  CHECK(model_registry().size() == 7);

  const ManifoldModel D = build_model("s3", 0, 0, 0, 1.0, 3.0);
  CHECK(D.name == "deform(sphere(0,1),3)");
  REQUIRE(D.declared_c.has_value());
  CHECK(*D.declared_c == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}
