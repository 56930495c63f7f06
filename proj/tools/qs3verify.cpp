// Command-line front end: builds a named model, runs the requested identity
// suites at seeded sample points, prints a text report and optionally writes
// the canonical JSON report. Exit code 0 means every record passed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qs3/errors.hpp"
#include "qs3/report.hpp"
#include "qs3/zoo.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

struct Perturbation {
  std::string which;
  int a = 0, i = 0, j = 0;
  double delta = 0.0;
};

Perturbation parse_perturb(const std::string& s) {
  Perturbation p;
  std::stringstream ss(s);
  std::string tok;
  std::vector<std::string> parts;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() != 5)
    qs3::fail(qs3::ErrorKind::InvalidArgument,
              "--perturb expects which:a:i:j:delta, e.g. phi:0:1:2:1e-3");
  p.which = parts[0];
  p.a = std::stoi(parts[1]);
  p.i = std::stoi(parts[2]);
  p.j = std::stoi(parts[3]);
  p.delta = std::stod(parts[4]);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of almost contact metric 3-structures"};
  app.require_subcommand(1);

  std::string model, suites_csv, report_path, perturb_spec;
  int n = 1, l = 0, m = 1, points = 8;
  double r = 1.0, alpha = 0.0, tol = 1e-7, fd_step = 1e-4;
  std::uint64_t seed = 1;

  std::string suites_help = "comma-separated subset of:";
  for (const auto& s : qs3::suite_names()) suites_help += " " + s;

  auto add_model_options = [&](CLI::App* cmd) {
    cmd->add_option("--model", model, "registry model name (see the models command)")
        ->required();
    cmd->add_option("--n", n, "sphere block count for flat / sphere (default 1)");
    cmd->add_option("--l", l, "sphere parameter of product (default 0)");
    cmd->add_option("--m", m, "flat-block parameter of product (default 1)");
    cmd->add_option("--r", r, "sphere radius (default 1)");
    cmd->add_option("--alpha", alpha,
                    "apply the homothetic deformation with this scale (> 0)");
  };

  CLI::App* verify = app.add_subcommand("verify", "run identity suites on a model");
  add_model_options(verify);
  verify->add_option("--points", points, "number of sample points (default 8)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "sampling seed (default 1)");
  verify->add_option("--tol", tol, "default tolerance (default 1e-7)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--fd-step", fd_step,
                     "step of the finite-difference connection check (default 1e-4)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--suites", suites_csv, suites_help)
      ->check([](const std::string& csv) -> std::string {
        for (const auto& s : split_csv(csv))
          if (!qs3::is_suite_name(s)) return "unknown suite '" + s + "'";
        return {};
      });
  verify->add_option("--report", report_path, "write the JSON report to this file");
  verify->add_option("--perturb", perturb_spec,
                     "inject a single-component fault, format which:a:i:j:delta with "
                     "which in {g, phi, xi, eta}");

  CLI::App* models = app.add_subcommand("models", "list the model registry");

  CLI::App* describe = app.add_subcommand("describe", "show one model in detail");
  add_model_options(describe);

  CLI11_PARSE(app, argc, argv);

  try {
    if (models->parsed()) {
      for (const auto& e : qs3::model_registry())
        std::printf("%-10s params: %-9s %s\n", e.name.c_str(), e.parameters.c_str(),
                    e.description.c_str());
      return 0;
    }

    if (describe->parsed()) {
      const qs3::ManifoldModel M = qs3::build_model(model, n, l, m, r, alpha);
      std::printf("name:        %s\n", M.name.c_str());
      std::printf("dimension:   %d\n", M.dim());
      if (M.declared_c) std::printf("declared c:  %g\n", *M.declared_c);
      std::printf("chart box:   [%g, %g] x ... (%d coordinates)\n", M.dom.lo(0), M.dom.hi(0),
                  M.dom.dimension);
      std::printf("block data:  %zu E4l fields, %zu E4m fields, projections %s/%s\n",
                  M.e4l_fields.size(), M.e4m_fields.size(),
                  M.proj_e4l.empty() ? "-" : "E4l", M.proj_e4m.empty() ? "-" : "E4m");
      for (const auto& e : qs3::model_registry())
        if (e.name == model) std::printf("about:       %s\n", e.description.c_str());
      return 0;
    }

    qs3::ManifoldModel M = qs3::build_model(model, n, l, m, r, alpha);
    if (!perturb_spec.empty()) {
      const Perturbation p = parse_perturb(perturb_spec);
      M = qs3::perturb_component(M, p.which, p.a, p.i, p.j, p.delta);
    }

    qs3::RunConfig cfg;
    cfg.points = points;
    cfg.seed = seed;
    cfg.tol = tol;
    cfg.fd_step = fd_step;
    cfg.suites = split_csv(suites_csv);

    const qs3::RunReport rep = qs3::run_verification(M, cfg);
    std::cout << qs3::to_text(rep);
    if (!report_path.empty()) {
      std::ofstream out(report_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << report_path << "\n";
        return 2;
      }
      out << qs3::to_json(rep);
    }
    return rep.ok() ? 0 : 1;
  } catch (const qs3::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
