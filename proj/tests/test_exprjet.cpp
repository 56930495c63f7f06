// Order-2 jet propagation against central finite differences of the plain
// evaluator, plus the sampling and guard machinery of chart domains. The
// finite-difference values are the oracle: they are computed first, from
// eval_value alone, and the jets must reproduce them.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qs3/chart.hpp"
#include "qs3/errors.hpp"
#include "qs3/jet.hpp"

using namespace qs3;

namespace {

double fd_grad(const Expr& e, const Eigen::VectorXd& p, int i, double h) {
  Eigen::VectorXd pp = p, pm = p;
  pp(i) += h;
  pm(i) -= h;
  return (eval_value(e, pp) - eval_value(e, pm)) / (2.0 * h);
}

// Hessian row by central differences of first-order jet gradients; the
// second-order propagation rules under test play no part in it.
Eigen::VectorXd fd_hess_row(const Expr& e, const Eigen::VectorXd& p, int i, double h) {
  Eigen::VectorXd pp = p, pm = p;
  pp(i) += h;
  pm(i) -= h;
  return (eval_jet2(e, pp).grad - eval_jet2(e, pm).grad) / (2.0 * h);
}

// Pure-value second differences: noisier (rounding scales like eps/h^2) but
// fully independent of the jet engine.
double fd_hess_value(const Expr& e, const Eigen::VectorXd& p, int i, int j, double h) {
  if (i == j) {
    Eigen::VectorXd pp = p, pm = p;
    pp(i) += h;
    pm(i) -= h;
    return (eval_value(e, pp) - 2.0 * eval_value(e, p) + eval_value(e, pm)) / (h * h);
  }
  Eigen::VectorXd a = p, b = p, c = p, d = p;
  a(i) += h; a(j) += h;
  b(i) += h; b(j) -= h;
  c(i) -= h; c(j) += h;
  d(i) -= h; d(j) -= h;
  return (eval_value(e, a) - eval_value(e, b) - eval_value(e, c) + eval_value(e, d)) /
         (4.0 * h * h);
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

// Random expressions that stay smooth and finite on [-1, 1]^dim: division and
// square root only see arguments bounded away from zero.
Expr random_expr(std::mt19937_64& rng, int dim, int depth) {
  std::uniform_int_distribution<int> leaf(0, 2), op(0, 8), var(0, dim - 1);
  std::uniform_real_distribution<double> cst(-2.0, 2.0);
  if (depth == 0 || leaf(rng) == 0) {
    switch (leaf(rng)) {
      case 0: return Expr::var(var(rng));
      case 1: return Expr::constant(cst(rng));
      default: return Expr::rational(var(rng) + 1, 3);
    }
  }
  const Expr a = random_expr(rng, dim, depth - 1);
  const Expr b = random_expr(rng, dim, depth - 1);
  switch (op(rng)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return a / (2.5 + 0.5 * sin(b));        // denominator in [2, 3]
    case 4: return sqrt(1.5 + 0.5 * cos(a));        // argument in [1, 2]
    case 5: return sin(a) * cos(b);
    case 6: return exp(0.25 * sin(a));
    case 7: return pow_int(0.5 + 0.25 * sin(a), 3);
    default: return pow_int(sin(a), 2) + pow_int(cos(a), 2) * b;
  }
}

}  // namespace

TEST_CASE("jets match finite differences on random expressions") {
  const int dim = 4;
  std::mt19937_64 rng(0xe1u);
  const ChartDomain dom = ChartDomain::box(dim, 1.0);
  const auto pts = sample_points(dom, 10, 11);
  const double h = 1e-5;

  for (int k = 0; k < 60; ++k) {
    const Expr e = random_expr(rng, dim, 5);
    for (const auto& p : pts) {
      const Jet2 j = eval_jet2(e, dom, p);
      CHECK(j.value == doctest::Approx(eval_value(e, p)).epsilon(1e-14));
      for (int i = 0; i < dim; ++i) {
        CHECK(rel_err(j.grad(i), fd_grad(e, p, i, h)) <= 1e-7);
        const Eigen::VectorXd row = fd_hess_row(e, p, i, h);
        for (int jj = 0; jj < dim; ++jj) CHECK(rel_err(j.hess(i, jj), row(jj)) <= 1e-7);
      }
      // independent (noisier) cross-check of a few Hessian entries
      CHECK(rel_err(j.hess(0, 1), fd_hess_value(e, p, 0, 1, 1e-4)) <= 2e-5);
      CHECK(rel_err(j.hess(2, 2), fd_hess_value(e, p, 2, 2, 1e-4)) <= 2e-5);
    }
  }
}

TEST_CASE("frozen jet values of sqrt(1 - x^2)") {
  const Expr e = sqrt(1.0 - pow_int(Expr::var(0), 2));
  Eigen::VectorXd p(1);
  p << 0.6;
  const Jet2 j = eval_jet2(e, p);
  CHECK(j.value == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(j.grad(0) == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(j.hess(0, 0) == doctest::Approx(-1.953125).epsilon(1e-15));
}

TEST_CASE("shared subtrees evaluate like structural copies") {
  const Expr x = Expr::var(0), y = Expr::var(1);
  const Expr f = sin(x * y) + pow_int(x, 3);
  const Expr shared = f * f;                                      // one node, used twice
  const Expr copies = (sin(x * y) + pow_int(x, 3)) * (sin(x * y) + pow_int(x, 3));
  Eigen::VectorXd p(2);
  p << 0.3, -0.7;
  const Jet2 a = eval_jet2(shared, p), b = eval_jet2(copies, p);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-15));
  CHECK((a.grad - b.grad).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((a.hess - b.hess).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(shared.key() != copies.key());
  CHECK(f.min_dimension() == 2);
}

TEST_CASE("jet cache reuses results per point") {
  const Expr x = Expr::var(0);
  const Expr e = exp(sin(x)) / (2.0 + pow_int(x, 2));
  Eigen::VectorXd p(1);
  p << 0.4;
  JetCache cache(p);
  const Jet2 first = eval_jet2(e, cache);
  const Jet2 second = eval_jet2(e, cache);
  CHECK(first.value == second.value);
  CHECK(first.grad(0) == second.grad(0));
  CHECK(first.hess(0, 0) == second.hess(0, 0));
}

TEST_CASE("sampling is deterministic and respects the guard") {
  const ChartDomain dom = ChartDomain::box(3, 2.0);
  const auto a = sample_points(dom, 6, 42);
  const auto b = sample_points(dom, 6, 42);
  const auto c = sample_points(dom, 6, 43);
  REQUIRE(a.size() == 6);
  double rerun_diff = 0.0, reseed_diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    rerun_diff = std::max(rerun_diff, (a[i] - b[i]).cwiseAbs().maxCoeff());
    reseed_diff = std::max(reseed_diff, (a[i] - c[i]).cwiseAbs().maxCoeff());
    CHECK(dom.admissible(a[i]));
  }
  CHECK(rerun_diff == 0.0);
  CHECK(reseed_diff > 0.0);

  // guard carves a strip out of the box; samples must respect it
  const ChartDomain strip(2, Eigen::VectorXd::Constant(2, -1.0),
                          Eigen::VectorXd::Constant(2, 1.0),
                          Expr::rational(1, 4) - pow_int(Expr::var(0), 2));
  for (const auto& p : sample_points(strip, 20, 3)) CHECK(p(0) * p(0) < 0.25);
}

TEST_CASE("sampling exhaustion raises an error") {
  // positive at the centre but never above the acceptance margin
  const ChartDomain thin(2, Eigen::VectorXd::Constant(2, -1.0),
                         Eigen::VectorXd::Constant(2, 1.0), Expr::rational(1, 1000000000));
  CHECK_THROWS_AS((void)sample_points(thin, 4, 1), Error);
}

TEST_CASE("domain and finiteness violations are reported") {
  const ChartDomain dom = ChartDomain::box(2, 1.0);
  Eigen::VectorXd outside(2);
  outside << 3.0, 0.0;
  CHECK_THROWS_AS((void)eval_jet2(Expr::var(0), dom, outside), Error);

  Eigen::VectorXd p(2);
  p << 0.5, 0.0;
  CHECK_THROWS_AS((void)eval_jet2(Expr::var(0) / Expr::var(1), p), Error);
  CHECK_THROWS_AS((void)eval_jet2(sqrt(Expr::var(1) - 1.0), p), Error);

  try {
    (void)eval_jet2(Expr::var(0) / Expr::var(1), p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}
