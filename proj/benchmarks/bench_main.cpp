// Micro-benchmarks for the hot paths of a verification run: jet evaluation,
// connection and curvature assembly, the covariant-derivative expansion of
// phi, and the tangent splitting.

#include <benchmark/benchmark.h>

#include "qs3/foliation.hpp"
#include "qs3/geometry.hpp"
#include "qs3/report.hpp"
#include "qs3/zoo.hpp"

using namespace qs3;

namespace {

const ManifoldModel& s7() {
  static const ManifoldModel M = sphere_three_alpha(1, 1.0);
  return M;
}

const ManifoldModel& mixed() {
  static const ManifoldModel M = product_three_qs(0, 1, 1.0);
  return M;
}

Eigen::VectorXd point_of(const ManifoldModel& M) {
  return sample_points(M.dom, 1, 5)[0];
}

void BM_JetMetricComponent(benchmark::State& state) {
  const ManifoldModel& M = s7();
  const Eigen::VectorXd p = point_of(M);
  const Expr& e = M.g[0][1];
  for (auto _ : state) {
    JetCache cache(p);
    benchmark::DoNotOptimize(eval_jet2(e, cache));
  }
}
BENCHMARK(BM_JetMetricComponent);

void BM_MetricPack(benchmark::State& state) {
  const ManifoldModel& M = s7();
  const Eigen::VectorXd p = point_of(M);
  for (auto _ : state) {
    PointCtx ctx(M, p);
    benchmark::DoNotOptimize(&ctx.metric());
  }
}
BENCHMARK(BM_MetricPack);

void BM_Christoffel(benchmark::State& state) {
  const ManifoldModel& M = s7();
  const Eigen::VectorXd p = point_of(M);
  for (auto _ : state) {
    PointCtx ctx(M, p);
    benchmark::DoNotOptimize(&ctx.gamma());
  }
}
BENCHMARK(BM_Christoffel);

void BM_Curvature(benchmark::State& state) {
  const ManifoldModel& M = s7();
  const Eigen::VectorXd p = point_of(M);
  for (auto _ : state) {
    PointCtx ctx(M, p);
    benchmark::DoNotOptimize(&ctx.curvature());
  }
}
BENCHMARK(BM_Curvature);

void BM_CovariantDerivPhi(benchmark::State& state) {
  const ManifoldModel& M = mixed();
  const Eigen::VectorXd p = point_of(M);
  PointCtx ctx(M, p);
  (void)ctx.gamma();
  for (auto _ : state) benchmark::DoNotOptimize(cov_deriv_endo(ctx, M.phi[0]));
}
BENCHMARK(BM_CovariantDerivPhi);

void BM_Nijenhuis(benchmark::State& state) {
  const ManifoldModel& M = mixed();
  const Eigen::VectorXd p = point_of(M);
  PointCtx ctx(M, p);
  for (auto _ : state) {
    Tensor3 n1;
    Eigen::MatrixXd n2;
    nijenhuis_tensors(M, 0, ctx.jets, &n1, &n2);
    benchmark::DoNotOptimize(n1.m.data());
  }
}
BENCHMARK(BM_Nijenhuis);

void BM_SplitTangent(benchmark::State& state) {
  const ManifoldModel& M = mixed();
  const Eigen::VectorXd p = point_of(M);
  for (auto _ : state) {
    PointCtx ctx(M, p);
    benchmark::DoNotOptimize(split_tangent(ctx, 2.0));
  }
}
BENCHMARK(BM_SplitTangent);

void BM_StructureSuite(benchmark::State& state) {
  RunConfig cfg;
  cfg.points = 1;
  cfg.seed = 5;
  cfg.suites = {"structure"};
  const ManifoldModel M = sphere_three_alpha(0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_verification(M, cfg));
}
BENCHMARK(BM_StructureSuite);

}  // namespace

BENCHMARK_MAIN();
