#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qs3/expr.hpp"
#include "qs3/jet.hpp"

namespace qs3 {

// Margin applied to the guard when sampling; keeps sampled points strictly
// inside the admissible region instead of grazing its boundary.
inline constexpr double kGuardMargin = 1e-6;

// Open coordinate box plus a guard expression. A point is admissible iff it
// lies in the box and guard(p) > 0.
struct ChartDomain {
  int dimension = 0;
  Eigen::VectorXd lo, hi;
  Expr guard;  // defaults to the constant 0, so construct explicitly

  ChartDomain() = default;
  ChartDomain(int dim, Eigen::VectorXd lo_, Eigen::VectorXd hi_, Expr guard_);

  // Box with half-width `h` around the origin, guard constant 1.
  static ChartDomain box(int dim, double h);

  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
  bool admissible(const Eigen::VectorXd& p, double margin = 0.0) const;
};

// Deterministic seeded rejection sampler: uniform draws over the box, a draw
// is kept iff guard > kGuardMargin. Pure function of (dom, k, seed); throws
// SamplingExhausted when the guard region is too thin to hit.
std::vector<Eigen::VectorXd> sample_points(const ChartDomain& dom, int k, std::uint64_t seed);

// Guard-checked jet evaluation at an admissible point of the chart.
Jet2 eval_jet2(const Expr& e, const ChartDomain& dom, const Eigen::VectorXd& p);

}  // namespace qs3
