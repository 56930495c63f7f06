#include "qs3/chart.hpp"

#include <random>

#include "qs3/errors.hpp"

namespace qs3 {

ChartDomain::ChartDomain(int dim, Eigen::VectorXd lo_, Eigen::VectorXd hi_, Expr guard_)
    : dimension(dim), lo(std::move(lo_)), hi(std::move(hi_)), guard(std::move(guard_)) {
  if (dim <= 0) fail(ErrorKind::InvalidArgument, "chart dimension must be positive");
  if (lo.size() != dim || hi.size() != dim)
    fail(ErrorKind::InvalidArgument, "box bounds do not match chart dimension");
  for (int i = 0; i < dim; ++i)
    if (!(lo(i) < hi(i))) fail(ErrorKind::InvalidArgument, "empty box interval");
  if (guard.min_dimension() > dim)
    fail(ErrorKind::InvalidArgument, "guard uses variables outside the chart");
  if (!(eval_value(guard, center()) > 0))
    fail(ErrorKind::InvalidArgument, "guard not positive at box center");
}

ChartDomain ChartDomain::box(int dim, double h) {
  return ChartDomain(dim, Eigen::VectorXd::Constant(dim, -h), Eigen::VectorXd::Constant(dim, h),
                     Expr::rational(1, 1));
}

bool ChartDomain::admissible(const Eigen::VectorXd& p, double margin) const {
  if (p.size() != dimension) return false;
  for (int i = 0; i < dimension; ++i)
    if (!(p(i) > lo(i) && p(i) < hi(i))) return false;
  return eval_value(guard, p) > margin;
}

std::vector<Eigen::VectorXd> sample_points(const ChartDomain& dom, int k, std::uint64_t seed) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "negative sample count");
  std::mt19937_64 rng(seed);
  // Uniform double in (0,1), generated directly from the raw 64-bit stream so
  // the sequence is identical across standard libraries.
  auto uniform01 = [&rng]() {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  };
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(k);
  const long max_attempts = 1000L + 512L * k;
  for (long attempt = 0; attempt < max_attempts && static_cast<int>(pts.size()) < k; ++attempt) {
    Eigen::VectorXd p(dom.dimension);
    for (int i = 0; i < dom.dimension; ++i)
      p(i) = dom.lo(i) + uniform01() * (dom.hi(i) - dom.lo(i));
    if (eval_value(dom.guard, p) > kGuardMargin) pts.push_back(std::move(p));
  }
  if (static_cast<int>(pts.size()) < k)
    fail(ErrorKind::SamplingExhausted, "guard region too thin: rejection sampling gave " +
                                           std::to_string(pts.size()) + " of " +
                                           std::to_string(k) + " points");
  return pts;
}

Jet2 eval_jet2(const Expr& e, const ChartDomain& dom, const Eigen::VectorXd& p) {
  if (p.size() != dom.dimension)
    fail(ErrorKind::InvalidArgument, "point dimension does not match chart");
  if (!dom.admissible(p)) fail(ErrorKind::DomainViolation, "point outside admissible chart region");
  return eval_jet2(e, p);
}

}  // namespace qs3
