#pragma once

#include <Eigen/Dense>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qs3/expr.hpp"

namespace qs3 {

// Order-2 Taylor jet: value, gradient and (symmetric) Hessian with respect to
// the chart coordinates. Propagated forward through the expression tree; no
// finite differencing is involved anywhere in here.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  static Jet2 constant(double v, int dim);
  static Jet2 variable(double v, int index, int dim);
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

// Memoizes jets per expression node for one fixed evaluation point, so that a
// model whose fields share subexpressions is differentiated once per point.
struct JetCache {
  explicit JetCache(Eigen::VectorXd point) : p(std::move(point)) {}
  Eigen::VectorXd p;
  std::unordered_map<const Expr::Node*, Jet2> memo;
  // The memo is keyed on node addresses, so the cache must co-own every node
  // it has evaluated: otherwise a temporary expression could die, its node's
  // address be recycled by a later allocation, and the lookup silently return
  // the jet of the dead expression.
  std::vector<std::shared_ptr<const Expr::Node>> owned;
};

// Jet evaluation. Throws NonFinite if any intermediate value or any derivative
// entry of the final jet fails to be finite, InvalidArgument on a Var index
// outside the point's dimension.
Jet2 eval_jet2(const Expr& e, JetCache& cache);
Jet2 eval_jet2(const Expr& e, const Eigen::VectorXd& p);

// Plain value evaluation (used by guards and by finite-difference oracles in
// the tests; the engine itself differentiates through jets only).
double eval_value(const Expr& e, const Eigen::VectorXd& p);

}  // namespace qs3
