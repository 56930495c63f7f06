#include "qs3/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qs3/errors.hpp"
#include "qs3/jet.hpp"

namespace qs3 {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::SamplingExhausted: return "SamplingExhausted";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::RankUnstable: return "RankUnstable";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InconsistentC: return "InconsistentC";
    case ErrorKind::ClassificationContradiction: return "ClassificationContradiction";
    case ErrorKind::FDUnstable: return "FDUnstable";
    case ErrorKind::SingularPairing: return "SingularPairing";
    case ErrorKind::NotHorizontal: return "NotHorizontal";
    case ErrorKind::UnknownModel: return "UnknownModel";
  }
  return "Error";
}

Expr Expr::make(Node&& n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr::Expr() : Expr(rational(0, 1)) {}

Expr Expr::var(int index) {
  if (index < 0) fail(ErrorKind::InvalidArgument, "negative variable index");
  Node n;
  n.kind = ExprKind::Var;
  n.var_index = index;
  return make(std::move(n));
}

Expr Expr::constant(double v) {
  Node n;
  n.kind = ExprKind::Const;
  n.cval = v;
  return make(std::move(n));
}

Expr Expr::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorKind::InvalidArgument, "rational constant with zero denominator");
  Node n;
  n.kind = ExprKind::Const;
  n.num = num;
  n.den = den;
  n.exact_rational = true;
  n.cval = static_cast<double>(num) / static_cast<double>(den);
  return make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  Expr::Node n;
  n.kind = ExprKind::Add;
  n.kids = {a, b};
  return Expr::make(std::move(n));
}

Expr operator-(const Expr& a, const Expr& b) {
  Expr::Node n;
  n.kind = ExprKind::Sub;
  n.kids = {a, b};
  return Expr::make(std::move(n));
}

Expr operator*(const Expr& a, const Expr& b) {
  Expr::Node n;
  n.kind = ExprKind::Mul;
  n.kids = {a, b};
  return Expr::make(std::move(n));
}

Expr operator/(const Expr& a, const Expr& b) {
  Expr::Node n;
  n.kind = ExprKind::Div;
  n.kids = {a, b};
  return Expr::make(std::move(n));
}

Expr operator-(const Expr& a) { return Expr::rational(0, 1) - a; }

Expr pow_int(const Expr& base, int exponent) {
  Expr::Node n;
  n.kind = ExprKind::IntPow;
  n.exponent = exponent;
  n.kids = {base};
  return Expr::make(std::move(n));
}

Expr sqrt(const Expr& e) {
  Expr::Node n;
  n.kind = ExprKind::Sqrt;
  n.kids = {e};
  return Expr::make(std::move(n));
}

Expr sin(const Expr& e) {
  Expr::Node n;
  n.kind = ExprKind::Sin;
  n.kids = {e};
  return Expr::make(std::move(n));
}

Expr cos(const Expr& e) {
  Expr::Node n;
  n.kind = ExprKind::Cos;
  n.kids = {e};
  return Expr::make(std::move(n));
}

Expr exp(const Expr& e) {
  Expr::Node n;
  n.kind = ExprKind::Exp;
  n.kids = {e};
  return Expr::make(std::move(n));
}

int Expr::min_dimension() const {
  const Node& n = node();
  int dim = (n.kind == ExprKind::Var) ? n.var_index + 1 : 0;
  for (const Expr& k : n.kids) dim = std::max(dim, k.min_dimension());
  return dim;
}

std::string Expr::to_string() const {
  const Node& n = node();
  std::ostringstream os;
  auto infix = [&](const char* op) {
    os << '(' << n.kids[0].to_string() << op << n.kids[1].to_string() << ')';
  };
  switch (n.kind) {
    case ExprKind::Var: os << 'x' << n.var_index; break;
    case ExprKind::Const:
      if (n.exact_rational && n.den != 1) os << n.num << '/' << n.den;
      else if (n.exact_rational) os << n.num;
      else os << n.cval;
      break;
    case ExprKind::Add: infix("+"); break;
    case ExprKind::Sub: infix("-"); break;
    case ExprKind::Mul: infix("*"); break;
    case ExprKind::Div: infix("/"); break;
    case ExprKind::IntPow: os << "pow(" << n.kids[0].to_string() << ',' << n.exponent << ')'; break;
    case ExprKind::Sqrt: os << "sqrt(" << n.kids[0].to_string() << ')'; break;
    case ExprKind::Sin: os << "sin(" << n.kids[0].to_string() << ')'; break;
    case ExprKind::Cos: os << "cos(" << n.kids[0].to_string() << ')'; break;
    case ExprKind::Exp: os << "exp(" << n.kids[0].to_string() << ')'; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Jet arithmetic

Jet2 Jet2::constant(double v, int dim) {
  Jet2 j;
  j.value = v;
  j.grad = Eigen::VectorXd::Zero(dim);
  j.hess = Eigen::MatrixXd::Zero(dim, dim);
  return j;
}

Jet2 Jet2::variable(double v, int index, int dim) {
  Jet2 j = constant(v, dim);
  j.grad(index) = 1.0;
  return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value + b.value;
  r.grad = a.grad + b.grad;
  r.hess = a.hess + b.hess;
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value - b.value;
  r.grad = a.grad - b.grad;
  r.hess = a.hess - b.hess;
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r;
  r.value = -a.value;
  r.grad = -a.grad;
  r.hess = -a.hess;
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  r.grad = a.grad * b.value + b.grad * a.value;
  // Symmetrized outer product keeps the Hessian exactly symmetric: entries
  // (i,j) and (j,i) are the same two products added in either order.
  r.hess = a.hess * b.value + b.hess * a.value + a.grad * b.grad.transpose() +
           b.grad * a.grad.transpose();
  return r;
}

static Jet2 reciprocal(const Jet2& b) {
  Jet2 r;
  const double inv = 1.0 / b.value;
  const double inv2 = inv * inv;
  r.value = inv;
  r.grad = -inv2 * b.grad;
  r.hess = -inv2 * b.hess + (2.0 * inv2 * inv) * (b.grad * b.grad.transpose());
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

// f(u) with c1 = f'(u), c2 = f''(u)
static Jet2 chain(const Jet2& u, double f, double c1, double c2) {
  Jet2 r;
  r.value = f;
  r.grad = c1 * u.grad;
  r.hess = c1 * u.hess + c2 * (u.grad * u.grad.transpose());
  return r;
}

static Jet2 eval_node(const Expr::Node& n, JetCache& cache) {
  const int dim = static_cast<int>(cache.p.size());
  switch (n.kind) {
    case ExprKind::Var:
      if (n.var_index >= dim)
        fail(ErrorKind::InvalidArgument, "variable index exceeds chart dimension");
      return Jet2::variable(cache.p(n.var_index), n.var_index, dim);
    case ExprKind::Const:
      return Jet2::constant(n.cval, dim);
    case ExprKind::Add:
      return eval_jet2(n.kids[0], cache) + eval_jet2(n.kids[1], cache);
    case ExprKind::Sub:
      return eval_jet2(n.kids[0], cache) - eval_jet2(n.kids[1], cache);
    case ExprKind::Mul:
      return eval_jet2(n.kids[0], cache) * eval_jet2(n.kids[1], cache);
    case ExprKind::Div:
      return eval_jet2(n.kids[0], cache) / eval_jet2(n.kids[1], cache);
    case ExprKind::IntPow: {
      Jet2 u = eval_jet2(n.kids[0], cache);
      const int k = n.exponent;
      if (k == 0) return Jet2::constant(1.0, dim);
      const double f = std::pow(u.value, k);
      const double c1 = k * std::pow(u.value, k - 1);
      const double c2 = static_cast<double>(k) * (k - 1) * std::pow(u.value, k - 2);
      return chain(u, f, c1, c2);
    }
    case ExprKind::Sqrt: {
      Jet2 u = eval_jet2(n.kids[0], cache);
      const double s = std::sqrt(u.value);
      return chain(u, s, 0.5 / s, -0.25 / (s * u.value));
    }
    case ExprKind::Sin: {
      Jet2 u = eval_jet2(n.kids[0], cache);
      const double s = std::sin(u.value), c = std::cos(u.value);
      return chain(u, s, c, -s);
    }
    case ExprKind::Cos: {
      Jet2 u = eval_jet2(n.kids[0], cache);
      const double s = std::sin(u.value), c = std::cos(u.value);
      return chain(u, c, -s, -c);
    }
    case ExprKind::Exp: {
      Jet2 u = eval_jet2(n.kids[0], cache);
      const double f = std::exp(u.value);
      return chain(u, f, f, f);
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown expression node");
}

Jet2 eval_jet2(const Expr& e, JetCache& cache) {
  auto it = cache.memo.find(e.key());
  if (it != cache.memo.end()) return it->second;
  Jet2 j = eval_node(e.node(), cache);
  if (!std::isfinite(j.value))
    fail(ErrorKind::NonFinite, "non-finite value while evaluating expression");
  cache.memo.emplace(e.key(), j);
  cache.owned.push_back(e.node_ptr());
  return j;
}

Jet2 eval_jet2(const Expr& e, const Eigen::VectorXd& p) {
  JetCache cache(p);
  Jet2 j = eval_jet2(e, cache);
  if (!j.grad.allFinite() || !j.hess.allFinite())
    fail(ErrorKind::NonFinite, "non-finite derivative while evaluating expression");
  return j;
}

double eval_value(const Expr& e, const Eigen::VectorXd& p) {
  const Expr::Node& n = e.node();
  switch (n.kind) {
    case ExprKind::Var:
      if (n.var_index >= p.size())
        fail(ErrorKind::InvalidArgument, "variable index exceeds chart dimension");
      return p(n.var_index);
    case ExprKind::Const: return n.cval;
    case ExprKind::Add: return eval_value(n.kids[0], p) + eval_value(n.kids[1], p);
    case ExprKind::Sub: return eval_value(n.kids[0], p) - eval_value(n.kids[1], p);
    case ExprKind::Mul: return eval_value(n.kids[0], p) * eval_value(n.kids[1], p);
    case ExprKind::Div: return eval_value(n.kids[0], p) / eval_value(n.kids[1], p);
    case ExprKind::IntPow: return std::pow(eval_value(n.kids[0], p), n.exponent);
    case ExprKind::Sqrt: return std::sqrt(eval_value(n.kids[0], p));
    case ExprKind::Sin: return std::sin(eval_value(n.kids[0], p));
    case ExprKind::Cos: return std::cos(eval_value(n.kids[0], p));
    case ExprKind::Exp: return std::exp(eval_value(n.kids[0], p));
  }
  fail(ErrorKind::InvalidArgument, "unknown expression node");
}

}  // namespace qs3
