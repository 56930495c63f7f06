#include "qs3/model.hpp"

#include "qs3/errors.hpp"

namespace qs3 {

ExprVec expr_zero_vec(int d) { return ExprVec(d); }

ExprMat expr_zero_mat(int d) { return ExprMat(d, ExprVec(d)); }

ExprMat expr_identity(int d) {
  ExprMat m = expr_zero_mat(d);
  for (int i = 0; i < d; ++i) m[i][i] = Expr::rational(1, 1);
  return m;
}

Expr expr_dot(const ExprVec& a, const ExprVec& b) {
  if (a.size() != b.size()) fail(ErrorKind::InvalidArgument, "dot of mismatched vectors");
  Expr s = a.empty() ? Expr() : a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

ExprVec expr_mat_vec(const ExprMat& m, const ExprVec& v) {
  ExprVec r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = expr_dot(m[i], v);
  return r;
}

ExprMat expr_mat_mul(const ExprMat& a, const ExprMat& b) {
  const std::size_t n = a.size();
  ExprMat r(n, ExprVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr s = a[i][0] * b[0][j];
      for (std::size_t k = 1; k < n; ++k) s = s + a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

ExprMat expr_scale(const ExprMat& m, const Expr& s) {
  ExprMat r = m;
  for (auto& row : r)
    for (auto& e : row) e = e * s;
  return r;
}

ExprVec expr_scale(const ExprVec& v, const Expr& s) {
  ExprVec r = v;
  for (auto& e : r) e = e * s;
  return r;
}

ExprVec expr_sub(const ExprVec& a, const ExprVec& b) {
  ExprVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

ExprVec expr_add(const ExprVec& a, const ExprVec& b) {
  ExprVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

ExprMat expr_mat_add(const ExprMat& a, const ExprMat& b) {
  ExprMat r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = expr_add(a[i], b[i]);
  return r;
}

ExprMat expr_mat_sub(const ExprMat& a, const ExprMat& b) {
  ExprMat r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = expr_sub(a[i], b[i]);
  return r;
}

ExprMat expr_outer(const ExprVec& u, const ExprVec& w) {
  ExprMat r(u.size(), ExprVec(w.size()));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) r[i][j] = u[i] * w[j];
  return r;
}

ExprMat vertical_projection_field(const ManifoldModel& M) {
  ExprMat p = expr_outer(M.xi[0], M.eta[0]);
  for (int a = 1; a < 3; ++a) p = expr_mat_add(p, expr_outer(M.xi[a], M.eta[a]));
  return p;
}

ExprMat fundamental_form_field(const ManifoldModel& M, int a) {
  return expr_mat_mul(M.g, M.phi[a]);
}

Expr eta_applied(const ManifoldModel& M, int a, const ExprVec& y) {
  return expr_dot(M.eta[a], y);
}

ExprVec horizontal_part_field(const ManifoldModel& M, const ExprVec& y) {
  ExprVec r = y;
  for (int a = 0; a < 3; ++a) r = expr_sub(r, expr_scale(M.xi[a], eta_applied(M, a, y)));
  return r;
}

ExprVec coordinate_field(int d, int i) {
  ExprVec v(d);
  v[i] = Expr::rational(1, 1);
  return v;
}

}  // namespace qs3
