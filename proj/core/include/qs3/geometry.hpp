#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <utility>

#include "qs3/model.hpp"
#include "qs3/tensor.hpp"

namespace qs3 {

// T.m[k](i,j); which index the vector runs over is documented per use.
struct Tensor3 {
  std::vector<Eigen::MatrixXd> m;
  double max_abs() const;
};

// Dense rank-4 array R(l,k,i,j).
struct Tensor4 {
  int d = 0;
  std::vector<double> v;
  explicit Tensor4(int dim) : d(dim), v(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}
  double& at(int l, int k, int i, int j) { return v[((l * d + k) * d + i) * d + j]; }
  double at(int l, int k, int i, int j) const { return v[((l * d + k) * d + i) * d + j]; }
};

struct MetricPack {
  Eigen::MatrixXd G, Ginv;
  std::vector<std::vector<Jet2>> jets;  // jets[i][j] of g_ij
  double dg(int l, int i, int j) const { return jets[i][j].grad(l); }
  double d2g(int l, int m, int i, int j) const { return jets[i][j].hess(l, m); }
};

struct GammaPack {
  Tensor3 gamma;                 // gamma.m[k](i,j) = Gamma^k_ij
  std::vector<Tensor3> dgamma;   // dgamma[m].m[k](i,j) = d_m Gamma^k_ij
};

struct CurvaturePack {
  Tensor4 R;            // R(l,k,i,j) = component l of R(d_i, d_j) d_k
  Eigen::MatrixXd ric;  // ric(j,k) = Ric(d_j, d_k)
  double scalar = 0.0;
  explicit CurvaturePack(int d) : R(d) {}
};

// Evaluation state at one admissible point of one model: a shared jet cache
// plus lazily computed metric / connection / curvature packs. Everything the
// suites evaluate at a sample point flows through one of these, so each
// component expression is differentiated exactly once per point.
class PointCtx {
 public:
  PointCtx(const ManifoldModel& M, Eigen::VectorXd p);

  const ManifoldModel& model;
  JetCache jets;

  const Eigen::VectorXd& p() const { return jets.p; }
  int dim() const { return model.dim(); }

  Jet2 jet(const Expr& e) { return eval_jet2(e, jets); }

  const MetricPack& metric();
  const GammaPack& gamma();
  const CurvaturePack& curvature();

 private:
  std::optional<MetricPack> metric_;
  std::optional<GammaPack> gamma_;
  std::optional<CurvaturePack> curv_;
};

// -- pointwise evaluation of expression fields -------------------------------

Eigen::VectorXd eval_vector(const ExprVec& v, JetCache& c);
Eigen::MatrixXd eval_matrix(const ExprMat& m, JetCache& c);

// jac(i,k) = d_i v_k
Eigen::MatrixXd field_jacobian(const ExprVec& v, JetCache& c);

// -- exterior calculus (alternation convention) ------------------------------
// d of a 1-form:  (dw)(X,Y) = 1/2 (X w(Y) - Y w(X) - w([X,Y]))
// d of a 2-form:  (db)(X,Y,Z) = 1/3 (cyclic derivative terms - bracket terms)

// D(i,j) = (dw)(d_i, d_j) = 1/2 (d_i w_j - d_j w_i)
Eigen::MatrixXd d_oneform(const ExprVec& w, JetCache& c);

// t.m[i](j,k) = (db)(d_i, d_j, d_k)
Tensor3 d_twoform(const ExprMat& b, JetCache& c);

// d(dw) for a 1-form w, from the Hessians of its components.
Tensor3 dd_oneform(const ExprVec& w, JetCache& c);

// -- Lie derivatives ----------------------------------------------------------

Eigen::VectorXd lie_bracket(const ExprVec& X, const ExprVec& Y, JetCache& c);
Eigen::VectorXd lie_vector(const ExprVec& X, const ExprVec& Y, JetCache& c);  // = [X, Y]
Eigen::VectorXd lie_oneform(const ExprVec& X, const ExprVec& w, JetCache& c);
Eigen::MatrixXd lie_two_tensor(const ExprVec& X, const ExprMat& b, JetCache& c);  // (0,2)
Eigen::MatrixXd lie_endo(const ExprVec& X, const ExprMat& A, JetCache& c);
// Lie derivative of d(eta) along X, using jets of eta up to order 2.
Eigen::MatrixXd lie_d_oneform(const ExprVec& X, const ExprVec& eta, JetCache& c);

// -- almost contact tensors ---------------------------------------------------

// N1.m[m](i,j) = component m of N^(1)(d_i, d_j) = [phi,phi](d_i,d_j) + 2 deta(d_i,d_j) xi
// N2(i,j) = (L_{phi d_i} eta)(d_j) - (L_{phi d_j} eta)(d_i)
void nijenhuis_tensors(const ManifoldModel& M, int a, JetCache& c, Tensor3* N1,
                       Eigen::MatrixXd* N2);

// -- covariant derivatives (first index = direction) --------------------------

Eigen::MatrixXd cov_deriv_vector(PointCtx& ctx, const ExprVec& V);   // (i,k): (nabla_i V)^k
Eigen::MatrixXd cov_deriv_oneform(PointCtx& ctx, const ExprVec& w);  // (i,j): (nabla_i w)_j
Tensor3 cov_deriv_endo(PointCtx& ctx, const ExprMat& A);     // m[i](k,j) = (nabla_i A)^k_j
Tensor3 cov_deriv_bilinear(PointCtx& ctx, const ExprMat& b); // m[i](j,k) = (nabla_i b)_jk

// -- curvature helpers ---------------------------------------------------------

// component vector of R(X,Y)Z
Eigen::VectorXd riemann_apply(const CurvaturePack& cp, const Eigen::VectorXd& X,
                              const Eigen::VectorXd& Y, const Eigen::VectorXd& Z);

// Sectional curvature of span(X,Y); throws DegeneratePlane when the normalized
// Gram determinant falls below 1e-10.
double sectional(PointCtx& ctx, const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

// g-orthonormalization of the columns of `cand` in their given order; columns
// whose residual norm drops below `drop_tol` are skipped.
Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& cand, const Eigen::MatrixXd& G,
                             double drop_tol = 1e-9);

// -- model-level wrappers (fresh evaluation, TensorValue results) -------------

TensorValue christoffel(const ManifoldModel& M, const Eigen::VectorXd& p);
TensorValue riemann(const ManifoldModel& M, const Eigen::VectorXd& p);
TensorValue ricci(const ManifoldModel& M, const Eigen::VectorXd& p);
double scalar_curvature(const ManifoldModel& M, const Eigen::VectorXd& p);
double sectional(const ManifoldModel& M, const Eigen::VectorXd& p, const Eigen::VectorXd& X,
                 const Eigen::VectorXd& Y);
TensorValue fundamental_two_form(const ManifoldModel& M, const Eigen::VectorXd& p, int a);
TensorValue exterior_derivative_eta(const ManifoldModel& M, const Eigen::VectorXd& p, int a);
std::pair<TensorValue, TensorValue> nijenhuis(const ManifoldModel& M, const Eigen::VectorXd& p,
                                              int a);
TensorValue covariant_derivative_vector(const ManifoldModel& M, const Eigen::VectorXd& p,
                                        const ExprVec& field, const Eigen::VectorXd& direction);
TensorValue covariant_derivative_oneform(const ManifoldModel& M, const Eigen::VectorXd& p,
                                         const ExprVec& field, const Eigen::VectorXd& direction);
TensorValue covariant_derivative_endo(const ManifoldModel& M, const Eigen::VectorXd& p,
                                      const ExprMat& field, const Eigen::VectorXd& direction);

}  // namespace qs3
