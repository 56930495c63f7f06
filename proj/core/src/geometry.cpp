#include "qs3/geometry.hpp"

#include <cmath>

#include "qs3/errors.hpp"

namespace qs3 {

double Tensor3::max_abs() const {
  double r = 0.0;
  for (const auto& mm : m) r = std::max(r, mm.cwiseAbs().maxCoeff());
  return r;
}

PointCtx::PointCtx(const ManifoldModel& M, Eigen::VectorXd p) : model(M), jets(std::move(p)) {
  if (jets.p.size() != M.dim())
    fail(ErrorKind::InvalidArgument, "point dimension does not match model chart");
  if (!M.dom.admissible(jets.p))
    fail(ErrorKind::DomainViolation, "point outside admissible chart region");
}

const MetricPack& PointCtx::metric() {
  if (metric_) return *metric_;
  const int d = dim();
  MetricPack mp;
  mp.jets.assign(d, std::vector<Jet2>(d));
  mp.G.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Jet2 jij = jet(model.g[i][j]);
      mp.jets[i][j] = jij;
      if (j != i) mp.jets[j][i] = jij;  // g is stored symmetrically
      mp.G(i, j) = jij.value;
      mp.G(j, i) = jij.value;
    }
  Eigen::LLT<Eigen::MatrixXd> llt(mp.G);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::SingularMetric, "metric not positive definite at sample point");
  mp.Ginv = llt.solve(Eigen::MatrixXd::Identity(d, d));
  metric_ = std::move(mp);
  return *metric_;
}

const GammaPack& PointCtx::gamma() {
  if (gamma_) return *gamma_;
  const MetricPack& mp = metric();
  const int d = dim();
  GammaPack gp;
  gp.gamma.m.assign(d, Eigen::MatrixXd::Zero(d, d));
  gp.dgamma.assign(d, gp.gamma);

  // A(l;i,j) = d_i g_jl + d_j g_il - d_l g_ij
  auto A = [&](int l, int i, int j) {
    return mp.dg(i, j, l) + mp.dg(j, i, l) - mp.dg(l, i, j);
  };
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += mp.Ginv(k, l) * A(l, i, j);
        gp.gamma.m[k](i, j) = 0.5 * s;
        gp.gamma.m[k](j, i) = 0.5 * s;
      }

  // d_m Ginv = -Ginv (d_m G) Ginv
  std::vector<Eigen::MatrixXd> dGinv(d);
  for (int m = 0; m < d; ++m) {
    Eigen::MatrixXd dGm(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dGm(i, j) = mp.dg(m, i, j);
    dGinv[m] = -mp.Ginv * dGm * mp.Ginv;
  }
  auto dA = [&](int m, int l, int i, int j) {
    return mp.d2g(m, i, j, l) + mp.d2g(m, j, i, l) - mp.d2g(m, l, i, j);
  };
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          double s = 0.0;
          for (int l = 0; l < d; ++l)
            s += dGinv[m](k, l) * A(l, i, j) + mp.Ginv(k, l) * dA(m, l, i, j);
          gp.dgamma[m].m[k](i, j) = 0.5 * s;
          gp.dgamma[m].m[k](j, i) = 0.5 * s;
        }
  gamma_ = std::move(gp);
  return *gamma_;
}

const CurvaturePack& PointCtx::curvature() {
  if (curv_) return *curv_;
  const GammaPack& gp = gamma();
  const MetricPack& mp = metric();
  const int d = dim();
  CurvaturePack cp(d);

  // R(d_i, d_j) d_k = (d_i Gamma^l_jk - d_j Gamma^l_ik
  //                    + Gamma^m_jk Gamma^l_im - Gamma^m_ik Gamma^l_jm) d_l,
  // filled for i < j and mirrored so antisymmetry in (i,j) is exact.
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          double s = gp.dgamma[i].m[l](j, k) - gp.dgamma[j].m[l](i, k);
          for (int m = 0; m < d; ++m)
            s += gp.gamma.m[m](j, k) * gp.gamma.m[l](i, m) -
                 gp.gamma.m[m](i, k) * gp.gamma.m[l](j, m);
          cp.R.at(l, k, i, j) = s;
          cp.R.at(l, k, j, i) = -s;
        }

  cp.ric = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += cp.R.at(i, k, i, j);
      cp.ric(j, k) = s;
    }
  cp.scalar = (mp.Ginv * cp.ric).trace();
  curv_ = std::move(cp);
  return *curv_;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd eval_vector(const ExprVec& v, JetCache& c) {
  Eigen::VectorXd r(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<int>(i)) = eval_jet2(v[i], c).value;
  return r;
}

Eigen::MatrixXd eval_matrix(const ExprMat& m, JetCache& c) {
  const int n = static_cast<int>(m.size());
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = eval_jet2(m[i][j], c).value;
  return r;
}

Eigen::MatrixXd field_jacobian(const ExprVec& v, JetCache& c) {
  const int n = static_cast<int>(v.size());
  const int d = static_cast<int>(c.p.size());
  Eigen::MatrixXd r(d, n);
  for (int k = 0; k < n; ++k) {
    Jet2 j = eval_jet2(v[k], c);
    for (int i = 0; i < d; ++i) r(i, k) = j.grad(i);
  }
  return r;
}

Eigen::MatrixXd d_oneform(const ExprVec& w, JetCache& c) {
  const int d = static_cast<int>(c.p.size());
  if (static_cast<int>(w.size()) != d)
    fail(ErrorKind::DimensionMismatch,
         "one-form has " + std::to_string(w.size()) + " components at a point of dimension " +
             std::to_string(d));
  Eigen::MatrixXd jac = field_jacobian(w, c);  // jac(i,j) = d_i w_j
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = 0.5 * (jac(i, j) - jac(j, i));
      D(i, j) = v;
      D(j, i) = -v;
    }
  return D;
}

Tensor3 d_twoform(const ExprMat& b, JetCache& c) {
  const int d = static_cast<int>(b.size());
  std::vector<std::vector<Eigen::VectorXd>> grad(d, std::vector<Eigen::VectorXd>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) grad[i][j] = eval_jet2(b[i][j], c).grad;
  Tensor3 t;
  t.m.assign(d, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        t.m[i](j, k) = (grad[j][k](i) + grad[k][i](j) + grad[i][j](k)) / 3.0;
  return t;
}

Tensor3 dd_oneform(const ExprVec& w, JetCache& c) {
  const int d = static_cast<int>(w.size());
  std::vector<Jet2> jw(d);
  for (int i = 0; i < d; ++i) jw[i] = eval_jet2(w[i], c);
  // dD(i;j,k) = d_i (dw)_jk = 1/2 (d_i d_j w_k - d_i d_k w_j)
  auto dD = [&](int i, int j, int k) { return 0.5 * (jw[k].hess(i, j) - jw[j].hess(i, k)); };
  Tensor3 t;
  t.m.assign(d, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) t.m[i](j, k) = (dD(i, j, k) + dD(j, k, i) + dD(k, i, j)) / 3.0;
  return t;
}

Eigen::VectorXd lie_bracket(const ExprVec& X, const ExprVec& Y, JetCache& c) {
  Eigen::VectorXd xv = eval_vector(X, c), yv = eval_vector(Y, c);
  Eigen::MatrixXd jx = field_jacobian(X, c), jy = field_jacobian(Y, c);
  // [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k
  return jy.transpose() * xv - jx.transpose() * yv;
}

Eigen::VectorXd lie_vector(const ExprVec& X, const ExprVec& Y, JetCache& c) {
  return lie_bracket(X, Y, c);
}

Eigen::VectorXd lie_oneform(const ExprVec& X, const ExprVec& w, JetCache& c) {
  Eigen::VectorXd xv = eval_vector(X, c), wv = eval_vector(w, c);
  Eigen::MatrixXd jx = field_jacobian(X, c), jw = field_jacobian(w, c);
  // (L_X w)_j = X^i d_i w_j + w_i d_j X^i
  return jw.transpose() * xv + jx * wv;
}

Eigen::MatrixXd lie_two_tensor(const ExprVec& X, const ExprMat& b, JetCache& c) {
  const int d = static_cast<int>(b.size());
  Eigen::VectorXd xv = eval_vector(X, c);
  Eigen::MatrixXd jx = field_jacobian(X, c);
  Eigen::MatrixXd bv(d, d);
  std::vector<std::vector<Eigen::VectorXd>> grad(d, std::vector<Eigen::VectorXd>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet2 jj = eval_jet2(b[i][j], c);
      bv(i, j) = jj.value;
      grad[i][j] = jj.grad;
    }
  Eigen::MatrixXd r(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        s += xv(i) * grad[j][k](i) + bv(i, k) * jx(j, i) + bv(j, i) * jx(k, i);
      r(j, k) = s;
    }
  return r;
}

Eigen::MatrixXd lie_endo(const ExprVec& X, const ExprMat& A, JetCache& c) {
  const int d = static_cast<int>(A.size());
  Eigen::VectorXd xv = eval_vector(X, c);
  Eigen::MatrixXd jx = field_jacobian(X, c);
  Eigen::MatrixXd av(d, d);
  std::vector<std::vector<Eigen::VectorXd>> grad(d, std::vector<Eigen::VectorXd>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet2 jj = eval_jet2(A[i][j], c);
      av(i, j) = jj.value;
      grad[i][j] = jj.grad;
    }
  // (L_X A)^k_j = X^i d_i A^k_j - A^i_j d_i X^k + A^k_i d_j X^i
  Eigen::MatrixXd r(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        s += xv(i) * grad[k][j](i) - av(i, j) * jx(i, k) + av(k, i) * jx(j, i);
      r(k, j) = s;
    }
  return r;
}

Eigen::MatrixXd lie_d_oneform(const ExprVec& X, const ExprVec& eta, JetCache& c) {
  const int d = static_cast<int>(eta.size());
  Eigen::VectorXd xv = eval_vector(X, c);
  Eigen::MatrixXd jx = field_jacobian(X, c);
  std::vector<Jet2> je(d);
  for (int i = 0; i < d; ++i) je[i] = eval_jet2(eta[i], c);
  auto D = [&](int i, int j) { return 0.5 * (je[j].grad(i) - je[i].grad(j)); };
  auto dD = [&](int i, int j, int k) { return 0.5 * (je[k].hess(i, j) - je[j].hess(i, k)); };
  Eigen::MatrixXd r(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += xv(i) * dD(i, j, k) + D(i, k) * jx(j, i) + D(j, i) * jx(k, i);
      r(j, k) = s;
    }
  return r;
}

void nijenhuis_tensors(const ManifoldModel& M, int a, JetCache& c, Tensor3* N1,
                       Eigen::MatrixXd* N2) {
  const int d = M.dim();
  Eigen::MatrixXd phiv(d, d);
  std::vector<std::vector<Eigen::VectorXd>> dphi(d, std::vector<Eigen::VectorXd>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet2 jj = eval_jet2(M.phi[a][i][j], c);
      phiv(i, j) = jj.value;
      dphi[i][j] = jj.grad;
    }
  Eigen::VectorXd xiv = eval_vector(M.xi[a], c);
  Eigen::VectorXd etav = eval_vector(M.eta[a], c);
  Eigen::MatrixXd jeta = field_jacobian(M.eta[a], c);  // (i,j) = d_i eta_j
  auto Deta = [&](int i, int j) { return 0.5 * (jeta(i, j) - jeta(j, i)); };

  if (N1) {
    N1->m.assign(d, Eigen::MatrixXd::Zero(d, d));
    // [phi,phi](d_i,d_j)^m = phi^k_i d_k phi^m_j - phi^k_j d_k phi^m_i
    //                        + phi^m_k (d_j phi^k_i - d_i phi^k_j)
    for (int m = 0; m < d; ++m)
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          double s = 0.0;
          for (int k = 0; k < d; ++k)
            s += phiv(k, i) * dphi[m][j](k) - phiv(k, j) * dphi[m][i](k) +
                 phiv(m, k) * (dphi[k][i](j) - dphi[k][j](i));
          s += 2.0 * Deta(i, j) * xiv(m);
          N1->m[m](i, j) = s;
          N1->m[m](j, i) = -s;
        }
  }
  if (N2) {
    // (L_{phi d_i} eta)(d_j) = phi^k_i d_k eta_j + eta_k d_j phi^k_i
    Eigen::MatrixXd L(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += phiv(k, i) * jeta(k, j) + etav(k) * dphi[k][i](j);
        L(i, j) = s;
      }
    *N2 = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const double v = L(i, j) - L(j, i);
        (*N2)(i, j) = v;
        (*N2)(j, i) = -v;
      }
  }
}

Eigen::MatrixXd cov_deriv_vector(PointCtx& ctx, const ExprVec& V) {
  const GammaPack& gp = ctx.gamma();
  const int d = ctx.dim();
  Eigen::VectorXd vv = eval_vector(V, ctx.jets);
  Eigen::MatrixXd jv = field_jacobian(V, ctx.jets);  // (i,k) = d_i V^k
  Eigen::MatrixXd r(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      double s = jv(i, k);
      for (int m = 0; m < d; ++m) s += gp.gamma.m[k](i, m) * vv(m);
      r(i, k) = s;
    }
  return r;
}

Eigen::MatrixXd cov_deriv_oneform(PointCtx& ctx, const ExprVec& w) {
  const GammaPack& gp = ctx.gamma();
  const int d = ctx.dim();
  Eigen::VectorXd wv = eval_vector(w, ctx.jets);
  Eigen::MatrixXd jw = field_jacobian(w, ctx.jets);
  Eigen::MatrixXd r(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = jw(i, j);
      for (int m = 0; m < d; ++m) s -= gp.gamma.m[m](i, j) * wv(m);
      r(i, j) = s;
    }
  return r;
}

Tensor3 cov_deriv_endo(PointCtx& ctx, const ExprMat& A) {
  const GammaPack& gp = ctx.gamma();
  const int d = ctx.dim();
  Eigen::MatrixXd av(d, d);
  std::vector<std::vector<Eigen::VectorXd>> grad(d, std::vector<Eigen::VectorXd>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet2 jj = eval_jet2(A[i][j], ctx.jets);
      av(i, j) = jj.value;
      grad[i][j] = jj.grad;
    }
  Tensor3 t;
  t.m.assign(d, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        double s = grad[k][j](i);
        for (int m = 0; m < d; ++m)
          s += gp.gamma.m[k](i, m) * av(m, j) - gp.gamma.m[m](i, j) * av(k, m);
        t.m[i](k, j) = s;
      }
  return t;
}

Tensor3 cov_deriv_bilinear(PointCtx& ctx, const ExprMat& b) {
  const GammaPack& gp = ctx.gamma();
  const int d = ctx.dim();
  Eigen::MatrixXd bv(d, d);
  std::vector<std::vector<Eigen::VectorXd>> grad(d, std::vector<Eigen::VectorXd>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet2 jj = eval_jet2(b[i][j], ctx.jets);
      bv(i, j) = jj.value;
      grad[i][j] = jj.grad;
    }
  Tensor3 t;
  t.m.assign(d, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = grad[j][k](i);
        for (int m = 0; m < d; ++m)
          s -= gp.gamma.m[m](i, j) * bv(m, k) + gp.gamma.m[m](i, k) * bv(j, m);
        t.m[i](j, k) = s;
      }
  return t;
}

Eigen::VectorXd riemann_apply(const CurvaturePack& cp, const Eigen::VectorXd& X,
                              const Eigen::VectorXd& Y, const Eigen::VectorXd& Z) {
  const int d = static_cast<int>(X.size());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(d);
  for (int l = 0; l < d; ++l) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      if (Z(k) == 0.0) continue;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s += cp.R.at(l, k, i, j) * X(i) * Y(j) * Z(k);
    }
    r(l) = s;
  }
  return r;
}

double sectional(PointCtx& ctx, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const MetricPack& mp = ctx.metric();
  const double xx = X.dot(mp.G * X), yy = Y.dot(mp.G * Y), xy = X.dot(mp.G * Y);
  if (xx <= 0 || yy <= 0) fail(ErrorKind::DegeneratePlane, "zero vector in sectional plane");
  const double norm_gram = 1.0 - (xy * xy) / (xx * yy);
  if (norm_gram < 1e-10) fail(ErrorKind::DegeneratePlane, "sectional plane nearly degenerate");
  const Eigen::VectorXd rxyy = riemann_apply(ctx.curvature(), X, Y, Y);
  return rxyy.dot(mp.G * X) / (xx * yy - xy * xy);
}

Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& cand, const Eigen::MatrixXd& G,
                             double drop_tol) {
  const int d = static_cast<int>(cand.rows());
  Eigen::MatrixXd out(d, cand.cols());
  int kept = 0;
  for (int c = 0; c < cand.cols(); ++c) {
    Eigen::VectorXd v = cand.col(c);
    for (int k = 0; k < kept; ++k) v -= out.col(k).dot(G * v) * out.col(k);
    const double n = std::sqrt(std::max(0.0, v.dot(G * v)));
    if (n < drop_tol) continue;
    out.col(kept++) = v / n;
  }
  return out.leftCols(kept);
}

// ---------------------------------------------------------------------------
// model-level wrappers

TensorValue christoffel(const ManifoldModel& M, const Eigen::VectorXd& p) {
  PointCtx ctx(M, p);
  const GammaPack& gp = ctx.gamma();
  const int d = M.dim();
  TensorValue t({Slot::Up, Slot::Down, Slot::Down}, d, p);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t.at(k, i, j) = gp.gamma.m[k](i, j);
  return t;
}

TensorValue riemann(const ManifoldModel& M, const Eigen::VectorXd& p) {
  PointCtx ctx(M, p);
  const CurvaturePack& cp = ctx.curvature();
  const int d = M.dim();
  TensorValue t({Slot::Up, Slot::Down, Slot::Down, Slot::Down}, d, p);
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t.at(l, k, i, j) = cp.R.at(l, k, i, j);
  return t;
}

TensorValue ricci(const ManifoldModel& M, const Eigen::VectorXd& p) {
  PointCtx ctx(M, p);
  return TensorValue::from_matrix(ctx.curvature().ric, Slot::Down, Slot::Down, p);
}

double scalar_curvature(const ManifoldModel& M, const Eigen::VectorXd& p) {
  PointCtx ctx(M, p);
  return ctx.curvature().scalar;
}

double sectional(const ManifoldModel& M, const Eigen::VectorXd& p, const Eigen::VectorXd& X,
                 const Eigen::VectorXd& Y) {
  PointCtx ctx(M, p);
  return sectional(ctx, X, Y);
}

TensorValue fundamental_two_form(const ManifoldModel& M, const Eigen::VectorXd& p, int a) {
  PointCtx ctx(M, p);
  Eigen::MatrixXd f = eval_matrix(fundamental_form_field(M, a), ctx.jets);
  // antisymmetrize bitwise (entries already antisymmetric up to rounding)
  for (int i = 0; i < f.rows(); ++i)
    for (int j = i; j < f.cols(); ++j) {
      const double v = 0.5 * (f(i, j) - f(j, i));
      f(i, j) = v;
      f(j, i) = -v;
    }
  return TensorValue::from_matrix(f, Slot::Down, Slot::Down, p);
}

TensorValue exterior_derivative_eta(const ManifoldModel& M, const Eigen::VectorXd& p, int a) {
  PointCtx ctx(M, p);
  return TensorValue::from_matrix(d_oneform(M.eta[a], ctx.jets), Slot::Down, Slot::Down, p);
}

std::pair<TensorValue, TensorValue> nijenhuis(const ManifoldModel& M, const Eigen::VectorXd& p,
                                              int a) {
  PointCtx ctx(M, p);
  Tensor3 n1;
  Eigen::MatrixXd n2;
  nijenhuis_tensors(M, a, ctx.jets, &n1, &n2);
  const int d = M.dim();
  TensorValue t1({Slot::Up, Slot::Down, Slot::Down}, d, p);
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t1.at(m, i, j) = n1.m[m](i, j);
  return {t1, TensorValue::from_matrix(n2, Slot::Down, Slot::Down, p)};
}

TensorValue covariant_derivative_vector(const ManifoldModel& M, const Eigen::VectorXd& p,
                                        const ExprVec& field, const Eigen::VectorXd& direction) {
  PointCtx ctx(M, p);
  Eigen::MatrixXd c = cov_deriv_vector(ctx, field);
  return TensorValue::from_vector(c.transpose() * direction, Slot::Up, p);
}

TensorValue covariant_derivative_oneform(const ManifoldModel& M, const Eigen::VectorXd& p,
                                         const ExprVec& field, const Eigen::VectorXd& direction) {
  PointCtx ctx(M, p);
  Eigen::MatrixXd c = cov_deriv_oneform(ctx, field);
  return TensorValue::from_vector(c.transpose() * direction, Slot::Down, p);
}

TensorValue covariant_derivative_endo(const ManifoldModel& M, const Eigen::VectorXd& p,
                                      const ExprMat& field, const Eigen::VectorXd& direction) {
  PointCtx ctx(M, p);
  Tensor3 t = cov_deriv_endo(ctx, field);
  const int d = M.dim();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) r += direction(i) * t.m[i];
  return TensorValue::from_matrix(r, Slot::Up, Slot::Down, p);
}

}  // namespace qs3
