#include "qs3/foliation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "qs3/contact.hpp"
#include "qs3/errors.hpp"
#include "qs3/tensor.hpp"

namespace qs3 {

namespace {

Eigen::MatrixXd antisymmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m - m.transpose().eval());
}

}  // namespace

FrameDecomposition split_tangent(PointCtx& ctx, double c) {
  const ManifoldModel& M = ctx.model;
  const int d = ctx.dim();
  FrameDecomposition dec;
  dec.p = ctx.p();
  dec.c = c;
  dec.G = ctx.metric().G;

  dec.V.resize(d, 3);
  Eigen::MatrixXd etaM(d, 3);
  for (int a = 0; a < 3; ++a) {
    dec.V.col(a) = eval_vector(M.xi[a], ctx.jets);
    etaM.col(a) = eval_vector(M.eta[a], ctx.jets);
    dec.deta[a] = d_oneform(M.eta[a], ctx.jets);
  }
  dec.PV = dec.V * etaM.transpose();

  // horizontal orthonormal basis from projected coordinate fields, fixed order
  const Eigen::MatrixXd cand = Eigen::MatrixXd::Identity(d, d) - dec.PV;
  dec.H = gram_schmidt(cand, dec.G);
  if (dec.H.cols() != d - 3)
    fail(ErrorKind::DimensionMismatch,
         "horizontal block has dimension " + std::to_string(dec.H.cols()) + ", expected " +
             std::to_string(d - 3));

  // pairing of d eta_1 on the horizontal block; its kernel is E4m
  int r = 0;
  if (d == 3) {
    dec.E4l.resize(d, 0);
    dec.E4m.resize(d, 0);
  } else {
    const Eigen::MatrixXd A = dec.H.transpose() * dec.deta[0] * dec.H;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    if (smax > 0.0) {
      for (int i = 0; i < s.size(); ++i) {
        const double rel = s(i) / smax;
        if (rel >= kRankBandLo && rel <= kRankBandHi)
          fail(ErrorKind::RankUnstable,
               "d eta_1 pairing has a singular value inside the guard band (ratio " +
                   std::to_string(rel) + ")");
        if (rel > kRankTol) ++r;
      }
    }
    if (r % 4 != 0 || (d - 3 - r) % 4 != 0)
      fail(ErrorKind::DimensionMismatch,
           "horizontal pairing rank " + std::to_string(r) +
               " does not split the block into quaternionic pieces");
    dec.E4l = dec.H * svd.matrixU().leftCols(r);
    dec.E4m = dec.H * svd.matrixV().rightCols(d - 3 - r);
  }
  dec.l = r / 4;
  dec.m = (d - 3 - r) / 4;
  dec.P4l = dec.E4l * dec.E4l.transpose() * dec.G;
  dec.P4m = dec.E4m * dec.E4m.transpose() * dec.G;

  const Eigen::MatrixXd support = (c != 0.0) ? (dec.PV + dec.P4l).eval() : dec.P4l;
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd F = eval_matrix(M.phi[a], ctx.jets);
    dec.psi[a] = F * support;
    dec.theta[a] = F - dec.psi[a];
  }
  return dec;
}

double vertical_defect(PointCtx& ctx, const ExprVec& Z) {
  const Eigen::VectorXd z = eval_vector(Z, ctx.jets);
  double w = 0.0;
  for (int a = 0; a < 3; ++a)
    w = std::max(w, std::abs(eval_vector(ctx.model.eta[a], ctx.jets).dot(z)));
  return w;
}

Eigen::VectorXd bott_derivative(PointCtx& ctx, const FrameDecomposition& dec, int a,
                                const ExprVec& Z, double htol) {
  const double defect = vertical_defect(ctx, Z);
  if (defect > htol)
    fail(ErrorKind::NotHorizontal,
         "field has vertical component " + std::to_string(defect) + " at the base point");
  const Eigen::VectorXd br = lie_bracket(ctx.model.xi[a], Z, ctx.jets);
  return br - dec.PV * br;
}

Eigen::MatrixXd gbar_matrix(const ManifoldModel& M, const Eigen::VectorXd& p, double c) {
  PointCtx ctx(M, p);
  FrameDecomposition dec = split_tangent(ctx, c);
  const Eigen::MatrixXd F1 = eval_matrix(M.phi[0], ctx.jets);
  const Eigen::MatrixXd onE4l =
      -dec.P4l.transpose() * dec.deta[0] * (F1 * dec.P4l);  // -d eta_1(P., phi_1 P.)
  Eigen::MatrixXd gbar =
      dec.G - dec.P4l.transpose() * dec.G * dec.P4l + onE4l;
  return 0.5 * (gbar + gbar.transpose().eval());
}

namespace {

// max_a max_j | nabla-bar_{H_j} xi_a + psi_a H_j | with the Levi-Civita
// coefficients of gbar taken from central differences of step h.
double gbar_residual_step(const ManifoldModel& M, const FrameDecomposition& dec,
                          PointCtx& ctx, double h) {
  const int d = M.dim();
  const Eigen::MatrixXd G0 = gbar_matrix(M, dec.p, dec.c);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(G0);
  std::vector<Eigen::MatrixXd> dg(d);
  for (int l = 0; l < d; ++l) {
    Eigen::VectorXd pp = dec.p, pm = dec.p;
    pp(l) += h;
    pm(l) -= h;
    dg[l] = (gbar_matrix(M, pp, dec.c) - gbar_matrix(M, pm, dec.c)) / (2.0 * h);
  }
  std::vector<Eigen::MatrixXd> gamma(d, Eigen::MatrixXd(d, d));  // gamma[k](i,j)
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Eigen::VectorXd rhs(d);
      for (int l = 0; l < d; ++l) rhs(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Eigen::VectorXd gk = lu.solve(rhs);
      for (int k = 0; k < d; ++k) {
        gamma[k](i, j) = gk(k);
        gamma[k](j, i) = gk(k);
      }
    }

  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd J = field_jacobian(M.xi[a], ctx.jets);  // J(i,k) = d_i xi^k
    const Eigen::VectorXd xiv = dec.V.col(a);
    for (int col = 0; col < dec.H.cols(); ++col) {
      const Eigen::VectorXd X = dec.H.col(col);
      Eigen::VectorXd cov = J.transpose() * X;
      for (int k = 0; k < d; ++k) cov(k) += X.dot(gamma[k] * xiv);
      worst = std::max(worst, (cov + dec.psi[a] * X).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace

GbarResidual gbar_connection_residual(const ManifoldModel& M, const Eigen::VectorXd& p, double c,
                                      double h) {
  if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  PointCtx ctx(M, p);
  FrameDecomposition dec = split_tangent(ctx, c);
  // The stencil must stay inside the open chart box, so near an edge the step
  // shrinks to fit. Below 1e-9 the difference quotient is pure rounding noise.
  double hfit = h;
  for (int i = 0; i < M.dim(); ++i)
    hfit = std::min(hfit, 0.45 * std::min(p(i) - M.dom.lo(i), M.dom.hi(i) - p(i)));
  if (!(hfit > 1e-9))
    fail(ErrorKind::FDUnstable, "sample point too close to the chart boundary for a "
                                "finite-difference stencil");
  GbarResidual r;
  r.res_h = gbar_residual_step(M, dec, ctx, hfit);
  r.res_h2 = gbar_residual_step(M, dec, ctx, 0.5 * hfit);
  return r;
}

AdaptedField make_adapted_field(const ManifoldModel& M, const ExprVec& Y) {
  AdaptedField f;
  f.Y = Y;
  f.YH = horizontal_part_field(M, Y);
  for (int a = 0; a < 3; ++a) f.etaY[a] = eta_applied(M, a, Y);
  return f;
}

AdaptedWorkspace make_adapted_workspace(const ManifoldModel& M) {
  const int d = M.dim();
  AdaptedWorkspace w;
  w.coord.reserve(d);
  for (int j = 0; j < d; ++j) w.coord.push_back(make_adapted_field(M, coordinate_field(d, j)));
  for (int a = 0; a < 3; ++a) {
    w.xi[a] = make_adapted_field(M, M.xi[a]);
    w.phicol[a].reserve(d);
    for (int j = 0; j < d; ++j) {
      ExprVec col(d);
      for (int k = 0; k < d; ++k) col[k] = M.phi[a][k][j];
      w.phicol[a].push_back(make_adapted_field(M, col));
    }
  }
  return w;
}

Eigen::VectorXd adapted_deriv(PointCtx& ctx, const FrameDecomposition& dec, int dir,
                              const AdaptedField& Y) {
  const ManifoldModel& M = ctx.model;
  const int d = ctx.dim();
  const Eigen::MatrixXd PH = Eigen::MatrixXd::Identity(d, d) - dec.PV;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (int a = 0; a < 3; ++a) {
    const double eta_dir = ctx.jet(M.eta[a][dir]).value;
    out += eta_dir * (PH * lie_bracket(M.xi[a], Y.YH, ctx.jets));
  }
  const Eigen::VectorXd XH = PH.col(dir);
  const Eigen::MatrixXd C = cov_deriv_vector(ctx, Y.YH);  // (i,k)
  out += PH * (C.transpose() * XH);
  for (int a = 0; a < 3; ++a) out += ctx.jet(Y.etaY[a]).grad(dir) * dec.V.col(a);
  return out;
}

MusicalResidual musical_check(PointCtx& ctx, const FrameDecomposition& dec) {
  const ManifoldModel& M = ctx.model;
  MusicalResidual out;
  std::array<Eigen::MatrixXd, 3> F;
  for (int a = 0; a < 3; ++a) F[a] = eval_matrix(M.phi[a], ctx.jets);
  constexpr int perms[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};

  auto run_block = [&](const Eigen::MatrixXd& basis,
                       const std::array<Eigen::MatrixXd, 3>& pairing, double& res) {
    for (const auto& perm : perms) {
      const int a = perm[0], b = perm[1], g = perm[2];
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(pairing[b]);
      const Eigen::VectorXd s = svd.singularValues();
      if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > 1e8)
        fail(ErrorKind::SingularPairing,
             "restricted 2-form of structure " + std::to_string(b + 1) +
                 " is numerically singular on the block");
      const Eigen::MatrixXd Ma = basis.transpose() * dec.G * F[a] * basis;
      const Eigen::MatrixXd rhs =
          pairing[b].transpose().partialPivLu().solve(pairing[g].transpose());
      res = std::max(res, (Ma + rhs).cwiseAbs().maxCoeff());
    }
  };

  if (dec.l > 0) {
    out.e4l_applicable = true;
    std::array<Eigen::MatrixXd, 3> B;
    for (int a = 0; a < 3; ++a) B[a] = dec.E4l.transpose() * dec.deta[a] * dec.E4l;
    run_block(dec.E4l, B, out.res_e4l);
  }
  if (dec.m > 0) {
    out.e4m_applicable = true;
    std::array<Eigen::MatrixXd, 3> C;
    for (int a = 0; a < 3; ++a)
      C[a] = dec.E4m.transpose() * (dec.G * F[a]) * dec.E4m;
    run_block(dec.E4m, C, out.res_e4m);
  }
  return out;
}

std::vector<PairResidual> contact_symplectic_pairs(PointCtx& ctx, const FrameDecomposition& dec) {
  const ManifoldModel& M = ctx.model;
  const int d = ctx.dim();
  std::array<AltForm, 3> eta, deta, theta;
  for (int a = 0; a < 3; ++a) {
    eta[a] = AltForm::from_covector(eval_vector(M.eta[a], ctx.jets));
    deta[a] = AltForm::from_two_form(antisymmetrize(dec.deta[a]));
    const Eigen::MatrixXd Phi = dec.G * eval_matrix(M.phi[a], ctx.jets);
    theta[a] = AltForm::from_two_form(
        antisymmetrize(dec.P4m.transpose() * Phi * dec.P4m));
  }

  std::vector<PairResidual> out;
  out.reserve(9);
  for (int b = 0; b < 3; ++b)
    for (int g = 0; g < 3; ++g) {
      PairResidual r;
      r.beta = b + 1;
      r.gamma = g + 1;
      AltForm vol = wedge(eta[b], wedge_power(deta[b], 2 * dec.l + 1));
      vol = wedge(vol, wedge_power(theta[g], 2 * dec.m));
      if (vol.degree() != d)
        fail(ErrorKind::DimensionMismatch, "pair volume form has wrong degree");
      r.volume = vol.max_abs();
      r.deta_power = wedge_power(deta[b], 2 * dec.l + 2).max_abs();
      r.theta_power = wedge_power(theta[g], 2 * dec.m + 1).max_abs();
      out.push_back(r);
    }
  return out;
}

}  // namespace qs3
