#pragma once

#include <array>
#include <vector>

#include "qs3/geometry.hpp"
#include "qs3/model.hpp"

namespace qs3 {

// Pointwise g-orthonormal adapted frame: the vertical block spanned by the
// Reeb fields, the two horizontal blocks, the associated projections, and the
// cut-off endomorphisms psi_a / theta_a.
struct FrameDecomposition {
  Eigen::VectorXd p;
  double c = 0.0;
  int l = 0, m = 0;
  Eigen::MatrixXd G;                    // metric at p
  Eigen::MatrixXd V;                    // d x 3, columns xi_1, xi_2, xi_3
  Eigen::MatrixXd H;                    // d x (d-3), g-orthonormal horizontal basis
  Eigen::MatrixXd E4l, E4m;             // d x 4l, d x 4m
  Eigen::MatrixXd PV, P4l, P4m;         // g-orthogonal projection endomorphisms
  std::array<Eigen::MatrixXd, 3> psi;   // phi_a cut off outside its support block
  std::array<Eigen::MatrixXd, 3> theta; // phi_a - psi_a
  std::array<Eigen::MatrixXd, 3> deta;  // deta[a](i,j) = d eta_a(d_i, d_j)
};

// Splits the tangent space at ctx's point: E4m is the horizontal kernel of
// d eta_1 (SVD with the rank guard band), E4l its orthogonal complement in
// the horizontal block. Pass the classified structure constant; c == 0.0
// selects the closed family, where psi_a is supported on E4l alone instead
// of E4l + vertical. Throws RankUnstable / DimensionMismatch.
FrameDecomposition split_tangent(PointCtx& ctx, double c);

// max_a |eta_a(Z)| at the point.
double vertical_defect(PointCtx& ctx, const ExprVec& Z);

// [xi_a, Z]_H of a horizontal field Z; NotHorizontal if eta(Z) > htol at p.
Eigen::VectorXd bott_derivative(PointCtx& ctx, const FrameDecomposition& dec, int a,
                                const ExprVec& Z, double htol = 1e-8);

// The deformed compatible metric, assembled pointwise: g everywhere except on
// E4l x E4l, where it equals -d eta_1(., phi_1 .).
Eigen::MatrixXd gbar_matrix(const ManifoldModel& M, const Eigen::VectorXd& p, double c);

// Residual of (Levi-Civita of gbar applied to xi_a) + psi_a X over horizontal
// basis directions X and all a. The connection of gbar is the one place a
// derivative of a pointwise-assembled (non-closed-form) field is needed, so
// it uses central differences of step h; res_h2 repeats with h/2 so the
// caller can tell truncation noise from a genuine residual.
struct GbarResidual {
  double res_h = 0.0, res_h2 = 0.0;
};
GbarResidual gbar_connection_residual(const ManifoldModel& M, const Eigen::VectorXd& p, double c,
                                      double h);

// -- adapted connection -------------------------------------------------------
// nabla-tilde_X Y = sum_a eta_a(X) [xi_a, Y_H]_H + (nabla_{X_H} Y_H)_H
//                   + sum_a X(eta_a(Y)) xi_a,
// the unique metric connection with parallel Reeb fields and torsion
// 2 sum_a d eta_a (x) xi_a.

// A field prepared for adapted differentiation: the field, its horizontal
// part, and the scalars eta_a(Y), built once per model and reused at every
// point (the jet cache memoizes on node identity).
struct AdaptedField {
  ExprVec Y, YH;
  std::array<Expr, 3> etaY;
};

AdaptedField make_adapted_field(const ManifoldModel& M, const ExprVec& Y);

struct AdaptedWorkspace {
  std::vector<AdaptedField> coord;                 // coordinate fields d_j
  std::array<AdaptedField, 3> xi;                  // the Reeb fields
  std::array<std::vector<AdaptedField>, 3> phicol; // phi_a d_j as fields
};

AdaptedWorkspace make_adapted_workspace(const ManifoldModel& M);

// nabla-tilde of Y in the coordinate direction `dir` at ctx's point.
Eigen::VectorXd adapted_deriv(PointCtx& ctx, const FrameDecomposition& dec, int dir,
                              const AdaptedField& Y);

// -- musical isomorphisms ------------------------------------------------------
// phi_a = -(d eta_b)^sharp (d eta_c)^flat on E4l and
// phi_a = -(Phi_b)^sharp (Phi_c)^flat on E4m, even permutations (a,b,c).
// A block is skipped (applicable = false) when it is empty. Throws
// SingularPairing when a restricted 2-form has condition number > 1e8.
struct MusicalResidual {
  bool e4l_applicable = false, e4m_applicable = false;
  double res_e4l = 0.0, res_e4m = 0.0;
};
MusicalResidual musical_check(PointCtx& ctx, const FrameDecomposition& dec);

// -- contact-symplectic pairs --------------------------------------------------
// For each (b, c): Theta_c = Phi_c restricted to E4m (extended by zero);
// volume = the top-degree component of eta_b ^ (d eta_b)^(2l+1) ^ Theta_c^(2m);
// the two wedge powers must vanish.
struct PairResidual {
  int beta = 0, gamma = 0;     // 1-based indices
  double volume = 0.0;         // must stay away from zero
  double deta_power = 0.0;     // max |(d eta_b)^(2l+2)|
  double theta_power = 0.0;    // max |Theta_c^(2m+1)|
};
std::vector<PairResidual> contact_symplectic_pairs(PointCtx& ctx, const FrameDecomposition& dec);

}  // namespace qs3
