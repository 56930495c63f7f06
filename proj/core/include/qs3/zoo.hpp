#pragma once

#include <array>
#include <string>

#include "qs3/model.hpp"

namespace qs3 {

// The three 4x4 matrices of left multiplication by i, j, k on (1, i, j, k).
// Verified once at first use: J_a^2 = -I, J_a^T = -J_a, J_1 J_2 = J_3 and the
// other even-permutation products, all as exact integer identities.
const std::array<Eigen::Matrix4d, 3>& quaternion_basis();

// Flat model: coordinates (x_1..x_4n, z_1, z_2, z_3), identity metric,
// xi_a = d/dz_a, all eta closed. dim 4n+3.
ManifoldModel flat_three_cosymplectic(int n);

// Round sphere of radius r in quaternionic space, graph chart over the open
// ball (last ambient coordinate w = sqrt(r^2 - |x|^2)); xi_a = -J_a nu with nu
// the outward unit normal. dim 4n+3, d eta_a = (1/r) Phi_a, c = 2/r.
ManifoldModel sphere_three_alpha(int n, double r);

// S^{4l+3}(r) x R^{4m} as one block-diagonal chart model. dim 4(l+m)+3.
ManifoldModel product_three_qs(int l, int m, double r);

// Flat R^{4m} with the three constant complex structures and their (closed)
// Kaehler forms; building block for products and the cone tests.
struct HyperkahlerBlock {
  int m = 0;
  std::array<ExprMat, 3> J;
  std::array<ExprMat, 3> kaehler;  // identity metric: forms equal J entrywise
};
HyperkahlerBlock flat_hyperkahler(int m);

// phi -> phi, xi -> xi/s, eta -> s eta, g -> s^2 g; rescales the structure
// constant c to c/s. Applying s = c/2 to a maximal-rank model makes it
// satisfy d eta = Phi.
ManifoldModel homothetic_deform(const ManifoldModel& M, double s);

// Copy of M with `delta` added to a single component of one structure tensor;
// `which` in {"g", "phi", "xi", "eta"}. `a` picks the structure (ignored for
// g); `j` is ignored for xi/eta. The result is deliberately NOT re-verified.
ManifoldModel perturb_component(const ManifoldModel& M, const std::string& which, int a, int i,
                                int j, double delta);

// Almost Hermitian structures on M x R built from an almost 3-contact metric
// model: J_a (X, f d/dt) = (phi_a X - f xi_a, eta_a(X) d/dt), G = g + dt^2.
struct ConeModel {
  ManifoldModel base;
  double alpha = 0.0;  // the base model's d eta = alpha Phi scale
  ChartDomain dom;     // base box extended by t in (-1, 1); t is the last coordinate
  std::array<ExprMat, 3> J;
  ExprMat G;
  std::array<ExprMat, 3> Omega;  // G J_a
  ExprVec lee;                   // the 1-form -alpha dt
  int dim() const { return base.dim() + 1; }
};

ConeModel cone_hermitian(const ManifoldModel& M, double alpha);

struct ConeCheckResult {
  double quaternionic = 0.0;   // J_a J_b - J_c (even perms) and J_a^2 + I
  double compatibility = 0.0;  // J_a^T G J_a - G
  double omega_blocks = 0.0;   // Omega_a against the Phi_a / eta_a block layout
  double domega_pair = 0.0;    // d Omega_a - 2 lee ^ Omega_a, all components
  double domega_deta = 0.0;    // d Omega_a(X, Y, d/dt) + (2/3) d eta_a(X, Y)
};
ConeCheckResult cone_check(const ConeModel& C, const Eigen::VectorXd& p);

// Structural self-verification run by every constructor (16 fixed seeded
// points): almost-contact-metric axioms, the triple relations and, when
// `quasi_sasakian` is set, normality and closedness. Aborts via Error on
// violation, so a model object in hand is always a verified one.
void verify_model(const ManifoldModel& M, bool quasi_sasakian);

}  // namespace qs3
