#include "qs3/zoo.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <utility>
#include <vector>

#include "qs3/contact.hpp"
#include "qs3/errors.hpp"
#include "qs3/geometry.hpp"

namespace qs3 {

namespace {

constexpr std::uint64_t kSelfCheckSeed = 0x5eedull;
constexpr int kSelfCheckPoints = 16;
constexpr int kEvenPerms[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

Expr sum_terms(const std::vector<Expr>& terms) {
  if (terms.empty()) return Expr();  // constant 0
  Expr s = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) s = s + terms[i];
  return s;
}

// v -> A v for a constant matrix A with entries in {0, +1, -1}; only the
// nonzero entries contribute nodes.
ExprVec signed_apply(const Eigen::MatrixXd& A, const ExprVec& v) {
  ExprVec out(static_cast<std::size_t>(A.rows()));
  for (int k = 0; k < A.rows(); ++k) {
    std::vector<Expr> terms;
    for (int l = 0; l < A.cols(); ++l) {
      const double a = A(k, l);
      if (a == 0.0) continue;
      terms.push_back(a == 1.0 ? v[l] : (a == -1.0 ? -v[l] : Expr::constant(a) * v[l]));
    }
    out[k] = sum_terms(terms);
  }
  return out;
}

Eigen::MatrixXd block_repeat(const Eigen::Matrix4d& B, int copies) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(4 * copies, 4 * copies);
  for (int b = 0; b < copies; ++b) out.block<4, 4>(4 * b, 4 * b) = B;
  return out;
}

ExprMat const_mat(const Eigen::MatrixXd& A) {
  ExprMat out(static_cast<std::size_t>(A.rows()), ExprVec(static_cast<std::size_t>(A.cols())));
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      out[i][j] = A(i, j) == 0.0 ? Expr() : Expr::constant(A(i, j));
  return out;
}

// The vertical 3x3 blocks of the flat model's endomorphisms: column b of
// block a is the coefficient vector of phi_a(d/dz_b) in (d/dz_1..d/dz_3).
Eigen::Matrix3d vertical_block(int a) {
  Eigen::Matrix3d V = Eigen::Matrix3d::Zero();
  for (int p = 0; p < 3; ++p) {
    const int b = kEvenPerms[p][0], c = kEvenPerms[p][1], d = kEvenPerms[p][2];
    if (b == a) {
      V(d, c) = 1.0;   // phi_a(xi_b) = xi_c with (a, b, c) even
      V(c, d) = -1.0;  // phi_a(xi_c) = -xi_b
    }
  }
  // built for perms (a, b, c): phi_a xi_b = xi_c, phi_a xi_c = -xi_b
  return V;
}

}  // namespace

const std::array<Eigen::Matrix4d, 3>& quaternion_basis() {
  static const std::array<Eigen::Matrix4d, 3> basis = [] {
    std::array<Eigen::Matrix4d, 3> J;
    J[0] << 0, -1, 0, 0,  //
        1, 0, 0, 0,       //
        0, 0, 0, -1,      //
        0, 0, 1, 0;
    J[1] << 0, 0, -1, 0,  //
        0, 0, 0, 1,       //
        1, 0, 0, 0,       //
        0, -1, 0, 0;
    J[2] << 0, 0, 0, -1,  //
        0, 0, -1, 0,      //
        0, 1, 0, 0,       //
        1, 0, 0, 0;
    const Eigen::Matrix4d I = Eigen::Matrix4d::Identity();
    for (int a = 0; a < 3; ++a) {
      if ((J[a] * J[a] + I).cwiseAbs().maxCoeff() != 0.0 ||
          (J[a].transpose() + J[a]).cwiseAbs().maxCoeff() != 0.0)
        fail(ErrorKind::InvalidArgument, "quaternion basis matrix " + std::to_string(a + 1) +
                                             " is not an antisymmetric complex structure");
    }
    for (const auto& perm : kEvenPerms) {
      if ((J[perm[0]] * J[perm[1]] - J[perm[2]]).cwiseAbs().maxCoeff() != 0.0)
        fail(ErrorKind::InvalidArgument, "quaternion basis violates the triple product");
    }
    return J;
  }();
  return basis;
}

void verify_model(const ManifoldModel& M, bool quasi_sasakian) {
  const auto pts = sample_points(M.dom, kSelfCheckPoints, kSelfCheckSeed);
  auto abort_on = [&](const StructureCheck& c, const char* stage) {
    if (c.ok) return;
    std::string msg = M.name + " failed " + stage + " self-verification";
    if (!c.failures.empty()) msg += ": " + c.failures.front();
    fail(ErrorKind::InvalidArgument, msg);
  };
  abort_on(check_almost_contact_metric(M, pts, 1e-8), "almost-contact-metric");
  abort_on(check_three_structure(M, pts, 1e-8), "triple-relation");
  if (quasi_sasakian) abort_on(check_quasi_sasakian(M, pts, 1e-7), "normality/closedness");
}

ManifoldModel flat_three_cosymplectic(int n) {
  if (n < 0) fail(ErrorKind::InvalidArgument, "flat model needs n >= 0");
  const int d = 4 * n + 3;
  ManifoldModel M;
  M.name = "flat(" + std::to_string(n) + ")";
  M.dom = ChartDomain::box(d, 1.0);
  M.g = expr_identity(d);
  const auto& Q = quaternion_basis();
  for (int a = 0; a < 3; ++a) {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(d, d);
    if (n > 0) F.topLeftCorner(4 * n, 4 * n) = block_repeat(Q[a], n);
    F.bottomRightCorner<3, 3>() = vertical_block(a);
    M.phi[a] = const_mat(F);
    M.xi[a] = expr_zero_vec(d);
    M.xi[a][static_cast<std::size_t>(4 * n + a)] = Expr::constant(1.0);
    M.eta[a] = expr_zero_vec(d);
    M.eta[a][static_cast<std::size_t>(4 * n + a)] = Expr::constant(1.0);
  }
  M.declared_c = 0.0;
  for (int i = 0; i < 4 * n; ++i) M.e4m_fields.push_back(coordinate_field(d, i));
  M.proj_e4l = expr_zero_mat(d);
  Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(d, d);
  Pm.topLeftCorner(4 * n, 4 * n).setIdentity();
  M.proj_e4m = const_mat(Pm);
  verify_model(M, true);
  return M;
}

ManifoldModel sphere_three_alpha(int n, double r) {
  if (n < 0 || !(r > 0.0) || !std::isfinite(r))
    fail(ErrorKind::InvalidArgument, "sphere model needs n >= 0 and r > 0");
  const int d = 4 * n + 3;  // chart dimension; ambient dimension is d + 1
  ManifoldModel M;
  M.name = "sphere(" + std::to_string(n) + "," + fmt_double(r) + ")";

  std::vector<Expr> x(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = Expr::var(i);
  std::vector<Expr> sq;
  for (int i = 0; i < d; ++i) sq.push_back(x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]);
  const Expr w2 = Expr::constant(r * r) - sum_terms(sq);
  const Expr w = sqrt(w2);

  // Graph chart x -> (x, w(x)) over the quarter-radius box; the guard keeps
  // the square root away from its branch point even off the box.
  const double h = r / (2.0 * std::sqrt(static_cast<double>(d)));
  M.dom = ChartDomain(d, Eigen::VectorXd::Constant(d, -h), Eigen::VectorXd::Constant(d, h), w2);

  // Induced metric of the graph: g_ij = delta_ij + x_i x_j / w^2.
  M.g = expr_identity(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Expr corr = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)] / w2;
      M.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          i == j ? Expr::constant(1.0) + corr : corr;
    }

  // Ambient position and the three ambient complex structures.
  ExprVec pos(static_cast<std::size_t>(d + 1));
  for (int i = 0; i < d; ++i) pos[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
  pos[static_cast<std::size_t>(d)] = w;
  std::array<Eigen::MatrixXd, 3> JA;
  for (int a = 0; a < 3; ++a) JA[a] = block_repeat(quaternion_basis()[a], n + 1);

  const Expr inv_r = Expr::constant(1.0 / r);
  for (int a = 0; a < 3; ++a) {
    // Reeb field: minus the ambient structure applied to the unit normal
    // pos / r; tangency makes the first d ambient components the chart ones.
    ExprVec xiA = signed_apply(JA[a], pos);
    M.xi[a] = ExprVec(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
      M.xi[a][static_cast<std::size_t>(k)] = -(inv_r * xiA[static_cast<std::size_t>(k)]);

    // phi_a(d/dx_i): tangential projection of the ambient image of the
    // coordinate lift  d/dx_i + (dw/dx_i) d/dx_{d+1}.
    M.phi[a] = expr_zero_mat(d);
    for (int i = 0; i < d; ++i) {
      const Expr dwi = -(x[static_cast<std::size_t>(i)] / w);
      ExprVec U(static_cast<std::size_t>(d + 1));
      for (int k = 0; k <= d; ++k) {
        std::vector<Expr> terms;
        if (JA[a](k, i) != 0.0)
          terms.push_back(JA[a](k, i) == 1.0 ? Expr::constant(1.0) : Expr::constant(-1.0));
        if (JA[a](k, d) != 0.0) terms.push_back(JA[a](k, d) == 1.0 ? dwi : -dwi);
        U[static_cast<std::size_t>(k)] = sum_terms(terms);
      }
      std::vector<Expr> inner_terms;
      for (int k = 0; k < d; ++k)
        inner_terms.push_back(U[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)]);
      inner_terms.push_back(U[static_cast<std::size_t>(d)] * w);
      const Expr inner = inv_r * sum_terms(inner_terms);  // <U, normal>
      for (int k = 0; k < d; ++k)
        M.phi[a][static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
            U[static_cast<std::size_t>(k)] - inner * (inv_r * x[static_cast<std::size_t>(k)]);
    }
    M.eta[a] = expr_mat_vec(M.g, M.xi[a]);
  }
  M.declared_c = 2.0 / r;
  if (n > 0)
    for (int i = 0; i < d; ++i) M.e4l_fields.push_back(horizontal_part_field(M, coordinate_field(d, i)));
  M.proj_e4l = expr_mat_sub(expr_identity(d), vertical_projection_field(M));
  M.proj_e4m = expr_zero_mat(d);
  verify_model(M, true);
  return M;
}

ManifoldModel product_three_qs(int l, int m, double r) {
  if (l < 0 || m < 0) fail(ErrorKind::InvalidArgument, "product model needs l, m >= 0");
  ManifoldModel S = sphere_three_alpha(l, r);
  const int ds = S.dim();
  const int d = ds + 4 * m;
  ManifoldModel M;
  M.name = "product(" + std::to_string(l) + "," + std::to_string(m) + "," + fmt_double(r) + ")";

  Eigen::VectorXd lo(d), hi(d);
  lo.head(ds) = S.dom.lo;
  hi.head(ds) = S.dom.hi;
  lo.tail(4 * m).setConstant(-1.0);
  hi.tail(4 * m).setConstant(1.0);
  M.dom = ChartDomain(d, lo, hi, S.dom.guard);

  M.g = expr_identity(d);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j)
      M.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          S.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  const auto& Q = quaternion_basis();
  for (int a = 0; a < 3; ++a) {
    M.phi[a] = expr_zero_mat(d);
    for (int i = 0; i < ds; ++i)
      for (int j = 0; j < ds; ++j)
        M.phi[a][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            S.phi[a][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (m > 0) {
      const Eigen::MatrixXd JB = block_repeat(Q[a], m);
      for (int i = 0; i < 4 * m; ++i)
        for (int j = 0; j < 4 * m; ++j)
          if (JB(i, j) != 0.0)
            M.phi[a][static_cast<std::size_t>(ds + i)][static_cast<std::size_t>(ds + j)] =
                Expr::constant(JB(i, j));
    }
    M.xi[a] = expr_zero_vec(d);
    M.eta[a] = expr_zero_vec(d);
    for (int i = 0; i < ds; ++i) {
      M.xi[a][static_cast<std::size_t>(i)] = S.xi[a][static_cast<std::size_t>(i)];
      M.eta[a][static_cast<std::size_t>(i)] = S.eta[a][static_cast<std::size_t>(i)];
    }
  }
  M.declared_c = 2.0 / r;

  if (l > 0)
    for (int i = 0; i < ds; ++i) M.e4l_fields.push_back(horizontal_part_field(M, coordinate_field(d, i)));
  for (int j = 0; j < 4 * m; ++j) M.e4m_fields.push_back(coordinate_field(d, ds + j));

  Eigen::MatrixXd Ps = Eigen::MatrixXd::Zero(d, d);
  Ps.topLeftCorner(ds, ds).setIdentity();
  M.proj_e4l = expr_mat_sub(const_mat(Ps), vertical_projection_field(M));
  Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(d, d);
  Pm.bottomRightCorner(4 * m, 4 * m).setIdentity();
  M.proj_e4m = const_mat(Pm);
  verify_model(M, true);
  return M;
}

HyperkahlerBlock flat_hyperkahler(int m) {
  if (m < 1) fail(ErrorKind::InvalidArgument, "hyperkaehler block needs m >= 1");
  HyperkahlerBlock B;
  B.m = m;
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd J = block_repeat(quaternion_basis()[a], m);
    B.J[a] = const_mat(J);
    B.kaehler[a] = const_mat(J);  // identity metric: form components = J entries
  }
  return B;
}

ManifoldModel homothetic_deform(const ManifoldModel& M, double s) {
  if (!(s > 0.0) || !std::isfinite(s))
    fail(ErrorKind::InvalidArgument, "homothetic deformation needs s > 0");
  ManifoldModel D = M;
  D.name = "deform(" + M.name + "," + fmt_double(s) + ")";
  const Expr es = Expr::constant(s);
  const Expr es2 = Expr::constant(s * s);
  const Expr einv = Expr::constant(1.0 / s);
  D.g = expr_scale(M.g, es2);
  for (int a = 0; a < 3; ++a) {
    D.xi[a] = expr_scale(M.xi[a], einv);
    D.eta[a] = expr_scale(M.eta[a], es);
  }
  if (M.declared_c) D.declared_c = *M.declared_c / s;
  // Block generators and projections are unchanged: the splitting is scale
  // invariant and the projections stay g-orthogonal under g -> s^2 g.
  verify_model(D, true);
  return D;
}

ManifoldModel perturb_component(const ManifoldModel& M, const std::string& which, int a, int i,
                                int j, double delta) {
  const int d = M.dim();
  if (a < 0 || a > 2 || i < 0 || i >= d || j < 0 || j >= d)
    fail(ErrorKind::InvalidArgument, "perturbation indices out of range");
  ManifoldModel P = M;
  P.name = M.name + "+perturb(" + which + ")";
  const Expr dlt = Expr::constant(delta);
  const auto si = static_cast<std::size_t>(i);
  const auto sj = static_cast<std::size_t>(j);
  if (which == "g")
    P.g[si][sj] = P.g[si][sj] + dlt;
  else if (which == "phi")
    P.phi[a][si][sj] = P.phi[a][si][sj] + dlt;
  else if (which == "xi")
    P.xi[a][si] = P.xi[a][si] + dlt;
  else if (which == "eta")
    P.eta[a][si] = P.eta[a][si] + dlt;
  else
    fail(ErrorKind::InvalidArgument, "unknown tensor '" + which + "' (want g|phi|xi|eta)");
  return P;  // deliberately returned unverified
}

ConeModel cone_hermitian(const ManifoldModel& M, double alpha) {
  const int d = M.dim();
  ConeModel C;
  C.base = M;
  C.alpha = alpha;

  Eigen::VectorXd lo(d + 1), hi(d + 1);
  lo.head(d) = M.dom.lo;
  hi.head(d) = M.dom.hi;
  lo(d) = -1.0;
  hi(d) = 1.0;
  C.dom = ChartDomain(d + 1, lo, hi, M.dom.guard);

  C.G = expr_zero_mat(d + 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      C.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          M.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  C.G[static_cast<std::size_t>(d)][static_cast<std::size_t>(d)] = Expr::constant(1.0);

  for (int a = 0; a < 3; ++a) {
    ExprMat J = expr_zero_mat(d + 1);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j)
        J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            M.phi[a][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      J[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] =
          -M.xi[a][static_cast<std::size_t>(i)];
      J[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] =
          M.eta[a][static_cast<std::size_t>(i)];
    }
    C.J[a] = J;
    C.Omega[a] = expr_mat_mul(C.G, J);
  }
  C.lee = expr_zero_vec(d + 1);
  C.lee[static_cast<std::size_t>(d)] = Expr::constant(-alpha);
  return C;
}

ConeCheckResult cone_check(const ConeModel& C, const Eigen::VectorXd& p) {
  const int d = C.base.dim();
  const int D = d + 1;
  if (p.size() != D) fail(ErrorKind::DimensionMismatch, "cone point has wrong dimension");
  if (!C.dom.admissible(p, kGuardMargin))
    fail(ErrorKind::DomainViolation, "cone point outside the chart domain");
  JetCache cache(p);

  std::array<Eigen::MatrixXd, 3> Jv, Ov;
  for (int a = 0; a < 3; ++a) {
    Jv[a] = eval_matrix(C.J[a], cache);
    Ov[a] = eval_matrix(C.Omega[a], cache);
  }
  const Eigen::MatrixXd Gv = eval_matrix(C.G, cache);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(D, D);

  ConeCheckResult res;
  for (int a = 0; a < 3; ++a) {
    res.quaternionic = std::max(res.quaternionic, (Jv[a] * Jv[a] + I).cwiseAbs().maxCoeff());
    res.compatibility =
        std::max(res.compatibility, (Jv[a].transpose() * Gv * Jv[a] - Gv).cwiseAbs().maxCoeff());
  }
  for (const auto& perm : kEvenPerms)
    res.quaternionic =
        std::max(res.quaternionic, (Jv[perm[0]] * Jv[perm[1]] - Jv[perm[2]]).cwiseAbs().maxCoeff());

  const Eigen::VectorXd leev = eval_vector(C.lee, cache);
  for (int a = 0; a < 3; ++a) {
    // Block layout against independently evaluated base tensors, plus
    // antisymmetry of the Kaehler forms.
    const Eigen::MatrixXd gF =
        eval_matrix(C.base.g, cache) * eval_matrix(C.base.phi[a], cache);
    const Eigen::VectorXd etav = eval_vector(C.base.eta[a], cache);
    double blocks = (Ov[a] + Ov[a].transpose()).cwiseAbs().maxCoeff();
    blocks = std::max(blocks, (Ov[a].topLeftCorner(d, d) - gF).cwiseAbs().maxCoeff());
    blocks = std::max(blocks, (Ov[a].topRightCorner(d, 1) + etav).cwiseAbs().maxCoeff());
    blocks = std::max(blocks, std::abs(Ov[a](d, d)));
    res.omega_blocks = std::max(res.omega_blocks, blocks);

    const Tensor3 dOm = d_twoform(C.Omega[a], cache);
    AltForm om2 = AltForm::from_two_form(0.5 * (Ov[a] - Ov[a].transpose()));
    const AltForm lw = wedge(AltForm::from_covector(leev), om2);
    for (int i = 0; i < D; ++i)
      for (int j = i + 1; j < D; ++j)
        for (int k = j + 1; k < D; ++k)
          res.domega_pair = std::max(
              res.domega_pair, std::abs(dOm.m[i](j, k) - 2.0 * lw.component({i, j, k})));

    ExprVec eta_pad = C.base.eta[a];  // t-independent, zero dt-component
    eta_pad.push_back(Expr());
    const Eigen::MatrixXd deta = d_oneform(eta_pad, cache);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        res.domega_deta =
            std::max(res.domega_deta, std::abs(dOm.m[i](j, d) + (2.0 / 3.0) * deta(i, j)));
  }
  return res;
}

}  // namespace qs3
