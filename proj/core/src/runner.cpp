#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <string>
#include <vector>

#include "qs3/contact.hpp"
#include "qs3/errors.hpp"
#include "qs3/foliation.hpp"
#include "qs3/geometry.hpp"
#include "qs3/report.hpp"
#include "qs3/zoo.hpp"

namespace qs3 {

namespace {

constexpr int kEvenPerms[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};

// NaN-propagating running maximum: a non-finite residual must never be
// swallowed by max().
void acc(double& m, double r) {
  if (!(r <= m)) m = r;
}

// Entrywise version; a reduction over an empty block (3-dimensional models
// have no horizontal block at all) contributes nothing.
template <typename Derived>
void acc(double& m, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return;
  acc(m, x.cwiseAbs().maxCoeff());
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct PtVals {
  Eigen::MatrixXd G;
  std::array<Eigen::MatrixXd, 3> F;
  std::array<Eigen::VectorXd, 3> xiv;
  std::array<Eigen::VectorXd, 3> etav;
};

PtVals pt_vals(PointCtx& ctx) {
  PtVals v;
  v.G = ctx.metric().G;
  for (int a = 0; a < 3; ++a) {
    v.F[a] = eval_matrix(ctx.model.phi[a], ctx.jets);
    v.xiv[a] = eval_vector(ctx.model.xi[a], ctx.jets);
    v.etav[a] = eval_vector(ctx.model.eta[a], ctx.jets);
  }
  return v;
}

class Recorder {
 public:
  Recorder(RunReport& rep, std::string suite) : rep_(rep), suite_(std::move(suite)) {}

  void add(const std::string& id, const std::string& statement, double tol, double residual,
           int points, const std::string& message = "") {
    IdentityRecord r;
    r.suite = suite_;
    r.id = id;
    r.statement = statement;
    r.tolerance = tol;
    r.max_residual = residual;
    r.points = points;
    r.status = (residual <= tol) ? RecordStatus::Pass : RecordStatus::Fail;
    r.message = message;
    rep_.records.push_back(std::move(r));
  }

  void add_status(const std::string& id, const std::string& statement, double tol,
                  double residual, int points, RecordStatus status,
                  const std::string& message = "") {
    IdentityRecord r;
    r.suite = suite_;
    r.id = id;
    r.statement = statement;
    r.tolerance = tol;
    r.max_residual = residual;
    r.points = points;
    r.status = status;
    r.message = message;
    rep_.records.push_back(std::move(r));
  }

  void na(const std::string& id, const std::string& statement, const std::string& why) {
    add_status(id, statement, 0.0, 0.0, 0, RecordStatus::NotApplicable, why);
  }

  void precondition_fail(const std::string& why, RecordStatus status = RecordStatus::Fail) {
    add_status("preconditions", "suite preconditions hold on the model", 0.0, 0.0, 0, status,
               why);
  }

 private:
  RunReport& rep_;
  std::string suite_;
};

// Everything the suites share at one sample batch.
struct RunState {
  RunState(const ManifoldModel& model, RunConfig config)
      : M(model), cfg(std::move(config)) {}

  const ManifoldModel& M;
  RunConfig cfg;
  std::vector<Eigen::VectorXd> pts;

  std::deque<PointCtx> ctxs;
  std::vector<FrameDecomposition> decs;
  bool decs_ok = false;
  std::string dec_error;

  bool classified = false;
  StructureClass sc{};
  std::string class_error;
  RecordStatus class_error_status = RecordStatus::Fail;

  std::array<ExprMat, 3> Phi_field;              // g * phi_a
  std::array<ExprMat, 3> psi_field, theta_field;  // empty when not expressible
  bool have_psi_field = false, have_theta_field = false;

  int npts() const { return static_cast<int>(pts.size()); }
  bool closed_family() const { return std::abs(sc.c) <= cfg.tol; }
};

void prepare_decompositions(RunState& st) {
  st.decs_ok = true;
  for (auto& ctx : st.ctxs) {
    try {
      st.decs.push_back(split_tangent(ctx, st.sc.c));
    } catch (const Error& e) {
      st.decs_ok = false;
      st.dec_error = e.what();
      st.decs.clear();
      return;
    }
  }
}

// ---------------------------------------------------------------- structure

void suite_structure(RunState& st, RunReport& rep, const StructureCheck& acm,
                     const StructureCheck& triple, const StructureCheck& qs) {
  Recorder rec(rep, "structure");
  const double tol = st.cfg.tol;
  const int n = st.npts();

  auto joined = [](const StructureCheck& c) {
    return c.failures.empty() ? std::string() : c.failures.front();
  };
  rec.add("almost_contact_metric",
          "phi^2 = -id + eta (x) xi, eta(xi) = 1, phi xi = 0, eta o phi = 0, "
          "g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y), eta = g(xi, .)",
          tol, acm.max_residual, n, joined(acm));
  rec.add("triple_relations",
          "phi_c = phi_a phi_b - eta_b (x) xi_a, xi_c = phi_a xi_b, eta_c = eta_a o phi_b "
          "and the sign-flipped partners, for even permutations (a,b,c)",
          tol, triple.max_residual, n, joined(triple));
  rec.add("quasi_sasakian",
          "N1_a = 0, d Phi_a = 0, and (nabla_X phi_a)Y = -g(nabla_X xi_a, phi_a Y) xi_a "
          "- eta_a(Y) phi_a nabla_X xi_a",
          tol, qs.max_residual, n, joined(qs));

  // Cartan class: equal across the three structures and across points.
  {
    int common = -1;
    bool stable = true, equal = true;
    for (const auto& p : st.pts)
      for (int a = 0; a < 3; ++a) {
        RankResult rr = cartan_class(st.M, a, p);
        if (!rr.stable) stable = false;
        if (common < 0) common = rr.rank;
        if (rr.rank != common) equal = false;
      }
    RecordStatus s = !stable ? RecordStatus::Unstable
                             : (equal ? RecordStatus::Pass : RecordStatus::Fail);
    rec.add_status("cartan_class_constant",
                   "the rank of the stacked system [eta_a; 2 d eta_a] is the same for "
                   "a = 1,2,3 and at every sampled point",
                   tol, equal ? 0.0 : 1.0, n, s,
                   "class = " + std::to_string(common) + (stable ? "" : " (unstable)"));
  }

  // Structure constant.
  try {
    CEstimate est = detect_c(st.M, st.pts, tol);
    rec.add("structure_constant", "[xi_a, xi_b] = c xi_c for even permutations, c constant",
            tol, est.max_residual, n, "c = " + fmt(est.c));
  } catch (const Error& e) {
    rec.add_status("structure_constant", "[xi_a, xi_b] = c xi_c for even permutations",
                   tol, 1.0, n, RecordStatus::Fail, e.what());
  }

  if (st.classified) {
    const bool parity_ok =
        (std::abs(st.sc.c) <= tol) ? (st.sc.rank % 4 == 1) : (st.sc.rank % 4 == 3);
    double decl_res = 0.0;
    if (st.M.declared_c) decl_res = std::abs(st.sc.c - *st.M.declared_c);
    rec.add_status("classification",
                   "the model classifies consistently: c = 0 forces rank = 1 mod 4, "
                   "c != 0 forces rank = 3 mod 4, and a declared c is reproduced",
                   tol, decl_res, n,
                   (parity_ok && decl_res <= tol) ? RecordStatus::Pass : RecordStatus::Fail,
                   std::string(to_string(st.sc.tag)) + ", rank " + std::to_string(st.sc.rank) +
                       ", c " + fmt(st.sc.c) + ", l " + std::to_string(st.sc.l) + ", m " +
                       std::to_string(st.sc.m));
  } else {
    rec.add_status("classification", "the model admits a consistent classification", tol, 1.0,
                   n, st.class_error_status, st.class_error);
  }

  // Parallel phi in the closed family.
  if (st.classified && st.closed_family()) {
    double r = 0.0;
    for (auto& ctx : st.ctxs)
      for (int a = 0; a < 3; ++a) acc(r, cov_deriv_endo(ctx, st.M.phi[a]).max_abs());
    rec.add("closed_family_parallel_phi",
            "c = 0 forces nabla phi_a = 0 (the structure is covariantly constant)", tol, r, n);
  } else {
    rec.na("closed_family_parallel_phi",
           "c = 0 forces nabla phi_a = 0 (the structure is covariantly constant)",
           "needs c = 0");
  }

  // Block behaviour of the splitting.
  if (!st.decs_ok) {
    rec.add_status("tangent_splitting", "the tangent space splits into V + E4l + E4m", tol,
                   1.0, n, RecordStatus::Fail, st.dec_error);
    return;
  }
  {
    bool lm_equal = true;
    double inv = 0.0, ker = 0.0;
    for (std::size_t k = 0; k < st.ctxs.size(); ++k) {
      const auto& dec = st.decs[k];
      if (dec.l != st.decs[0].l || dec.m != st.decs[0].m) lm_equal = false;
      auto& ctx = st.ctxs[k];
      PtVals v = pt_vals(ctx);
      for (int a = 0; a < 3; ++a) {
        if (dec.l > 0)
          acc(inv, ((Eigen::MatrixXd::Identity(dec.G.rows(), dec.G.cols()) - dec.P4l) *
                    v.F[a] * dec.E4l)
                       .cwiseAbs()
                       .maxCoeff());
        if (dec.m > 0)
          acc(inv, ((Eigen::MatrixXd::Identity(dec.G.rows(), dec.G.cols()) - dec.P4m) *
                    v.F[a] * dec.E4m)
                       .cwiseAbs()
                       .maxCoeff());
        if (dec.m > 0) {
          acc(ker, (2.0 * dec.deta[a].transpose() * dec.E4m).cwiseAbs().maxCoeff());
          acc(ker, (v.etav[a].transpose() * dec.E4m).cwiseAbs().maxCoeff());
        }
      }
    }
    rec.add_status("block_dimensions_constant",
                   "the splitting dimensions l and m agree at every sampled point", tol,
                   lm_equal ? 0.0 : 1.0, n,
                   lm_equal ? RecordStatus::Pass : RecordStatus::Fail,
                   "l = " + std::to_string(st.decs[0].l) + ", m = " +
                       std::to_string(st.decs[0].m));
    rec.add("block_invariance", "each phi_a maps E4l into E4l and E4m into E4m", 1e-8, inv, n);
    if (st.decs[0].m > 0)
      rec.add("e4m_characteristic",
              "every X in E4m satisfies eta_a(X) = 0 and i_X d eta_a = 0 for all three a",
              1e-8, ker, n);
    else
      rec.na("e4m_characteristic",
             "every X in E4m satisfies eta_a(X) = 0 and i_X d eta_a = 0 for all three a",
             "m = 0");
  }
}

// ----------------------------------------------------------- core identities

void suite_core(RunState& st, RunReport& rep) {
  Recorder rec(rep, "core_identities");
  const double tol = st.cfg.tol;
  const int n = st.npts();
  if (!st.decs_ok) {
    rec.precondition_fail(st.dec_error);
    return;
  }
  const double c = st.sc.c;
  const int d = st.M.dim();

  double r_reeb_h = 0, r_lie_fund = 0, r_pair = 0, r_flip = 0, r_shift = 0;
  double r_kill = 0, r_geo = 0, r_vert = 0, r_lie_deta = 0, r_lie_phi = 0, r_compat = 0;
  double r_brkt = 0, r_blocks = 0, r_olszak = 0, r_leaf = 0;
  const bool have_e4m = !st.M.e4m_fields.empty();
  const bool have_e4l = !st.M.e4l_fields.empty();

  for (std::size_t k = 0; k < st.ctxs.size(); ++k) {
    auto& ctx = st.ctxs[k];
    const auto& dec = st.decs[k];
    PtVals v = pt_vals(ctx);
    const Eigen::MatrixXd& H = dec.H;

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        acc(r_reeb_h, H.transpose() * dec.deta[a] * v.xiv[b]);

    for (const auto& perm : kEvenPerms) {
      const int a = perm[0], b = perm[1], g = perm[2];
      acc(r_lie_fund,
          (dec.deta[a] - 0.5 * lie_two_tensor(st.M.xi[b], st.Phi_field[g], ctx.jets))
              .cwiseAbs()
              .maxCoeff());
      acc(r_shift, H.transpose() * (v.F[b].transpose() * dec.deta[a] - dec.deta[g]) * H);
      acc(r_lie_deta,
          (lie_d_oneform(st.M.xi[a], st.M.eta[b], ctx.jets) - c * dec.deta[g])
              .cwiseAbs()
              .maxCoeff());
      acc(r_lie_phi,
          (lie_endo(st.M.xi[a], st.M.phi[b], ctx.jets) - c * dec.psi[g])
              .cwiseAbs()
              .maxCoeff());

      const Eigen::MatrixXd cd_b = cov_deriv_vector(ctx, st.M.xi[b]);
      const Eigen::MatrixXd cd_a = cov_deriv_vector(ctx, st.M.xi[a]);
      acc(r_vert,
          (cd_b.transpose() * v.xiv[a] - 0.5 * c * v.xiv[g]).cwiseAbs().maxCoeff());
      acc(r_vert,
          (cd_a.transpose() * v.xiv[b] + 0.5 * c * v.xiv[g]).cwiseAbs().maxCoeff());
    }

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a != b)
          acc(r_flip,
              H.transpose() * (v.F[b].transpose() * dec.deta[a] * v.F[b] + dec.deta[a]) * H);
        if (a < b) {
          const Eigen::MatrixXd Aa = H.transpose() * dec.deta[a] * v.F[a] * H;
          const Eigen::MatrixXd Ab = H.transpose() * dec.deta[b] * v.F[b] * H;
          acc(r_pair, Aa - Ab);
        }
        acc(r_compat,
            (lie_two_tensor(st.M.xi[a], st.Phi_field[b], ctx.jets) -
             v.G * lie_endo(st.M.xi[a], st.M.phi[b], ctx.jets))
                .cwiseAbs()
                .maxCoeff());
      }

    for (int a = 0; a < 3; ++a) {
      acc(r_kill, lie_two_tensor(st.M.xi[a], st.M.g, ctx.jets).cwiseAbs().maxCoeff());
      acc(r_geo,
          (cov_deriv_vector(ctx, st.M.xi[a]).transpose() * v.xiv[a]).cwiseAbs().maxCoeff());
    }

    if (have_e4m) {
      std::vector<const ExprVec*> horiz;
      for (const auto& f : st.M.e4l_fields) horiz.push_back(&f);
      for (const auto& f : st.M.e4m_fields) horiz.push_back(&f);
      for (const auto* X : horiz)
        for (const auto& Y : st.M.e4m_fields) {
          const Eigen::VectorXd br = lie_bracket(*X, Y, ctx.jets);
          for (int a = 0; a < 3; ++a) acc(r_brkt, std::abs(v.etav[a].dot(br)));
        }
    }
    if (have_e4l || have_e4m) {
      for (int a = 0; a < 3; ++a) {
        for (const auto& Y : st.M.e4l_fields)
          acc(r_blocks,
              (dec.P4m * lie_bracket(st.M.xi[a], Y, ctx.jets)).cwiseAbs().maxCoeff());
        for (const auto& Y : st.M.e4m_fields)
          acc(r_blocks, ((dec.PV + dec.P4l) * lie_bracket(st.M.xi[a], Y, ctx.jets))
                            .cwiseAbs()
                            .maxCoeff());
      }
    }

    // Covariant derivative of phi expanded through d Phi, the Nijenhuis
    // tensors and d eta.
    for (int a = 0; a < 3; ++a) {
      const Tensor3 covE = cov_deriv_endo(ctx, st.M.phi[a]);
      const Tensor3 T = d_twoform(st.Phi_field[a], ctx.jets);
      Tensor3 N1;
      Eigen::MatrixXd N2;
      nijenhuis_tensors(st.M, a, ctx.jets, &N1, &N2);
      const Eigen::MatrixXd& D = dec.deta[a];
      const Eigen::MatrixXd GF = v.G * v.F[a];
      const Eigen::MatrixXd FtD = v.F[a].transpose() * D;
      const Eigen::VectorXd& et = v.etav[a];
      for (int i = 0; i < d; ++i) {
        const Eigen::MatrixXd L = v.G * covE.m[i];
        const Eigen::MatrixXd A = v.F[a].transpose() * T.m[i] * v.F[a];
        Eigen::MatrixXd S1 = Eigen::MatrixXd::Zero(d, d);
        for (int l2 = 0; l2 < d; ++l2)
          if (GF(l2, i) != 0.0) S1 += GF(l2, i) * N1.m[l2];
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk) {
            const double rhs = 3.0 * A(j, kk) - 3.0 * T.m[i](j, kk) + S1(j, kk) +
                               N2(j, kk) * et(i) + 2.0 * FtD(j, i) * et(kk) -
                               2.0 * FtD(kk, i) * et(j);
            acc(r_olszak, std::abs(2.0 * L(kk, j) - rhs));
          }
      }
    }

    if (dec.m > 0) {
      std::vector<const ExprVec*> leaf;
      for (int a = 0; a < 3; ++a) leaf.push_back(&st.M.xi[a]);
      for (const auto& f : st.M.e4l_fields) leaf.push_back(&f);
      for (const auto* X : leaf)
        acc(r_leaf, (dec.E4m.transpose() * lie_two_tensor(*X, st.M.g, ctx.jets) * dec.E4m)
                        .cwiseAbs()
                        .maxCoeff());
    }
  }

  rec.add("deta_reeb_horizontal", "d eta_a(X, xi_b) = 0 for horizontal X and all a, b", tol,
          r_reeb_h, n);
  rec.add("deta_lie_fundamental",
          "d eta_a = (1/2) L_{xi_b} Phi_c for even permutations (a,b,c)", tol, r_lie_fund, n);
  rec.add("deta_phi_pair_agree",
          "d eta_a(X, phi_a Y) = d eta_b(X, phi_b Y) for horizontal X, Y and all a, b", tol,
          r_pair, n);
  rec.add("deta_phi_phi_flip",
          "d eta_a(phi_b X, phi_b Y) = -d eta_a(X, Y) for horizontal X, Y and a != b", tol,
          r_flip, n);
  rec.add("deta_phi_shift",
          "d eta_a(phi_b X, Y) = d eta_c(X, Y) for horizontal X, Y and even (a,b,c)", tol,
          r_shift, n);
  rec.add("reeb_killing", "L_{xi_a} g = 0 (each Reeb field is Killing)", tol, r_kill, n);
  rec.add("reeb_geodesic", "nabla_{xi_a} xi_a = 0 (Reeb integral curves are geodesics)", tol,
          r_geo, n);
  rec.add("vertical_covariant_bracket",
          "nabla_{xi_a} xi_b = (c/2) xi_c and nabla_{xi_b} xi_a = -(c/2) xi_c for even "
          "(a,b,c); the vertical distribution is totally geodesic",
          tol, r_vert, n);
  rec.add("lie_deta_cyclic", "L_{xi_a} d eta_b = c d eta_c for even permutations", tol,
          r_lie_deta, n);
  rec.add("lie_phi_cyclic", "L_{xi_a} phi_b = c psi_c for even permutations", tol, r_lie_phi,
          n);
  rec.add("lie_fundamental_compat",
          "(L_{xi_a} Phi_b)(X, Y) = g(X, (L_{xi_a} phi_b) Y) for all a, b", tol, r_compat, n);
  if (have_e4m)
    rec.add("bracket_e4m_horizontal",
            "[X, Y] is horizontal for horizontal X and Y a flat-block field", tol, r_brkt, n);
  else
    rec.na("bracket_e4m_horizontal",
           "[X, Y] is horizontal for horizontal X and Y a flat-block field",
           "model provides no closed-form flat-block fields");
  if (have_e4l || have_e4m)
    rec.add("reeb_bracket_blocks",
            "[xi_a, .] maps E4l fields into E4l + V and E4m fields into E4m", tol, r_blocks,
            n);
  else
    rec.na("reeb_bracket_blocks",
           "[xi_a, .] maps E4l fields into E4l + V and E4m fields into E4m",
           "model provides no closed-form block fields");
  rec.add("olszak_covariant_phi",
          "2 g((nabla_X phi_a)Y, Z) = 3 dPhi_a(X, phi_a Y, phi_a Z) - 3 dPhi_a(X, Y, Z) + "
          "g(N1_a(Y,Z), phi_a X) + N2_a(Y,Z) eta_a(X) + 2 deta_a(phi_a Y, X) eta_a(Z) - "
          "2 deta_a(phi_a Z, X) eta_a(Y)",
          tol, r_olszak, n);
  if (st.decs[0].m > 0)
    rec.add("leaf_metric_projectable",
            "L_X g vanishes on E4m arguments for X tangent to the V + E4l foliation", tol,
            r_leaf, n);
  else
    rec.na("leaf_metric_projectable",
           "L_X g vanishes on E4m arguments for X tangent to the V + E4l foliation", "m = 0");
}

// ------------------------------------------------------------------ rank4l3

void suite_rank4l3(RunState& st, RunReport& rep) {
  Recorder rec(rep, "rank4l3");
  const double tol = st.cfg.tol;
  const int n = st.npts();
  if (!st.classified) {
    rec.precondition_fail(st.class_error, st.class_error_status);
    return;
  }
  auto na_all = [&](const std::string& why) {
    for (const char* id :
         {"deta_psi_metric", "deta_fundamental_sphere_block", "reeb_gradient_psi",
          "cov_phi_structure", "cov_phi_reeb_cross", "curvature_e4m_pair",
          "curvature_e4m_mixed", "curvature_e4l_diag", "curvature_e4l_cross",
          "sectional_reeb_e4m", "sectional_reeb_e4l", "musical_deta_e4l",
          "musical_fundamental_e4m"})
      rec.na(id, "rank-(4l+3) family identity", why);
  };
  if (st.closed_family()) {
    na_all("needs c != 0");
    return;
  }
  if (!st.decs_ok) {
    rec.precondition_fail(st.dec_error);
    return;
  }
  const double c = st.sc.c;
  const int d = st.M.dim();
  const int l = st.decs[0].l, m = st.decs[0].m;

  double r_psi = 0, r_sphere = 0, r_grad = 0, r_cov = 0, r_cross = 0;
  double r_c1 = 0, r_c2 = 0, r_c3 = 0, r_c4 = 0, r_s_m = 0, r_s_l = 0;
  double r_mus_l = 0, r_mus_m = 0;
  std::string mus_err;

  for (std::size_t k = 0; k < st.ctxs.size(); ++k) {
    auto& ctx = st.ctxs[k];
    const auto& dec = st.decs[k];
    PtVals v = pt_vals(ctx);

    Eigen::MatrixXd S(d, 3 + 4 * l);
    S.leftCols(3) = dec.V;
    if (l > 0) S.rightCols(4 * l) = dec.E4l;

    for (int a = 0; a < 3; ++a) {
      acc(r_psi, (dec.deta[a] - 0.5 * c * v.G * dec.psi[a]).cwiseAbs().maxCoeff());
      acc(r_sphere, (S.transpose() * (dec.deta[a] - 0.5 * c * v.G * v.F[a]) * S)
                        .cwiseAbs()
                        .maxCoeff());

      const Eigen::MatrixXd cd = cov_deriv_vector(ctx, st.M.xi[a]);
      acc(r_grad, (cd.transpose() + 0.5 * c * dec.psi[a]).cwiseAbs().maxCoeff());

      const Tensor3 covE = cov_deriv_endo(ctx, st.M.phi[a]);
      const Eigen::MatrixXd psi2 = dec.psi[a] * dec.psi[a];
      for (int i = 0; i < d; ++i) {
        const Eigen::VectorXd u = psi2.col(i);
        const Eigen::MatrixXd rhs =
            0.5 * c * (u * v.etav[a].transpose() - v.xiv[a] * (v.G * u).transpose());
        acc(r_cov, (covE.m[i] - rhs).cwiseAbs().maxCoeff());
      }
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i)
          if (v.xiv[b](i) != 0.0) T += v.xiv[b](i) * covE.m[i];
        const Eigen::MatrixXd rhs =
            0.5 * c *
            (v.xiv[a] * v.etav[b].transpose() - v.xiv[b] * v.etav[a].transpose());
        acc(r_cross, (T - rhs).cwiseAbs().maxCoeff());
      }
    }

    const CurvaturePack& cp = ctx.curvature();
    for (int a = 0; a < 3; ++a) {
      for (int col = 0; col < 4 * m; ++col) {
        const Eigen::VectorXd X = dec.E4m.col(col);
        for (int col2 = col + 1; col2 < 4 * m; ++col2)
          acc(r_c1,
              riemann_apply(cp, X, dec.E4m.col(col2), v.xiv[a]).cwiseAbs().maxCoeff());
        for (int b = 0; b < 3; ++b)
          acc(r_c2, riemann_apply(cp, X, v.xiv[b], v.xiv[a]).cwiseAbs().maxCoeff());
        acc(r_s_m, std::abs(sectional(ctx, v.xiv[a], X)));
      }
      for (int col = 0; col < 4 * l; ++col) {
        const Eigen::VectorXd X = dec.E4l.col(col);
        acc(r_c3, (riemann_apply(cp, X, v.xiv[a], v.xiv[a]) - 0.25 * c * c * X)
                      .cwiseAbs()
                      .maxCoeff());
        for (int b = 0; b < 3; ++b)
          if (b != a)
            acc(r_c4, riemann_apply(cp, X, v.xiv[b], v.xiv[a]).cwiseAbs().maxCoeff());
        acc(r_s_l, std::abs(sectional(ctx, v.xiv[a], X) - 0.25 * c * c));
      }
    }

    try {
      MusicalResidual mr = musical_check(ctx, dec);
      if (mr.e4l_applicable) acc(r_mus_l, mr.res_e4l);
      if (mr.e4m_applicable) acc(r_mus_m, mr.res_e4m);
    } catch (const Error& e) {
      mus_err = e.what();
      acc(r_mus_l, 1.0);
      acc(r_mus_m, 1.0);
    }
  }

  rec.add("deta_psi_metric", "d eta_a(X, Y) = (c/2) g(X, psi_a Y) for all X, Y", tol, r_psi,
          n);
  rec.add("deta_fundamental_sphere_block",
          "d eta_a = (c/2) Phi_a restricted to V + E4l", tol, r_sphere, n);
  rec.add("reeb_gradient_psi", "nabla xi_a = -(c/2) psi_a", tol, r_grad, n);
  rec.add("cov_phi_structure",
          "(nabla_X phi_a)Y = (c/2)(eta_a(Y) psi_a^2 X - g(psi_a^2 X, Y) xi_a)", tol, r_cov,
          n);
  rec.add("cov_phi_reeb_cross",
          "(nabla_{xi_b} phi_a)X = (c/2)(eta_b(X) xi_a - eta_a(X) xi_b) for a != b", tol,
          r_cross, n);
  if (m > 0) {
    rec.add("curvature_e4m_pair", "R(X, Y) xi_a = 0 for X, Y in E4m", tol, r_c1, n);
    rec.add("curvature_e4m_mixed", "R(X, xi_b) xi_a = 0 for X in E4m", tol, r_c2, n);
    rec.add("sectional_reeb_e4m", "K(xi_a, X) = 0 for X in E4m", tol, r_s_m, n);
  } else {
    rec.na("curvature_e4m_pair", "R(X, Y) xi_a = 0 for X, Y in E4m", "m = 0");
    rec.na("curvature_e4m_mixed", "R(X, xi_b) xi_a = 0 for X in E4m", "m = 0");
    rec.na("sectional_reeb_e4m", "K(xi_a, X) = 0 for X in E4m", "m = 0");
  }
  if (l > 0) {
    rec.add("curvature_e4l_diag", "R(X, xi_a) xi_a = (c^2/4) X for X in E4l", tol, r_c3, n);
    rec.add("curvature_e4l_cross", "R(X, xi_b) xi_a = 0 for X in E4l, a != b", tol, r_c4, n);
    rec.add("sectional_reeb_e4l", "K(xi_a, X) = c^2/4 for unit X in E4l", tol, r_s_l, n);
  } else {
    rec.na("curvature_e4l_diag", "R(X, xi_a) xi_a = (c^2/4) X for X in E4l", "l = 0");
    rec.na("curvature_e4l_cross", "R(X, xi_b) xi_a = 0 for X in E4l, a != b", "l = 0");
    rec.na("sectional_reeb_e4l", "K(xi_a, X) = c^2/4 for unit X in E4l", "l = 0");
  }
  if (l > 0)
    rec.add("musical_deta_e4l",
            "phi_a X = -(d eta_b)^sharp (d eta_c)^flat X on E4l, even (a,b,c)", tol, r_mus_l,
            n, mus_err);
  else
    rec.na("musical_deta_e4l",
           "phi_a X = -(d eta_b)^sharp (d eta_c)^flat X on E4l, even (a,b,c)", "l = 0");
  if (m > 0)
    rec.add("musical_fundamental_e4m",
            "phi_a X = -(Phi_b)^sharp (Phi_c)^flat X on E4m, even (a,b,c)", tol, r_mus_m, n,
            mus_err);
  else
    rec.na("musical_fundamental_e4m",
           "phi_a X = -(Phi_b)^sharp (Phi_c)^flat X on E4m, even (a,b,c)", "m = 0");
}

// -------------------------------------------------------------- connections

void suite_connections(RunState& st, RunReport& rep) {
  Recorder rec(rep, "connections");
  const double tol = st.cfg.tol;
  const int n = st.npts();
  if (!st.classified) {
    rec.precondition_fail(st.class_error, st.class_error_status);
    return;
  }
  if (!st.decs_ok) {
    rec.precondition_fail(st.dec_error);
    return;
  }
  const double c = st.sc.c;
  const int d = st.M.dim();
  const int l = st.decs[0].l, m = st.decs[0].m;
  const AdaptedWorkspace ws = make_adapted_workspace(st.M);

  double r_xi = 0, r_eta = 0, r_g = 0, r_tor = 0, r_phi = 0;
  double r_bott_l = 0, r_bott_m = 0, r_bpsi = 0, r_theta = 0;
  double gbar_res = 0;
  RecordStatus gbar_status = RecordStatus::Pass;
  std::string gbar_msg;
  const double gbar_tol = std::max(tol, 1e-5);

  for (std::size_t k = 0; k < st.ctxs.size(); ++k) {
    auto& ctx = st.ctxs[k];
    const auto& dec = st.decs[k];
    PtVals v = pt_vals(ctx);
    const MetricPack& mp = ctx.metric();

    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < d; ++i)
        acc(r_xi, adapted_deriv(ctx, dec, i, ws.xi[a]).cwiseAbs().maxCoeff());

    std::vector<std::vector<Eigen::VectorXd>> W(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      W[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j)
        W[static_cast<std::size_t>(i)].push_back(
            adapted_deriv(ctx, dec, i, ws.coord[static_cast<std::size_t>(j)]));
    }

    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const double xv =
              ctx.jet(ws.coord[static_cast<std::size_t>(j)].etaY[a]).grad(i);
          acc(r_eta, std::abs(xv - v.etav[a].dot(W[static_cast<std::size_t>(i)]
                                                     [static_cast<std::size_t>(j)])));
        }

    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Eigen::VectorXd gw = v.G * W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        for (int kk = 0; kk < d; ++kk) {
          const Eigen::VectorXd gw2 =
              v.G * W[static_cast<std::size_t>(i)][static_cast<std::size_t>(kk)];
          acc(r_g, std::abs(mp.dg(i, j, kk) - gw(kk) - gw2(j)));
        }
      }

    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
        for (int a = 0; a < 3; ++a) rhs += 2.0 * dec.deta[a](i, j) * v.xiv[a];
        acc(r_tor, (W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                    W[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] - rhs)
                       .cwiseAbs()
                       .maxCoeff());
      }

    for (const auto& perm : kEvenPerms) {
      const int a = perm[0], b = perm[1], g = perm[2];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const Eigen::VectorXd lhs =
              adapted_deriv(ctx, dec, i,
                            ws.phicol[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)]) -
              v.F[a] * W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          Eigen::VectorXd hj = Eigen::VectorXd::Unit(d, j) - dec.PV.col(j);
          const Eigen::VectorXd rhs =
              -c * (v.etav[b](i) * (dec.psi[g] * hj) - v.etav[g](i) * (dec.psi[b] * hj));
          acc(r_phi, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }

    for (int a = 0; a < 3; ++a) {
      for (const auto& Y : st.M.e4l_fields)
        acc(r_bott_l,
            (dec.P4m * bott_derivative(ctx, dec, a, Y)).cwiseAbs().maxCoeff());
      for (const auto& Y : st.M.e4m_fields)
        acc(r_bott_m,
            (dec.P4l * bott_derivative(ctx, dec, a, Y)).cwiseAbs().maxCoeff());
    }

    if (st.have_psi_field && l > 0 && !st.M.e4l_fields.empty()) {
      for (const auto& perm : kEvenPerms) {
        const int a = perm[0], b = perm[1], g = perm[2];
        for (const auto& Y : st.M.e4l_fields) {
          const ExprVec psiY = expr_mat_vec(st.psi_field[static_cast<std::size_t>(b)], Y);
          const Eigen::VectorXd yv = eval_vector(Y, ctx.jets);
          const Eigen::VectorXd lhs = bott_derivative(ctx, dec, a, psiY) -
                                      dec.psi[b] * bott_derivative(ctx, dec, a, Y);
          acc(r_bpsi, (lhs - c * (dec.psi[g] * yv)).cwiseAbs().maxCoeff());
        }
      }
    }

    if (st.have_theta_field && m > 0) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          acc(r_theta,
              (lie_endo(st.M.xi[a], st.theta_field[static_cast<std::size_t>(b)], ctx.jets) *
               dec.E4m)
                  .cwiseAbs()
                  .maxCoeff());
    }

    // Levi-Civita connection of the deformed metric, by central differences
    // of its pointwise assembly.
    try {
      GbarResidual gr = gbar_connection_residual(st.M, ctx.p(), c, st.cfg.fd_step);
      const double worst = std::max(gr.res_h, gr.res_h2);
      if (worst > gbar_tol) {
        const double change =
            std::abs(gr.res_h - gr.res_h2) / std::max(std::abs(gr.res_h), 1e-300);
        if (change > 0.5) {
          gbar_status = RecordStatus::Unstable;
          gbar_msg = "halving the step changed the residual by more than 50%";
        } else if (gbar_status != RecordStatus::Unstable) {
          gbar_status = RecordStatus::Fail;
        }
      }
      acc(gbar_res, gr.res_h2);
    } catch (const Error& e) {
      gbar_status = RecordStatus::Fail;
      gbar_msg = e.what();
      acc(gbar_res, 1.0);
    }
  }

  rec.add("adapted_parallel_reeb", "the adapted connection satisfies nabla-tilde xi_a = 0",
          tol, r_xi, n);
  rec.add("adapted_parallel_eta", "the adapted connection satisfies nabla-tilde eta_a = 0",
          tol, r_eta, n);
  rec.add("adapted_parallel_metric", "the adapted connection satisfies nabla-tilde g = 0",
          tol, r_g, n);
  rec.add("adapted_torsion",
          "the adapted connection has torsion T(X,Y) = 2 sum_a d eta_a(X,Y) xi_a", tol, r_tor,
          n);
  rec.add("adapted_phi_formula",
          "(nabla-tilde_X phi_a)Y = -c(eta_b(X) psi_c(Y_H) - eta_c(X) psi_b(Y_H)) for even "
          "(a,b,c)",
          tol, r_phi, n);
  if (gbar_status == RecordStatus::Pass && gbar_res > gbar_tol)
    gbar_status = RecordStatus::Fail;
  rec.add_status("gbar_reeb_gradient",
                 "the deformed metric (g outside E4l x E4l, -d eta_1(., phi_1 .) on it) "
                 "satisfies nabla-bar_X xi_a = -psi_a X for horizontal X; its connection "
                 "is finite-differenced, tolerance is floored at 1e-5",
                 gbar_tol, gbar_res, n, gbar_status, gbar_msg);
  if (!st.M.e4l_fields.empty())
    rec.add("bott_preserves_e4l",
            "the E4m component of [xi_a, Y]_H vanishes for Y an E4l field", tol, r_bott_l, n);
  else
    rec.na("bott_preserves_e4l",
           "the E4m component of [xi_a, Y]_H vanishes for Y an E4l field",
           "model provides no closed-form E4l fields");
  if (!st.M.e4m_fields.empty())
    rec.add("bott_preserves_e4m",
            "the E4l component of [xi_a, Y]_H vanishes for Y an E4m field", tol, r_bott_m, n);
  else
    rec.na("bott_preserves_e4m",
           "the E4l component of [xi_a, Y]_H vanishes for Y an E4m field",
           "model provides no closed-form E4m fields");
  if (st.have_psi_field && l > 0 && !st.M.e4l_fields.empty())
    rec.add("bott_psi_cyclic",
            "([xi_a, psi_b .]_H - psi_b [xi_a, .]_H) = c psi_c on E4l fields, even (a,b,c)",
            tol, r_bpsi, n);
  else
    rec.na("bott_psi_cyclic",
           "([xi_a, psi_b .]_H - psi_b [xi_a, .]_H) = c psi_c on E4l fields, even (a,b,c)",
           l > 0 ? "model provides no closed-form E4l projection" : "l = 0");
  if (st.have_theta_field && m > 0)
    rec.add("theta_lie_invariant", "L_{xi_a} theta_b = 0 on E4m arguments", tol, r_theta, n);
  else
    rec.na("theta_lie_invariant", "L_{xi_a} theta_b = 0 on E4m arguments",
           m > 0 ? "model provides no closed-form E4m projection" : "m = 0");
}

// ---------------------------------------------------------------- curvature

void suite_curvature(RunState& st, RunReport& rep) {
  Recorder rec(rep, "curvature");
  const double tol = st.cfg.tol;
  const int n = st.npts();
  const int d = st.M.dim();

  double r_sym = 0, r_bianchi = 0, r_metric = 0, r_torsion = 0;
  double r_pair = 0, r_triple = 0, r_sect = 0, r_max = 0;
  const double c = st.classified ? st.sc.c : 0.0;
  const bool maximal = st.classified && st.sc.rank == d;

  for (auto& ctx : st.ctxs) {
    PtVals v = pt_vals(ctx);
    const CurvaturePack& cp = ctx.curvature();
    const Eigen::MatrixXd& G = v.G;

    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int kk = 0; kk < d; ++kk)
          for (int l2 = 0; l2 < d; ++l2) {
            double A = 0, Aji = 0, Alk = 0, Apair = 0;
            for (int s = 0; s < d; ++s) {
              A += G(s, l2) * cp.R.at(s, kk, i, j);
              Aji += G(s, l2) * cp.R.at(s, kk, j, i);
              Alk += G(s, kk) * cp.R.at(s, l2, i, j);
              Apair += G(s, j) * cp.R.at(s, i, kk, l2);
            }
            acc(r_sym, std::abs(A + Aji));
            acc(r_sym, std::abs(A + Alk));
            acc(r_sym, std::abs(A - Apair));
            acc(r_bianchi, std::abs(cp.R.at(l2, kk, i, j) + cp.R.at(l2, i, j, kk) +
                                    cp.R.at(l2, j, kk, i)));
          }

    acc(r_metric, cov_deriv_bilinear(ctx, st.M.g).max_abs());

    for (const auto& perm : kEvenPerms) {
      const int a = perm[0], b = perm[1];
      const Eigen::MatrixXd cd_b = cov_deriv_vector(ctx, st.M.xi[b]);
      const Eigen::MatrixXd cd_a = cov_deriv_vector(ctx, st.M.xi[a]);
      const Eigen::VectorXd br = lie_bracket(st.M.xi[a], st.M.xi[b], ctx.jets);
      acc(r_torsion,
          (cd_b.transpose() * v.xiv[a] - cd_a.transpose() * v.xiv[b] - br)
              .cwiseAbs()
              .maxCoeff());
    }

    if (st.classified)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          if (a == b) continue;
          acc(r_pair, (riemann_apply(cp, v.xiv[a], v.xiv[b], v.xiv[b]) -
                       0.25 * c * c * v.xiv[a])
                          .cwiseAbs()
                          .maxCoeff());
          acc(r_sect, std::abs(sectional(ctx, v.xiv[a], v.xiv[b]) - 0.25 * c * c));
          const int g = 3 - a - b;
          acc(r_triple,
              riemann_apply(cp, v.xiv[a], v.xiv[b], v.xiv[g]).cwiseAbs().maxCoeff());
        }

    if (maximal) {
      const double al2 = 0.25 * c * c;
      for (int a = 0; a < 3; ++a)
        for (int i = 0; i < d; ++i)
          for (int j = i + 1; j < d; ++j) {
            const Eigen::VectorXd lhs =
                riemann_apply(cp, Eigen::VectorXd::Unit(d, i), Eigen::VectorXd::Unit(d, j),
                              v.xiv[a]);
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
            rhs(i) += al2 * v.etav[a](j);
            rhs(j) -= al2 * v.etav[a](i);
            acc(r_max, (lhs - rhs).cwiseAbs().maxCoeff());
          }
    }
  }

  rec.add("riemann_symmetries",
          "the lowered curvature is antisymmetric in both index pairs and symmetric under "
          "pair exchange",
          1e-8, r_sym, n);
  rec.add("bianchi_first", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", 1e-8, r_bianchi, n);
  rec.add("metric_parallel", "nabla g = 0", 1e-9, r_metric, n);
  rec.add("torsion_free", "nabla_X Y - nabla_Y X = [X, Y] on the Reeb fields", 1e-9,
          r_torsion, n);
  if (st.classified) {
    rec.add("curvature_reeb_pair", "R(xi_a, xi_b) xi_b = (c^2/4) xi_a for a != b", tol,
            r_pair, n);
    rec.add("curvature_reeb_triple", "R(xi_a, xi_b) xi_c = 0 for distinct a, b, c", tol,
            r_triple, n);
    rec.add("sectional_reeb_pair", "K(xi_a, xi_b) = c^2/4 for a != b", tol, r_sect, n);
  } else {
    for (const char* id :
         {"curvature_reeb_pair", "curvature_reeb_triple", "sectional_reeb_pair"})
      rec.add_status(id, "Reeb curvature identity with the structure constant c", tol, 1.0,
                     n, st.class_error_status, st.class_error);
  }
  if (maximal)
    rec.add("curvature_reeb_maximal",
            "R(X, Y) xi_a = (c/2)^2 (eta_a(Y) X - eta_a(X) Y) at maximal rank", tol, r_max,
            n);
  else
    rec.na("curvature_reeb_maximal",
           "R(X, Y) xi_a = (c/2)^2 (eta_a(Y) X - eta_a(X) Y) at maximal rank",
           "rank below the dimension");
}

// -------------------------------------------------------------------- ricci

void suite_ricci(RunState& st, RunReport& rep) {
  Recorder rec(rep, "ricci");
  const double tol = st.cfg.tol;
  const int n = st.npts();
  if (!st.classified) {
    rec.precondition_fail(st.class_error, st.class_error_status);
    return;
  }
  if (!st.decs_ok) {
    rec.precondition_fail(st.dec_error);
    return;
  }
  const double c = st.sc.c;
  const int d = st.M.dim();
  const int l = st.decs[0].l, m = st.decs[0].m;
  const double lam = 0.5 * c * c * (2 * l + 1);

  double r_sphere = 0, r_flat = 0, r_scal = 0, r_eta = 0, r_einstein = 0, r_norm = 0;
  double max_ric = 0;

  for (std::size_t k = 0; k < st.ctxs.size(); ++k) {
    auto& ctx = st.ctxs[k];
    const auto& dec = st.decs[k];
    PtVals v = pt_vals(ctx);
    const CurvaturePack& cp = ctx.curvature();
    const MetricPack& mp = ctx.metric();

    Eigen::MatrixXd S(d, 3 + 4 * l);
    S.leftCols(3) = dec.V;
    if (l > 0) S.rightCols(4 * l) = dec.E4l;

    acc(r_sphere,
        (S.transpose() * (cp.ric - lam * v.G) * S).cwiseAbs().maxCoeff());
    if (m > 0) {
      acc(r_flat, (dec.E4m.transpose() * cp.ric * dec.E4m).cwiseAbs().maxCoeff());
      acc(r_flat, (S.transpose() * cp.ric * dec.E4m).cwiseAbs().maxCoeff());
    }
    acc(r_scal, std::abs(cp.scalar - lam * (4 * l + 3)));
    acc(max_ric, cp.ric.cwiseAbs().maxCoeff());

    if (l == 0 && !st.closed_family()) {
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(d, d);
      for (int a = 0; a < 3; ++a) rhs += 0.5 * c * c * v.etav[a] * v.etav[a].transpose();
      acc(r_eta, (cp.ric - rhs).cwiseAbs().maxCoeff());
    }
    if (st.sc.rank == d) {
      const int nn = (d - 3) / 4;
      acc(r_einstein,
          (cp.ric - 2.0 * 0.25 * c * c * (2 * nn + 1) * v.G).cwiseAbs().maxCoeff());
    }

    for (int a = 0; a < 3; ++a) {
      const Eigen::MatrixXd A = cov_deriv_vector(ctx, st.M.xi[a]).transpose();
      const double norm2 = (mp.Ginv * (A.transpose() * v.G * A)).trace();
      const double ric_xi = v.xiv[a].dot(cp.ric * v.xiv[a]);
      acc(r_norm, std::abs(ric_xi - norm2));
    }
  }

  rec.add("ricci_sphere_block",
          "Ric = (c^2/2)(2l+1) g on arguments from V + E4l", tol, r_sphere, n,
          "constant " + fmt(lam));
  if (m > 0)
    rec.add("ricci_flat_block", "Ric vanishes whenever one argument lies in E4m", tol,
            r_flat, n);
  else
    rec.na("ricci_flat_block", "Ric vanishes whenever one argument lies in E4m", "m = 0");
  rec.add("scalar_curvature_value", "scal = (c^2/2)(2l+1)(4l+3)", tol, r_scal, n,
          "expected " + fmt(lam * (4 * l + 3)));
  if (l == 0 && !st.closed_family())
    rec.add("ricci_eta_einstein",
            "Ric = (c^2/2) sum_a eta_a (x) eta_a at rank 3 (eta-Einstein, not Einstein)",
            tol, r_eta, n);
  else
    rec.na("ricci_eta_einstein",
           "Ric = (c^2/2) sum_a eta_a (x) eta_a at rank 3 (eta-Einstein, not Einstein)",
           "needs rank 3 with c != 0");
  if (st.sc.rank == d)
    rec.add("ricci_einstein_maximal",
            "Ric = 2 (c/2)^2 (2n+1) g at maximal rank (Einstein)", tol, r_einstein, n);
  else
    rec.na("ricci_einstein_maximal",
           "Ric = 2 (c/2)^2 (2n+1) g at maximal rank (Einstein)",
           "rank below the dimension");
  rec.add("ricci_reeb_norm", "Ric(xi_a, xi_a) = |nabla xi_a|^2", tol, r_norm, n);

  const bool ricci_flat = max_ric <= tol;
  const bool closed = st.sc.tag == StructureTag::ThreeCosymplectic;
  rec.add_status("ricci_flat_iff_closed",
                 "the model is Ricci-flat exactly when c = 0 (the closed family)", tol,
                 max_ric, n,
                 ricci_flat == closed ? RecordStatus::Pass : RecordStatus::Fail,
                 closed ? "closed family: Ric must vanish"
                        : "c != 0: Ric must not vanish (max |Ric| = " + fmt(max_ric) + ")");
}

// -------------------------------------------------------------------- pairs

void suite_pairs(RunState& st, RunReport& rep) {
  Recorder rec(rep, "pairs");
  const int n = st.npts();
  const double vol_tol = 1e-6, power_tol = 1e-9;
  const char* stmt_vol =
      "eta_b ^ (d eta_b)^(2l+1) ^ Theta_c^(2m) is a volume form for every pair (b, c)";
  const char* stmt_dp = "(d eta_b)^(2l+2) = 0";
  const char* stmt_tp = "Theta_c^(2m+1) = 0";
  if (!st.classified) {
    rec.precondition_fail(st.class_error, st.class_error_status);
    return;
  }
  if (st.closed_family()) {
    rec.na("pair_volume", stmt_vol, "needs c != 0");
    rec.na("pair_deta_power", stmt_dp, "needs c != 0");
    rec.na("pair_theta_power", stmt_tp, "needs c != 0");
    return;
  }
  if (!st.decs_ok) {
    rec.precondition_fail(st.dec_error);
    return;
  }

  double min_vol = std::numeric_limits<double>::infinity();
  double r_dp = 0, r_tp = 0;
  std::string sample;
  for (std::size_t k = 0; k < st.ctxs.size(); ++k) {
    const auto pairs = contact_symplectic_pairs(st.ctxs[k], st.decs[k]);
    for (const auto& pr : pairs) {
      min_vol = std::min(min_vol, std::abs(pr.volume));
      acc(r_dp, pr.deta_power);
      acc(r_tp, pr.theta_power);
      if (k == 0 && sample.size() < 160)
        sample += "(" + std::to_string(pr.beta) + "," + std::to_string(pr.gamma) +
                  "): " + fmt(pr.volume) + "  ";
    }
  }
  rec.add_status("pair_volume", stmt_vol, vol_tol, min_vol, n,
                 min_vol > vol_tol ? RecordStatus::Pass : RecordStatus::Fail,
                 "smallest top-form coefficient must exceed the tolerance; " + sample);
  rec.add("pair_deta_power", stmt_dp, power_tol, r_dp, n);
  rec.add("pair_theta_power", stmt_tp, power_tol, r_tp, n);
}

// --------------------------------------------------------------------- cone

void suite_cone(RunState& st, RunReport& rep) {
  Recorder rec(rep, "cone");
  const double tol = st.cfg.tol;
  if (!st.classified) {
    rec.precondition_fail(st.class_error, st.class_error_status);
    return;
  }
  const ConeModel C = cone_hermitian(st.M, 0.5 * st.sc.c);
  const auto pts = sample_points(C.dom, st.cfg.points, st.cfg.seed);
  const int n = static_cast<int>(pts.size());

  double r_q = 0, r_c = 0, r_b = 0, r_pair = 0, r_mix = 0;
  for (const auto& p : pts) {
    const ConeCheckResult res = cone_check(C, p);
    acc(r_q, res.quaternionic);
    acc(r_c, res.compatibility);
    acc(r_b, res.omega_blocks);
    acc(r_pair, res.domega_pair);
    acc(r_mix, res.domega_deta);
  }
  rec.add("cone_quaternionic",
          "the three product-space structures satisfy J_a J_b = J_c and J_a^2 = -id", 1e-9,
          r_q, n);
  rec.add("cone_compatibility", "each J_a is an isometry of g + dt^2", 1e-9, r_c, n);
  rec.add("cone_blocks",
          "Omega_a(X, Y) = Phi_a(X, Y) and Omega_a(X, d/dt) = -eta_a(X), Omega_a "
          "antisymmetric",
          1e-9, r_b, n);
  // The conformal identity needs d eta_a = (c/2) Phi_a on the whole tangent
  // space, which singles out the maximal-rank family; in the closed family
  // both sides vanish. On mixed-rank models the E4m block breaks it.
  if (st.sc.rank == st.M.dim() || st.sc.c == 0.0)
    rec.add("cone_kaehler_pair",
            "d Omega_a = 2 w ^ Omega_a with the 1-form w = -(c/2) dt", tol, r_pair, n);
  else
    rec.na("cone_kaehler_pair",
           "d Omega_a = 2 w ^ Omega_a with the 1-form w = -(c/2) dt",
           "holds only for the maximal-rank and closed families");
  rec.add("cone_mixed_deta", "d Omega_a(X, Y, d/dt) = -(2/3) d eta_a(X, Y)", tol, r_mix, n);
}

}  // namespace

RunReport run_verification(const ManifoldModel& M, const RunConfig& cfg) {
  if (cfg.points < 1) fail(ErrorKind::InvalidArgument, "need at least one sample point");
  if (!(cfg.tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  for (const auto& s : cfg.suites)
    if (!is_suite_name(s)) fail(ErrorKind::InvalidArgument, "unknown suite '" + s + "'");

  RunState st{M, cfg};
  RunReport rep;
  rep.model_name = M.name;
  rep.dimension = M.dim();
  rep.config = cfg;
  if (rep.config.suites.empty()) rep.config.suites = suite_names();

  st.pts = sample_points(M.dom, cfg.points, cfg.seed);

  const StructureCheck acm = check_almost_contact_metric(M, st.pts, cfg.tol);
  const StructureCheck triple = check_three_structure(M, st.pts, cfg.tol);
  const StructureCheck qs = check_quasi_sasakian(M, st.pts, cfg.tol);
  rep.self_check_ok = acm.ok && triple.ok && qs.ok;
  rep.self_check_residual =
      std::max(acm.max_residual, std::max(triple.max_residual, qs.max_residual));

  auto requested = [&](const char* name) {
    return std::find(rep.config.suites.begin(), rep.config.suites.end(), name) !=
           rep.config.suites.end();
  };

  if (!rep.self_check_ok) {
    std::string why = "structural self-check failed";
    for (const StructureCheck* ck : {&acm, &triple, &qs})
      if (!ck->ok && !ck->failures.empty()) {
        why += "; " + ck->failures.front();
        break;
      }
    for (const auto& s : rep.config.suites) Recorder(rep, s).precondition_fail(why);
    return rep;
  }

  try {
    st.sc = classify(M, st.pts, cfg.tol);
    st.classified = true;
    rep.classified = true;
    rep.tag = to_string(st.sc.tag);
    rep.rank = st.sc.rank;
    rep.c = st.sc.c;
    rep.l = st.sc.l;
    rep.m = st.sc.m;
  } catch (const Error& e) {
    st.class_error = e.what();
    st.class_error_status =
        e.kind() == ErrorKind::RankUnstable ? RecordStatus::Unstable : RecordStatus::Fail;
  }

  const bool need_points = requested("structure") || requested("core_identities") ||
                           requested("rank4l3") || requested("connections") ||
                           requested("curvature") || requested("ricci") ||
                           requested("pairs");
  if (need_points) {
    for (const auto& p : st.pts) st.ctxs.emplace_back(M, p);
    if (st.classified)
      prepare_decompositions(st);
    else
      st.dec_error = "classification unavailable: " + st.class_error;
  }

  for (int a = 0; a < 3; ++a) st.Phi_field[a] = fundamental_form_field(M, a);
  if (!M.proj_e4l.empty()) {
    const ExprMat support = st.classified && !st.closed_family()
                                ? expr_mat_add(vertical_projection_field(M), M.proj_e4l)
                                : M.proj_e4l;
    for (int a = 0; a < 3; ++a)
      st.psi_field[a] = expr_mat_mul(M.phi[a], support);
    st.have_psi_field = true;
  }
  if (!M.proj_e4m.empty()) {
    for (int a = 0; a < 3; ++a)
      st.theta_field[a] = expr_mat_mul(M.phi[a], M.proj_e4m);
    st.have_theta_field = true;
  }

  for (const auto& s : rep.config.suites) {
    if (s == "structure")
      suite_structure(st, rep, acm, triple, qs);
    else if (s == "core_identities")
      suite_core(st, rep);
    else if (s == "rank4l3")
      suite_rank4l3(st, rep);
    else if (s == "connections")
      suite_connections(st, rep);
    else if (s == "curvature")
      suite_curvature(st, rep);
    else if (s == "ricci")
      suite_ricci(st, rep);
    else if (s == "pairs")
      suite_pairs(st, rep);
    else if (s == "cone")
      suite_cone(st, rep);
  }
  return rep;
}

}  // namespace qs3
