#include "qs3/contact.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "qs3/errors.hpp"
#include "qs3/jet.hpp"

namespace qs3 {

void StructureCheck::record(const std::string& what, double residual, double tol) {
  max_residual = std::max(max_residual, residual);
  if (!(residual <= tol)) {  // catches NaN too
    ok = false;
    std::ostringstream os;
    os << what << " residual " << residual << " > " << tol;
    failures.push_back(os.str());
  }
}

namespace {

struct PointTensors {
  Eigen::MatrixXd G;
  std::array<Eigen::MatrixXd, 3> phi;
  std::array<Eigen::VectorXd, 3> xi, eta;
};

PointTensors tensors_at(const ManifoldModel& M, JetCache& c) {
  PointTensors t;
  t.G = eval_matrix(M.g, c);
  for (int a = 0; a < 3; ++a) {
    t.phi[a] = eval_matrix(M.phi[a], c);
    t.xi[a] = eval_vector(M.xi[a], c);
    t.eta[a] = eval_vector(M.eta[a], c);
  }
  return t;
}

constexpr int kEvenPerms[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};

template <typename Derived>
double inf_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

StructureCheck check_almost_contact_metric(const ManifoldModel& M,
                                           const std::vector<Eigen::VectorXd>& pts, double tol) {
  StructureCheck out;
  const int d = M.dim();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  for (const auto& p : pts) {
    JetCache c(p);
    PointTensors t = tensors_at(M, c);
    for (int a = 0; a < 3; ++a) {
      const auto& F = t.phi[a];
      const auto& xi = t.xi[a];
      const auto& eta = t.eta[a];
      std::string tag = "phi_" + std::to_string(a + 1);
      out.record(tag + "^2 = -Id + eta (x) xi", inf_norm(F * F + I - xi * eta.transpose()), tol);
      out.record("eta_" + std::to_string(a + 1) + "(xi) = 1", std::abs(eta.dot(xi) - 1.0), tol);
      out.record(tag + " xi = 0", inf_norm(Eigen::VectorXd(F * xi)), tol);
      out.record("eta_" + std::to_string(a + 1) + " o phi = 0",
                 inf_norm(Eigen::VectorXd(F.transpose() * eta)), tol);
      out.record("g(phi., phi.) = g - eta (x) eta",
                 inf_norm(F.transpose() * t.G * F - (t.G - eta * eta.transpose())), tol);
      out.record("eta_" + std::to_string(a + 1) + " = g(xi, .)",
                 inf_norm(Eigen::VectorXd(eta - t.G * xi)), tol);
    }
  }
  return out;
}

StructureCheck check_three_structure(const ManifoldModel& M,
                                     const std::vector<Eigen::VectorXd>& pts, double tol) {
  StructureCheck out;
  for (const auto& p : pts) {
    JetCache c(p);
    PointTensors t = tensors_at(M, c);
    for (const auto& perm : kEvenPerms) {
      const int a = perm[0], b = perm[1], g = perm[2];
      std::string abc = std::to_string(a + 1) + std::to_string(b + 1) + std::to_string(g + 1);
      out.record("phi composition (" + abc + ")",
                 inf_norm(t.phi[g] - (t.phi[a] * t.phi[b] - t.xi[a] * t.eta[b].transpose())), tol);
      out.record("phi anticommutation (" + abc + ")",
                 inf_norm(t.phi[g] + (t.phi[b] * t.phi[a] - t.xi[b] * t.eta[a].transpose())), tol);
      out.record("xi rotation (" + abc + ")",
                 inf_norm(Eigen::VectorXd(t.xi[g] - t.phi[a] * t.xi[b])), tol);
      out.record("xi rotation, reversed (" + abc + ")",
                 inf_norm(Eigen::VectorXd(t.xi[g] + t.phi[b] * t.xi[a])), tol);
      out.record("eta rotation (" + abc + ")",
                 inf_norm(Eigen::VectorXd(t.eta[g] - t.phi[b].transpose() * t.eta[a])), tol);
      out.record("eta rotation, reversed (" + abc + ")",
                 inf_norm(Eigen::VectorXd(t.eta[g] + t.phi[a].transpose() * t.eta[b])), tol);
    }
  }
  return out;
}

StructureCheck check_quasi_sasakian(const ManifoldModel& M,
                                    const std::vector<Eigen::VectorXd>& pts, double tol) {
  StructureCheck out;
  std::array<ExprMat, 3> Phi;
  for (int a = 0; a < 3; ++a) Phi[a] = fundamental_form_field(M, a);
  for (const auto& p : pts) {
    PointCtx ctx(M, p);
    const Eigen::MatrixXd G = ctx.metric().G;
    for (int a = 0; a < 3; ++a) {
      Tensor3 N1;
      nijenhuis_tensors(M, a, ctx.jets, &N1, nullptr);
      out.record("N^(1)_" + std::to_string(a + 1) + " = 0", N1.max_abs(), tol);
      out.record("d Phi_" + std::to_string(a + 1) + " = 0",
                 d_twoform(Phi[a], ctx.jets).max_abs(), tol);

      // (nabla_X phi)Y = -g(nabla_X xi, phi Y) xi - eta(Y) phi nabla_X xi,
      // the covariant-derivative form of the quasi-Sasakian condition.
      const Tensor3 dphi = cov_deriv_endo(ctx, M.phi[a]);
      const Eigen::MatrixXd dxi = cov_deriv_vector(ctx, M.xi[a]);
      const Eigen::MatrixXd F = eval_matrix(M.phi[a], ctx.jets);
      const Eigen::VectorXd xi = eval_vector(M.xi[a], ctx.jets);
      const Eigen::VectorXd eta = eval_vector(M.eta[a], ctx.jets);
      double worst = 0.0;
      for (int i = 0; i < M.dim(); ++i) {
        const Eigen::VectorXd w = dxi.row(i).transpose();  // nabla_i xi
        const Eigen::MatrixXd resid = dphi.m[i] + xi * (w.transpose() * G * F) +
                                      (F * w) * eta.transpose();
        worst = std::max(worst, inf_norm(resid));
      }
      out.record("(nabla phi_" + std::to_string(a + 1) + ") matches nabla xi form", worst, tol);
    }
  }
  return out;
}

RankResult cartan_class(const ManifoldModel& M, int a, const Eigen::VectorXd& p) {
  const int d = M.dim();
  JetCache c(p);
  Eigen::MatrixXd stacked(1 + d, d);
  stacked.row(0) = eval_vector(M.eta[a], c).transpose();
  stacked.bottomRows(d) = 2.0 * d_oneform(M.eta[a], c);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const Eigen::VectorXd s = svd.singularValues();
  RankResult r;
  r.sigma_max = s.size() ? s(0) : 0.0;
  if (r.sigma_max <= 0.0) return r;  // identically zero system: rank 0
  for (int i = 0; i < s.size(); ++i) {
    const double rel = s(i) / r.sigma_max;
    if (rel > kRankTol) ++r.rank;
    if (rel >= kRankBandLo && rel <= kRankBandHi) r.stable = false;
  }
  return r;
}

CEstimate detect_c(const ManifoldModel& M, const std::vector<Eigen::VectorXd>& pts, double tol) {
  CEstimate out;
  bool have = false;
  for (const auto& p : pts) {
    JetCache cache(p);
    const Eigen::MatrixXd G = eval_matrix(M.g, cache);
    for (const auto& perm : kEvenPerms) {
      const int a = perm[0], b = perm[1], g = perm[2];
      const Eigen::VectorXd br = lie_bracket(M.xi[a], M.xi[b], cache);
      const Eigen::VectorXd xg = eval_vector(M.xi[g], cache);
      const double denom = xg.dot(G * xg);
      if (denom <= 0.0) fail(ErrorKind::SingularMetric, "xi_" + std::to_string(g + 1) +
                                                            " has nonpositive g-norm in detect_c");
      const double est = br.dot(G * xg) / denom;
      const double resid = inf_norm(Eigen::VectorXd(br - est * xg));
      out.max_residual = std::max(out.max_residual, resid);
      if (resid > tol * std::max(1.0, std::abs(est)))
        fail(ErrorKind::InconsistentC,
             "[xi_" + std::to_string(a + 1) + ", xi_" + std::to_string(b + 1) +
                 "] is not parallel to xi_" + std::to_string(g + 1) + " (residual " +
                 std::to_string(resid) + ")");
      if (have && std::abs(est - out.c) > tol * std::max(1.0, std::abs(out.c)))
        fail(ErrorKind::InconsistentC, "structure constant varies across permutations/points: " +
                                           std::to_string(out.c) + " vs " + std::to_string(est));
      if (!have) {
        out.c = est;
        have = true;
      }
    }
  }
  if (M.declared_c && std::abs(*M.declared_c - out.c) > tol * std::max(1.0, std::abs(out.c)))
    fail(ErrorKind::InconsistentC, "detected structure constant " + std::to_string(out.c) +
                                       " differs from declared " + std::to_string(*M.declared_c));
  return out;
}

const char* to_string(StructureTag t) {
  switch (t) {
    case StructureTag::ThreeCosymplectic: return "3-cosymplectic";
    case StructureTag::ThreeSasakian: return "3-Sasakian";
    case StructureTag::ThreeAlphaSasakian: return "3-alpha-Sasakian";
    case StructureTag::ThreeQuasiSasakianProper: return "proper 3-quasi-Sasakian";
  }
  return "?";
}

StructureClass classify(const ManifoldModel& M, const std::vector<Eigen::VectorXd>& pts,
                        double tol) {
  if (pts.empty()) fail(ErrorKind::InvalidArgument, "classify: no sample points");
  const int d = M.dim();

  int rank = -1;
  for (const auto& p : pts)
    for (int a = 0; a < 3; ++a) {
      RankResult r = cartan_class(M, a, p);
      if (!r.stable)
        fail(ErrorKind::RankUnstable, "Cartan class of eta_" + std::to_string(a + 1) +
                                          " sits in the singular-value guard band");
      if (rank < 0) rank = r.rank;
      if (r.rank != rank)
        fail(ErrorKind::ClassificationContradiction,
             "Cartan class is not constant across structures/points: " + std::to_string(rank) +
                 " vs " + std::to_string(r.rank));
    }

  CEstimate ce = detect_c(M, pts, tol);

  StructureClass sc;
  sc.rank = rank;
  sc.c = ce.c;
  if (rank == 1) {
    if (std::abs(ce.c) > tol)
      fail(ErrorKind::ClassificationContradiction,
           "all eta_a closed but the Reeb brackets do not vanish (c = " + std::to_string(ce.c) +
               ")");
    // closed family: every d eta_a must vanish identically
    for (const auto& p : pts) {
      JetCache cache(p);
      for (int a = 0; a < 3; ++a)
        if (inf_norm(d_oneform(M.eta[a], cache)) > tol)
          fail(ErrorKind::ClassificationContradiction,
               "Cartan class 1 but d eta_" + std::to_string(a + 1) + " != 0");
    }
    sc.tag = StructureTag::ThreeCosymplectic;
    sc.l = 0;
    sc.m = (d - 3) / 4;
    return sc;
  }
  if (rank < 3 || (rank - 3) % 4 != 0)
    fail(ErrorKind::ClassificationContradiction,
         "Cartan class " + std::to_string(rank) + " is not 1 or of the form 4l+3");
  if (std::abs(ce.c) <= tol)
    fail(ErrorKind::ClassificationContradiction,
         "vanishing structure constant with non-closed eta (rank " + std::to_string(rank) + ")");
  sc.l = (rank - 3) / 4;
  sc.m = (d - rank) / 4;
  if (rank == d) {
    // maximal rank forces d eta_a = (c/2) Phi_a everywhere
    for (const auto& p : pts) {
      JetCache cache(p);
      const Eigen::MatrixXd G = eval_matrix(M.g, cache);
      for (int a = 0; a < 3; ++a) {
        const Eigen::MatrixXd F = eval_matrix(M.phi[a], cache);
        const double r = inf_norm(d_oneform(M.eta[a], cache) - 0.5 * ce.c * (G * F));
        if (r > tol * std::max(1.0, std::abs(ce.c)))
          fail(ErrorKind::ClassificationContradiction,
               "maximal Cartan class but d eta_" + std::to_string(a + 1) +
                   " != (c/2) Phi (residual " + std::to_string(r) + ")");
      }
    }
    sc.tag = std::abs(ce.c - 2.0) <= tol ? StructureTag::ThreeSasakian
                                         : StructureTag::ThreeAlphaSasakian;
  } else {
    sc.tag = StructureTag::ThreeQuasiSasakianProper;
  }
  return sc;
}

}  // namespace qs3
