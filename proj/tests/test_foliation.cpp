// Tangent splitting, the deformed metric and its finite-differenced
// connection, the adapted connection workspace, musical isomorphisms, and
// contact-symplectic pairs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qs3/errors.hpp"
#include "qs3/foliation.hpp"
#include "qs3/zoo.hpp"

using namespace qs3;

TEST_CASE("tangent splitting dimensions and projections") {
  struct Row {
    ManifoldModel M;
    double c;
    int l, m;
  };
  const Row rows[] = {{sphere_three_alpha(1, 1.0), 2.0, 1, 0},
                      {product_three_qs(0, 1, 1.0), 2.0, 0, 1},
                      {flat_three_cosymplectic(1), 0.0, 0, 1}};
  for (const auto& row : rows) {
    const auto pts = sample_points(row.M.dom, 3, 19);
    for (const auto& p : pts) {
      PointCtx ctx(row.M, p);
      const FrameDecomposition dec = split_tangent(ctx, row.c);
      const int d = row.M.dim();
      CHECK(dec.l == row.l);
      CHECK(dec.m == row.m);
      CHECK(dec.E4l.cols() == 4 * row.l);
      CHECK(dec.E4m.cols() == 4 * row.m);

      // the three projections resolve the identity and are g-orthogonal
      CHECK((dec.PV + dec.P4l + dec.P4m - Eigen::MatrixXd::Identity(d, d))
                .cwiseAbs()
                .maxCoeff() <= 1e-10);
      CHECK((dec.P4l * dec.P4m).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((dec.V.transpose() * dec.G * dec.V - Eigen::MatrixXd::Identity(3, 3))
                .cwiseAbs()
                .maxCoeff() <= 1e-10);
      CHECK((dec.H.transpose() * dec.G * dec.V).cwiseAbs().maxCoeff() <= 1e-10);

      // E4m kills every d eta_a
      if (row.m > 0)
        for (int a = 0; a < 3; ++a)
          CHECK((dec.deta[a] * dec.E4m).cwiseAbs().maxCoeff() <= 1e-9);

      // phi = psi + theta with psi supported on the rank block
      for (int a = 0; a < 3; ++a) {
        if (row.m > 0)
          CHECK((dec.psi[a] * dec.E4m).cwiseAbs().maxCoeff() <= 1e-10);
        if (row.c != 0.0)
          CHECK((dec.theta[a] * dec.V).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }
}

TEST_CASE("closed-family splitting cuts psi down to the E4l block") {
  const ManifoldModel M = flat_three_cosymplectic(1);
  const auto pts = sample_points(M.dom, 2, 23);
  PointCtx ctx(M, pts[0]);
  const FrameDecomposition dec = split_tangent(ctx, 0.0);
  // l = 0 here, so psi vanishes identically and theta carries all of phi
  for (int a = 0; a < 3; ++a) {
    CHECK(dec.psi[a].cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::MatrixXd F = eval_matrix(M.phi[a], ctx.jets);
    CHECK((dec.theta[a] - F).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("deformed metric blocks") {
  // Maximal rank with c = 2: the deformation reproduces g itself.
  const ManifoldModel S = sphere_three_alpha(1, 1.0);
  for (const auto& p : sample_points(S.dom, 2, 29)) {
    PointCtx ctx(S, p);
    CHECK((gbar_matrix(S, p, 2.0) - ctx.metric().G).cwiseAbs().maxCoeff() <= 1e-9);
  }

  // Mixed product with c = 1: gbar = g/2 on E4l x E4l and g elsewhere.
  const ManifoldModel P = product_three_qs(1, 1, 2.0);
  const auto pts = sample_points(P.dom, 1, 31);
  PointCtx ctx(P, pts[0]);
  const FrameDecomposition dec = split_tangent(ctx, 1.0);
  REQUIRE(dec.l == 1);
  REQUIRE(dec.m == 1);
  const Eigen::MatrixXd gbar = gbar_matrix(P, pts[0], 1.0);
  const Eigen::MatrixXd int_e4l = dec.E4l.transpose() * gbar * dec.E4l;
  CHECK((int_e4l - 0.5 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
  const Eigen::MatrixXd int_e4m = dec.E4m.transpose() * gbar * dec.E4m;
  CHECK((int_e4m - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((dec.V.transpose() * gbar * dec.V - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-9);
}

TEST_CASE("finite-differenced connection of the deformed metric") {
  const ManifoldModel M = product_three_qs(0, 1, 1.0);
  const auto pts = sample_points(M.dom, 3, 37);
  for (const auto& p : pts) {
    const GbarResidual r = gbar_connection_residual(M, p, 2.0, 1e-4);
    CHECK(r.res_h <= 1e-5);
    CHECK(r.res_h2 <= 1e-5);
  }

  // a stencil that cannot fit inside the chart is refused, not mangled
  Eigen::VectorXd edge = pts[0];
  edge(0) = M.dom.hi(0) - 1e-10;
  if (M.dom.admissible(edge)) {
    try {
      (void)gbar_connection_residual(M, edge, 2.0, 1e-4);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FDUnstable);
    }
  }
}

TEST_CASE("adapted differentiation is flat-model differentiation when c = 0") {
  const ManifoldModel M = flat_three_cosymplectic(1);
  const auto pts = sample_points(M.dom, 2, 41);
  PointCtx ctx(M, pts[0]);
  const FrameDecomposition dec = split_tangent(ctx, 0.0);
  const AdaptedWorkspace ws = make_adapted_workspace(M);
  for (int i = 0; i < M.dim(); ++i)
    for (int j = 0; j < M.dim(); ++j)
      CHECK(adapted_deriv(ctx, dec, i, ws.coord[j]).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("bott derivative requires a horizontal field") {
  const ManifoldModel M = product_three_qs(0, 1, 1.0);
  const auto pts = sample_points(M.dom, 1, 43);
  PointCtx ctx(M, pts[0]);
  const FrameDecomposition dec = split_tangent(ctx, 2.0);
  CHECK_THROWS_AS((void)bott_derivative(ctx, dec, 0, M.xi[1]), Error);
  for (const auto& Y : M.e4m_fields)
    CHECK(bott_derivative(ctx, dec, 0, Y).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("musical isomorphisms reconstruct phi blockwise") {
  const ManifoldModel S = sphere_three_alpha(1, 1.0);
  for (const auto& p : sample_points(S.dom, 2, 47)) {
    PointCtx ctx(S, p);
    const FrameDecomposition dec = split_tangent(ctx, 2.0);
    const MusicalResidual r = musical_check(ctx, dec);
    CHECK(r.e4l_applicable);
    CHECK_FALSE(r.e4m_applicable);
    CHECK(r.res_e4l <= 1e-8);
  }

  const ManifoldModel P = product_three_qs(0, 1, 1.0);
  for (const auto& p : sample_points(P.dom, 2, 47)) {
    PointCtx ctx(P, p);
    const FrameDecomposition dec = split_tangent(ctx, 2.0);
    const MusicalResidual r = musical_check(ctx, dec);
    CHECK_FALSE(r.e4l_applicable);
    CHECK(r.e4m_applicable);
    CHECK(r.res_e4m <= 1e-8);
  }
}

TEST_CASE("contact-symplectic pairs on the mixed product") {
  const ManifoldModel M = product_three_qs(0, 1, 1.0);
  for (const auto& p : sample_points(M.dom, 3, 53)) {
    PointCtx ctx(M, p);
    const FrameDecomposition dec = split_tangent(ctx, 2.0);
    const auto pairs = contact_symplectic_pairs(ctx, dec);
    REQUIRE(pairs.size() == 9);
    for (const auto& pr : pairs) {
      CHECK(std::abs(pr.volume) > 1e-6);
      CHECK(pr.deta_power <= 1e-9);
      CHECK(pr.theta_power <= 1e-9);
    }
  }
}
