// Curvature and exterior calculus. Christoffel symbols and the curvature
// tensor are checked against finite-difference oracles built from plain
// metric values / first-order data, then against the closed-form geometry of
// round spheres where every constant is known.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qs3/errors.hpp"
#include "qs3/geometry.hpp"
#include "qs3/tensor.hpp"
#include "qs3/zoo.hpp"

using namespace qs3;

namespace {

Eigen::MatrixXd eval_metric(const ManifoldModel& M, const Eigen::VectorXd& p) {
  const int d = M.dim();
  Eigen::MatrixXd G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = eval_value(M.g[i][j], p);
  return G;
}

// Christoffel symbols from central differences of plain metric values.
Tensor3 fd_christoffel(const ManifoldModel& M, const Eigen::VectorXd& p, double h) {
  const int d = M.dim();
  std::vector<Eigen::MatrixXd> dg(d);
  for (int l = 0; l < d; ++l) {
    Eigen::VectorXd pp = p, pm = p;
    pp(l) += h;
    pm(l) -= h;
    dg[l] = (eval_metric(M, pp) - eval_metric(M, pm)) / (2.0 * h);
  }
  const Eigen::MatrixXd Ginv = eval_metric(M, p).inverse();
  Tensor3 out;
  out.m.assign(d, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd rhs(d);
      for (int l = 0; l < d; ++l) rhs(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Eigen::VectorXd gk = Ginv * rhs;
      for (int k = 0; k < d; ++k) out.m[k](i, j) = gk(k);
    }
  return out;
}

Tensor3 christoffel_at(const ManifoldModel& M, const Eigen::VectorXd& p) {
  PointCtx ctx(M, p);
  return ctx.gamma().gamma;
}

}  // namespace

TEST_CASE("christoffel symbols match the finite-difference oracle") {
  const ManifoldModel M = sphere_three_alpha(1, 1.3);
  for (const auto& p : sample_points(M.dom, 3, 5)) {
    const Tensor3 fd = fd_christoffel(M, p, 1e-5);
    const Tensor3 jet = christoffel_at(M, p);
    double worst = 0.0;
    for (int k = 0; k < M.dim(); ++k)
      worst = std::max(worst, (fd.m[k] - jet.m[k]).cwiseAbs().maxCoeff());
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("curvature matches finite differences of the connection") {
  const ManifoldModel M = sphere_three_alpha(0, 1.1);
  const int d = M.dim();
  const double h = 1e-4;
  for (const auto& p : sample_points(M.dom, 3, 17)) {
    PointCtx ctx(M, p);
    const CurvaturePack& cp = ctx.curvature();
    const Tensor3 g0 = christoffel_at(M, p);

    std::vector<Tensor3> dgamma(d);
    for (int mth = 0; mth < d; ++mth) {
      Eigen::VectorXd pp = p, pm = p;
      pp(mth) += h;
      pm(mth) -= h;
      const Tensor3 gp = christoffel_at(M, pp), gm = christoffel_at(M, pm);
      dgamma[mth].m.resize(d);
      for (int k = 0; k < d; ++k) dgamma[mth].m[k] = (gp.m[k] - gm.m[k]) / (2.0 * h);
    }

    double worst = 0.0;
    for (int l = 0; l < d; ++l)
      for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            double r = dgamma[i].m[l](j, k) - dgamma[j].m[l](i, k);
            for (int s = 0; s < d; ++s)
              r += g0.m[l](i, s) * g0.m[s](j, k) - g0.m[l](j, s) * g0.m[s](i, k);
            worst = std::max(worst, std::abs(r - cp.R.at(l, k, i, j)));
          }
    CHECK(worst <= 5e-6);
  }
}

TEST_CASE("round spheres have their textbook constants") {
  for (const double r : {1.0, 2.0}) {
    const ManifoldModel M = sphere_three_alpha(0, r);
    for (const auto& p : sample_points(M.dom, 4, 9)) {
      PointCtx ctx(M, p);
      const CurvaturePack& cp = ctx.curvature();
      const Eigen::MatrixXd& G = ctx.metric().G;
      const double k = 1.0 / (r * r);
      CHECK((cp.ric - 2.0 * k * G).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(cp.scalar == doctest::Approx(6.0 * k).epsilon(1e-10));
      CHECK(sectional(ctx, Eigen::VectorXd::Unit(3, 0), Eigen::VectorXd::Unit(3, 1)) ==
            doctest::Approx(k).epsilon(1e-9));
    }
  }
}

TEST_CASE("covariant derivative annihilates the metric and respects symmetry") {
  const ManifoldModel M = sphere_three_alpha(1, 1.0);
  for (const auto& p : sample_points(M.dom, 2, 21)) {
    PointCtx ctx(M, p);
    CHECK(cov_deriv_bilinear(ctx, M.g).max_abs() <= 1e-9);

    const CurvaturePack& cp = ctx.curvature();
    Eigen::VectorXd X = Eigen::VectorXd::Zero(7), Y = Eigen::VectorXd::Zero(7),
                    Z = Eigen::VectorXd::Zero(7);
    X(0) = 0.7; X(3) = -0.2;
    Y(1) = 1.1; Y(5) = 0.4;
    Z(2) = -0.9; Z(6) = 0.5;
    CHECK((riemann_apply(cp, X, Y, Z) + riemann_apply(cp, Y, X, Z)).cwiseAbs().maxCoeff() <=
          1e-10);
  }
}

TEST_CASE("exterior derivative conventions are pinned") {
  // d of w = x1 dx0 on the 3-box: (dw)(d0, d1) = -1/2 under the alternation
  // convention (dw)(X,Y) = (X w(Y) - Y w(X)) / 2.
  Eigen::VectorXd p(3);
  p << 0.2, -0.4, 0.6;
  JetCache cache(p);
  ExprVec w(3);
  w[0] = Expr::var(1);
  const Eigen::MatrixXd D = d_oneform(w, cache);
  CHECK(D(0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(D(1, 0) == doctest::Approx(0.5).epsilon(1e-15));

  // d of b = x2 (dx0 (x) dx1 - dx1 (x) dx0): (db)(d0, d1, d2) = 1/3.
  ExprMat b(3, ExprVec(3));
  b[0][1] = Expr::var(2);
  b[1][0] = Expr() - Expr::var(2);
  const Tensor3 T = d_twoform(b, cache);
  CHECK(T.m[0](1, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // d is nilpotent: dd f-gradient = 0 and dd eta = 0 on a curved model.
  ExprVec grad_f(3);
  grad_f[0] = 2.0 * Expr::var(0) * Expr::var(1);
  grad_f[1] = pow_int(Expr::var(0), 2);
  CHECK(d_oneform(grad_f, cache).cwiseAbs().maxCoeff() <= 1e-15);

  const ManifoldModel M = sphere_three_alpha(1, 1.0);
  for (const auto& q : sample_points(M.dom, 2, 33)) {
    JetCache c2(q);
    CHECK(dd_oneform(M.eta[0], c2).max_abs() <= 1e-10);
  }
}

TEST_CASE("lie derivatives and brackets have the expected coordinate values") {
  Eigen::VectorXd p(2);
  p << 0.3, -0.8;
  JetCache cache(p);

  ExprVec X(2), Y(2);
  X[0] = Expr::var(1);  // X = x1 d0
  Y[1] = Expr::rational(1, 1);
  const Eigen::VectorXd br = lie_bracket(X, Y, cache);  // [x1 d0, d1] = -d0
  CHECK(br(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(br(1) == doctest::Approx(0.0).epsilon(1e-15));

  // dilation field X = x0 d0 on the flat metric: (L_X delta)(0,0) = 2
  ExprMat flat(2, ExprVec(2));
  flat[0][0] = Expr::rational(1, 1);
  flat[1][1] = Expr::rational(1, 1);
  ExprVec dil(2);
  dil[0] = Expr::var(0);
  const Eigen::MatrixXd L = lie_two_tensor(dil, flat, cache);
  CHECK(L(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(L(1, 1) == doctest::Approx(0.0).epsilon(1e-15));

  // rotation field is Killing for the flat metric
  ExprVec rot(2);
  rot[0] = Expr() - Expr::var(1);
  rot[1] = Expr::var(0);
  CHECK(lie_two_tensor(rot, flat, cache).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("gram-schmidt produces a g-orthonormal horizontal frame") {
  const ManifoldModel M = sphere_three_alpha(1, 2.0);
  const auto pts = sample_points(M.dom, 2, 13);
  PointCtx ctx(M, pts[0]);
  const Eigen::MatrixXd& G = ctx.metric().G;
  const Eigen::MatrixXd H = gram_schmidt(Eigen::MatrixXd::Identity(7, 7), G);
  CHECK(H.cols() == 7);
  CHECK((H.transpose() * G * H - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() <=
        1e-12);

  Eigen::MatrixXd rank_deficient(7, 2);
  rank_deficient.col(0) = Eigen::VectorXd::Unit(7, 0);
  rank_deficient.col(1) = 2.0 * Eigen::VectorXd::Unit(7, 0);
  CHECK(gram_schmidt(rank_deficient, G).cols() == 1);
}

TEST_CASE("degenerate planes are rejected by sectional curvature") {
  const ManifoldModel M = sphere_three_alpha(0, 1.0);
  const auto pts = sample_points(M.dom, 1, 2);
  PointCtx ctx(M, pts[0]);
  Eigen::VectorXd X = Eigen::VectorXd::Unit(3, 0);
  CHECK_THROWS_AS((void)sectional(ctx, X, (2.0 * X).eval()), Error);
}

TEST_CASE("alternating forms wedge with the shuffle normalization") {
  Eigen::VectorXd a(3), b(3);
  a << 1.0, 0.0, 0.0;
  b << 0.0, 1.0, 0.0;
  const AltForm fa = AltForm::from_covector(a), fb = AltForm::from_covector(b);
  const AltForm ab = wedge(fa, fb), ba = wedge(fb, fa);
  CHECK(ab.component({0, 1}) == doctest::Approx(-ba.component({0, 1})).epsilon(1e-15));
  CHECK(wedge_power(fa, 2).max_abs() <= 1e-15);

  // eta ^ d eta is a volume form on the 3-sphere
  const ManifoldModel M = sphere_three_alpha(0, 1.0);
  const auto pts = sample_points(M.dom, 1, 4);
  JetCache cache(pts[0]);
  const AltForm eta = AltForm::from_covector(eval_vector(M.eta[0], cache));
  const Eigen::MatrixXd D = d_oneform(M.eta[0], cache);
  const AltForm vol = wedge(eta, AltForm::from_two_form(0.5 * (D - D.transpose().eval())));
  CHECK(vol.degree() == 3);
  CHECK(vol.max_abs() > 1e-3);
}
