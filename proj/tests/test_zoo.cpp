// The model zoo: construction invariants, self-verification, homothetic
// deformation algebra, fault injection, and the product-with-a-line check of
// the induced almost-hermitian triple.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qs3/contact.hpp"
#include "qs3/errors.hpp"
#include "qs3/geometry.hpp"
#include "qs3/zoo.hpp"

using namespace qs3;

TEST_CASE("quaternion basis relations hold exactly") {
  const auto& J = quaternion_basis();
  const Eigen::Matrix4d I = Eigen::Matrix4d::Identity();
  constexpr int perms[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  for (int a = 0; a < 3; ++a) {
    CHECK((J[a] * J[a] + I).cwiseAbs().maxCoeff() == 0.0);
    CHECK((J[a] + J[a].transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  for (const auto& p : perms)
    CHECK((J[p[0]] * J[p[1]] - J[p[2]]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constructors produce the advertised shapes") {
  const ManifoldModel F = flat_three_cosymplectic(1);
  CHECK(F.dim() == 7);
  CHECK(F.name == "flat(1)");
  REQUIRE(F.declared_c.has_value());
  CHECK(*F.declared_c == 0.0);
  CHECK(F.e4m_fields.size() == 4);
  CHECK(F.e4l_fields.empty());

  const ManifoldModel S = sphere_three_alpha(1, 2.0);
  CHECK(S.dim() == 7);
  REQUIRE(S.declared_c.has_value());
  CHECK(*S.declared_c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(S.e4l_fields.empty());
  CHECK(S.e4m_fields.empty());

  const ManifoldModel P = product_three_qs(0, 2, 1.0);
  CHECK(P.dim() == 11);
  CHECK(P.e4m_fields.size() == 8);
  REQUIRE(P.declared_c.has_value());
  CHECK(*P.declared_c == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS((void)flat_three_cosymplectic(-1), Error);
  CHECK_THROWS_AS((void)sphere_three_alpha(1, 0.0), Error);
  CHECK_THROWS_AS((void)sphere_three_alpha(-1, 1.0), Error);
}

TEST_CASE("reeb fields are unit and dual to eta") {
  for (const auto& M :
       {sphere_three_alpha(0, 1.5), product_three_qs(0, 1, 1.0), flat_three_cosymplectic(2)}) {
    for (const auto& p : sample_points(M.dom, 3, 3)) {
      JetCache cache(p);
      const Eigen::MatrixXd G = eval_matrix(M.g, cache);
      for (int a = 0; a < 3; ++a) {
        const Eigen::VectorXd xi = eval_vector(M.xi[a], cache);
        const Eigen::VectorXd eta = eval_vector(M.eta[a], cache);
        CHECK(xi.dot(G * xi) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eta.dot(xi) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((G * xi - eta).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("homothetic deformation composes and rescales the constant") {
  const ManifoldModel M = sphere_three_alpha(1, 1.0);
  const ManifoldModel D = homothetic_deform(M, 2.0);
  REQUIRE(D.declared_c.has_value());
  CHECK(*D.declared_c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(D.name == "deform(sphere(1,1),2)");

  const ManifoldModel DD = homothetic_deform(D, 1.5);
  const ManifoldModel E = homothetic_deform(M, 3.0);
  for (const auto& p : sample_points(M.dom, 2, 3)) {
    JetCache c1(p), c2(p);
    CHECK((eval_matrix(DD.g, c1) - eval_matrix(E.g, c2)).cwiseAbs().maxCoeff() <= 1e-12);
    for (int a = 0; a < 3; ++a) {
      CHECK((eval_vector(DD.xi[a], c1) - eval_vector(E.xi[a], c2)).cwiseAbs().maxCoeff() <=
            1e-12);
      CHECK((eval_vector(DD.eta[a], c1) - eval_vector(E.eta[a], c2)).cwiseAbs().maxCoeff() <=
            1e-12);
    }
  }

  // deforming the closed family keeps it closed
  const ManifoldModel FD = homothetic_deform(flat_three_cosymplectic(1), 1.7);
  REQUIRE(FD.declared_c.has_value());
  CHECK(*FD.declared_c == 0.0);

  CHECK_THROWS_AS((void)homothetic_deform(M, 0.0), Error);
}

TEST_CASE("perturbation shifts exactly one component and skips re-verification") {
  const ManifoldModel M = product_three_qs(0, 1, 1.0);
  const ManifoldModel P = perturb_component(M, "g", 0, 3, 4, 1e-3);
  const auto pts = sample_points(M.dom, 1, 5);
  JetCache c1(pts[0]), c2(pts[0]);
  const Eigen::MatrixXd dG = eval_matrix(P.g, c1) - eval_matrix(M.g, c2);
  CHECK(dG(3, 4) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(std::abs(dG.cwiseAbs().sum() - 1e-3) <= 1e-12);

  CHECK_FALSE(check_almost_contact_metric(P, pts, 1e-8).ok);

  CHECK_THROWS_AS((void)perturb_component(M, "spin", 0, 0, 0, 1e-3), Error);
  CHECK_THROWS_AS((void)perturb_component(M, "phi", 3, 0, 0, 1e-3), Error);
  CHECK_THROWS_AS((void)perturb_component(M, "phi", 0, 99, 0, 1e-3), Error);

  // verification rejects the broken structure when asked for explicitly
  CHECK_THROWS_AS(verify_model(P, true), Error);
}

TEST_CASE("flat hyperkahler block data") {
  const HyperkahlerBlock B = flat_hyperkahler(2);
  CHECK(B.m == 2);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(8);
  JetCache cache(p);
  constexpr int perms[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  std::array<Eigen::MatrixXd, 3> J;
  for (int a = 0; a < 3; ++a) J[a] = eval_matrix(B.J[a], cache);
  for (const auto& perm : perms)
    CHECK((J[perm[0]] * J[perm[1]] - J[perm[2]]).cwiseAbs().maxCoeff() == 0.0);
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd K = eval_matrix(B.kaehler[a], cache);
    CHECK((K + K.transpose()).cwiseAbs().maxCoeff() == 0.0);  // 2-forms
    CHECK((K - J[a]).cwiseAbs().maxCoeff() == 0.0);           // flat metric: Omega = J
  }
  CHECK_THROWS_AS((void)flat_hyperkahler(0), Error);
}

TEST_CASE("product with a line carries a compatible hermitian triple") {
  const ManifoldModel M = sphere_three_alpha(0, 1.0);
  const ConeModel C = cone_hermitian(M, 1.0);  // alpha = c/2 = 1
  CHECK(C.dim() == 4);
  for (const auto& p : sample_points(C.dom, 6, 7)) {
    const ConeCheckResult r = cone_check(C, p);
    CHECK(r.quaternionic <= 1e-12);
    CHECK(r.compatibility <= 1e-12);
    CHECK(r.omega_blocks <= 1e-12);
    CHECK(r.domega_pair <= 1e-8);
    CHECK(r.domega_deta <= 1e-8);
  }

  // the pairing identity is sensitive to the 1-form scale
  const ConeModel wrong = cone_hermitian(M, 0.3);
  double worst = 0.0;
  for (const auto& p : sample_points(wrong.dom, 4, 7))
    worst = std::max(worst, cone_check(wrong, p).domega_pair);
  CHECK(worst > 1e-3);

  // the closed family induces a genuinely product-like (closed) triple
  const ConeModel F = cone_hermitian(flat_three_cosymplectic(1), 0.0);
  for (const auto& p : sample_points(F.dom, 3, 7)) {
    const ConeCheckResult r = cone_check(F, p);
    CHECK(r.quaternionic <= 1e-12);
    CHECK(r.domega_pair <= 1e-12);
    CHECK(r.domega_deta <= 1e-12);
  }
}
