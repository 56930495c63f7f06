// Structure checks, Cartan class, structure-constant detection, and the
// classification of every zoo family, including the failure modes: corrupted
// tensors must be flagged and borderline ranks must refuse to classify.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qs3/contact.hpp"
#include "qs3/errors.hpp"
#include "qs3/zoo.hpp"

using namespace qs3;

TEST_CASE("structure checks pass on healthy models") {
  for (const auto& M : {flat_three_cosymplectic(1), sphere_three_alpha(1, 1.0),
                        product_three_qs(0, 1, 1.0)}) {
    const auto pts = sample_points(M.dom, 6, 3);
    CHECK(check_almost_contact_metric(M, pts, 1e-8).ok);
    CHECK(check_three_structure(M, pts, 1e-8).ok);
    CHECK(check_quasi_sasakian(M, pts, 1e-7).ok);
  }
}

TEST_CASE("corrupted tensors are flagged") {
  const ManifoldModel M = product_three_qs(0, 1, 1.0);
  const auto pts = sample_points(M.dom, 4, 3);

  const ManifoldModel bad_phi = perturb_component(M, "phi", 0, 1, 2, 1e-3);
  const StructureCheck c1 = check_three_structure(bad_phi, pts, 1e-8);
  CHECK_FALSE(c1.ok);
  CHECK(c1.max_residual > 1e-4);
  CHECK_FALSE(c1.failures.empty());

  const ManifoldModel bad_g = perturb_component(M, "g", 0, 4, 5, 1e-3);
  CHECK_FALSE(check_almost_contact_metric(bad_g, pts, 1e-8).ok);

  const ManifoldModel bad_eta = perturb_component(M, "eta", 1, 0, 0, 1e-3);
  CHECK_FALSE(check_almost_contact_metric(bad_eta, pts, 1e-8).ok);
}

TEST_CASE("cartan class of the zoo models") {
  struct Row {
    ManifoldModel M;
    int rank;
  };
  const Row rows[] = {{flat_three_cosymplectic(1), 1},
                      {sphere_three_alpha(1, 1.0), 7},
                      {product_three_qs(0, 1, 1.0), 3}};
  for (const auto& row : rows)
    for (const auto& p : sample_points(row.M.dom, 4, 5))
      for (int a = 0; a < 3; ++a) {
        const RankResult r = cartan_class(row.M, a, p);
        CHECK(r.stable);
        CHECK(r.rank == row.rank);
      }
}

TEST_CASE("structure constant detection") {
  const CEstimate flat = detect_c(flat_three_cosymplectic(1),
                                  sample_points(flat_three_cosymplectic(1).dom, 4, 7), 1e-8);
  CHECK(flat.c == doctest::Approx(0.0).epsilon(1e-12));

  const ManifoldModel s7half = sphere_three_alpha(1, 2.0);
  const CEstimate half = detect_c(s7half, sample_points(s7half.dom, 4, 7), 1e-8);
  CHECK(half.c == doctest::Approx(1.0).epsilon(1e-10));

  // a shifted Reeb field no longer closes the bracket relations
  const ManifoldModel bad = perturb_component(sphere_three_alpha(0, 1.0), "xi", 0, 1, 0, 1e-3);
  CHECK_THROWS_AS((void)detect_c(bad, sample_points(bad.dom, 4, 7), 1e-8), Error);
}

TEST_CASE("classification table") {
  struct Row {
    ManifoldModel M;
    StructureTag tag;
    int rank;
    double c;
    int l, m;
  };
  const Row rows[] = {
      {flat_three_cosymplectic(1), StructureTag::ThreeCosymplectic, 1, 0.0, 0, 1},
      {sphere_three_alpha(1, 1.0), StructureTag::ThreeSasakian, 7, 2.0, 1, 0},
      {sphere_three_alpha(1, 2.0), StructureTag::ThreeAlphaSasakian, 7, 1.0, 1, 0},
      {product_three_qs(0, 1, 1.0), StructureTag::ThreeQuasiSasakianProper, 3, 2.0, 0, 1},
      {product_three_qs(0, 2, 2.0), StructureTag::ThreeQuasiSasakianProper, 3, 1.0, 0, 2},
  };
  for (const auto& row : rows) {
    const StructureClass sc = classify(row.M, sample_points(row.M.dom, 4, 11), 1e-7);
    CHECK(sc.tag == row.tag);
    CHECK(sc.rank == row.rank);
    CHECK(sc.c == doctest::Approx(row.c).epsilon(1e-9));
    CHECK(sc.l == row.l);
    CHECK(sc.m == row.m);
  }
}

TEST_CASE("a borderline rank refuses to classify") {
  // A gradient-free 1e-7 tilt of eta_1 puts singular values of the stacked
  // pairing inside the guard band: the rank call must be reported unstable
  // rather than silently rounded.
  ManifoldModel M = flat_three_cosymplectic(1);
  M.eta[0][0] = M.eta[0][0] + Expr::constant(1e-7) * Expr::var(1);
  M.name = "flat(1)+tilt";

  const auto pts = sample_points(M.dom, 3, 13);
  bool saw_unstable = false;
  for (const auto& p : pts) saw_unstable = saw_unstable || !cartan_class(M, 0, p).stable;
  CHECK(saw_unstable);

  try {
    (void)classify(M, pts, 1e-7);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankUnstable);
  }
}

TEST_CASE("tags render as readable names") {
  CHECK(std::string(to_string(StructureTag::ThreeCosymplectic)) == "3-cosymplectic");
  CHECK(std::string(to_string(StructureTag::ThreeSasakian)) == "3-Sasakian");
  CHECK(std::string(to_string(StructureTag::ThreeAlphaSasakian)) == "3-alpha-Sasakian");
  CHECK(std::string(to_string(StructureTag::ThreeQuasiSasakianProper)) ==
        "proper 3-quasi-Sasakian");
}
