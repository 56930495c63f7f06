#pragma once

#include <string>
#include <vector>

#include "qs3/geometry.hpp"
#include "qs3/model.hpp"

namespace qs3 {

// Result of a pointwise structural check over a batch of sample points.
struct StructureCheck {
  bool ok = true;
  double max_residual = 0.0;
  std::vector<std::string> failures;  // one line per violated identity

  void record(const std::string& what, double residual, double tol);
};

// Algebraic almost-contact-metric axioms for each of the three structures:
//   phi^2 = -Id + eta (x) xi,  eta(xi) = 1,  phi xi = 0,  eta o phi = 0,
//   g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y),  eta = g(xi, .)
StructureCheck check_almost_contact_metric(const ManifoldModel& M,
                                           const std::vector<Eigen::VectorXd>& pts, double tol);

// Quaternionic compatibility of the triple, for every even permutation
// (a, b, c):  phi_c = phi_a phi_b - eta_b (x) xi_a = -phi_b phi_a + eta_a (x) xi_b,
//             xi_c = phi_a xi_b = -phi_b xi_a,  eta_c = eta_a o phi_b = -eta_b o phi_a.
StructureCheck check_three_structure(const ManifoldModel& M,
                                     const std::vector<Eigen::VectorXd>& pts, double tol);

// Normality (N^(1)_a = 0) together with closedness of each fundamental 2-form.
StructureCheck check_quasi_sasakian(const ManifoldModel& M,
                                    const std::vector<Eigen::VectorXd>& pts, double tol);

// Pointwise rank of the stacked (1+d) x d system [eta_a; 2 d eta_a], computed
// by SVD. Singular values are compared against sigma_max: values above
// kRankTol count toward the rank; any value whose ratio lands inside
// [kRankBandLo, kRankBandHi] makes the rank call unreliable and is reported
// via stable = false.
struct RankResult {
  int rank = 0;
  double sigma_max = 0.0;
  bool stable = true;
};

inline constexpr double kRankTol = 1e-7;
inline constexpr double kRankBandLo = 1e-8;
inline constexpr double kRankBandHi = 1e-6;

RankResult cartan_class(const ManifoldModel& M, int a, const Eigen::VectorXd& p);

// Estimates the structure constant from [xi_a, xi_b] = c xi_c over all even
// permutations and sample points; throws InconsistentC when the bracket is not
// parallel to xi_c or the per-pair estimates disagree beyond tol. A declared
// value on the model is cross-checked as well.
struct CEstimate {
  double c = 0.0;
  double max_residual = 0.0;  // worst non-parallel / disagreement residual
};

CEstimate detect_c(const ManifoldModel& M, const std::vector<Eigen::VectorXd>& pts, double tol);

enum class StructureTag {
  ThreeCosymplectic,        // all eta_a closed, c = 0
  ThreeSasakian,            // c = 2, maximal rank
  ThreeAlphaSasakian,       // c = 2 alpha != 2, maximal rank
  ThreeQuasiSasakianProper  // 3 <= rank < dim
};

const char* to_string(StructureTag t);

struct StructureClass {
  StructureTag tag;
  int rank = 0;  // common Cartan class of the eta_a (1 or 4l+3)
  double c = 0.0;
  int l = 0, m = 0;  // rank = 4l+3 when rank > 1; dim = 4l+3+4m
};

// Full classification at the sample points. Requires the Cartan class to be
// the same for all three 1-forms and all points; mismatches, rank values
// other than 1 or 4l+3, or a rank/c combination that contradicts the class
// raise ClassificationContradiction. Rank instability raises RankUnstable.
StructureClass classify(const ManifoldModel& M, const std::vector<Eigen::VectorXd>& pts,
                        double tol);

}  // namespace qs3
