#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qs3 {

enum class Slot { Up, Down };

// Pointwise dense tensor of rank <= 4 carrying its variance signature and the
// base point it was computed at. Rank-1/2 values convert to and from Eigen.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(std::vector<Slot> signature, int dim, Eigen::VectorXd base_point);

  static TensorValue from_vector(const Eigen::VectorXd& v, Slot s, Eigen::VectorXd base_point);
  static TensorValue from_matrix(const Eigen::MatrixXd& m, Slot s0, Slot s1,
                                 Eigen::VectorXd base_point);

  int rank() const { return static_cast<int>(sig_.size()); }
  int dim() const { return dim_; }
  const std::vector<Slot>& signature() const { return sig_; }
  const Eigen::VectorXd& base_point() const { return base_; }

  double& at(int i);
  double& at(int i, int j);
  double& at(int i, int j, int k);
  double& at(int i, int j, int k, int l);
  double at(int i) const;
  double at(int i, int j) const;
  double at(int i, int j, int k) const;
  double at(int i, int j, int k, int l) const;

  Eigen::VectorXd as_vector() const;
  Eigen::MatrixXd as_matrix() const;

  double max_abs() const;

 private:
  std::vector<Slot> sig_;
  int dim_ = 0;
  Eigen::VectorXd base_;
  std::vector<double> data_;
  int stride(int level) const;
};

// Alternating k-form stored on strictly increasing index tuples; component
// T(I) is the value on the coordinate vectors indexed by I. Wedge products
// use the alternation convention
//   (a ^ b)(v_1..v_{p+q}) = (p! q! / (p+q)!) * sum over (p,q)-shuffles,
// matching the exterior-derivative weights used throughout the engine
// (d of a 1-form carries 1/2, of a 2-form carries 1/3).
class AltForm {
 public:
  AltForm() = default;
  AltForm(int degree, int dim);

  static AltForm scalar_one(int dim);  // degree 0, multiplicative identity
  static AltForm from_covector(const Eigen::VectorXd& w);
  static AltForm from_two_form(const Eigen::MatrixXd& m);  // antisymmetric matrix

  int degree() const { return k_; }
  int dim() const { return d_; }

  double component(const std::vector<int>& increasing) const;
  double& component(const std::vector<int>& increasing);

  // Value on the columns of `vectors` (d x degree).
  double evaluate(const Eigen::MatrixXd& vectors) const;

  double max_abs() const;

 private:
  int k_ = 0, d_ = 0;
  std::vector<double> comps_;
  int index_of(const std::vector<int>& increasing) const;
  friend AltForm wedge(const AltForm&, const AltForm&);
};

AltForm wedge(const AltForm& a, const AltForm& b);
AltForm wedge_power(const AltForm& a, int k);  // k = 0 gives the identity 0-form

}  // namespace qs3
