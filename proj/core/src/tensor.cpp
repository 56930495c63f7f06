#include "qs3/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qs3/errors.hpp"

namespace qs3 {

TensorValue::TensorValue(std::vector<Slot> signature, int dim, Eigen::VectorXd base_point)
    : sig_(std::move(signature)), dim_(dim), base_(std::move(base_point)) {
  if (dim_ <= 0) fail(ErrorKind::InvalidArgument, "tensor dimension must be positive");
  if (sig_.empty() || sig_.size() > 4)
    fail(ErrorKind::InvalidArgument, "tensor rank must be between 1 and 4");
  std::size_t n = 1;
  for (std::size_t r = 0; r < sig_.size(); ++r) n *= dim_;
  data_.assign(n, 0.0);
}

TensorValue TensorValue::from_vector(const Eigen::VectorXd& v, Slot s, Eigen::VectorXd base_point) {
  TensorValue t({s}, static_cast<int>(v.size()), std::move(base_point));
  for (int i = 0; i < v.size(); ++i) t.at(i) = v(i);
  return t;
}

TensorValue TensorValue::from_matrix(const Eigen::MatrixXd& m, Slot s0, Slot s1,
                                     Eigen::VectorXd base_point) {
  TensorValue t({s0, s1}, static_cast<int>(m.rows()), std::move(base_point));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t.at(i, j) = m(i, j);
  return t;
}

int TensorValue::stride(int level) const {
  int s = 1;
  for (int r = level + 1; r < rank(); ++r) s *= dim_;
  return s;
}

double& TensorValue::at(int i) { return data_[i]; }
double& TensorValue::at(int i, int j) { return data_[i * dim_ + j]; }
double& TensorValue::at(int i, int j, int k) { return data_[(i * dim_ + j) * dim_ + k]; }
double& TensorValue::at(int i, int j, int k, int l) {
  return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
}
double TensorValue::at(int i) const { return data_[i]; }
double TensorValue::at(int i, int j) const { return data_[i * dim_ + j]; }
double TensorValue::at(int i, int j, int k) const { return data_[(i * dim_ + j) * dim_ + k]; }
double TensorValue::at(int i, int j, int k, int l) const {
  return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
}

Eigen::VectorXd TensorValue::as_vector() const {
  if (rank() != 1) fail(ErrorKind::InvalidArgument, "tensor is not rank 1");
  Eigen::VectorXd v(dim_);
  for (int i = 0; i < dim_; ++i) v(i) = at(i);
  return v;
}

Eigen::MatrixXd TensorValue::as_matrix() const {
  if (rank() != 2) fail(ErrorKind::InvalidArgument, "tensor is not rank 2");
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = at(i, j);
  return m;
}

double TensorValue::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Lexicographic rank of a strictly increasing tuple among all such tuples.
int tuple_rank(const std::vector<int>& t, int d) {
  const int k = static_cast<int>(t.size());
  long long r = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < t[i]; ++v) r += binom(d - 1 - v, k - 1 - i);
    prev = t[i];
  }
  return static_cast<int>(r);
}

bool first_tuple(std::vector<int>& t, int k) {
  t.resize(k);
  std::iota(t.begin(), t.end(), 0);
  return true;
}

bool next_tuple(std::vector<int>& t, int d) {
  const int k = static_cast<int>(t.size());
  for (int i = k - 1; i >= 0; --i) {
    if (t[i] < d - k + i) {
      ++t[i];
      for (int j = i + 1; j < k; ++j) t[j] = t[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

AltForm::AltForm(int degree, int dim) : k_(degree), d_(dim) {
  if (dim <= 0) fail(ErrorKind::InvalidArgument, "form dimension must be positive");
  if (degree < 0 || degree > dim) fail(ErrorKind::InvalidArgument, "form degree out of range");
  comps_.assign(static_cast<std::size_t>(binom(dim, degree)), 0.0);
}

AltForm AltForm::scalar_one(int dim) {
  AltForm f(0, dim);
  f.comps_[0] = 1.0;
  return f;
}

AltForm AltForm::from_covector(const Eigen::VectorXd& w) {
  AltForm f(1, static_cast<int>(w.size()));
  for (int i = 0; i < w.size(); ++i) f.comps_[i] = w(i);
  return f;
}

AltForm AltForm::from_two_form(const Eigen::MatrixXd& m) {
  AltForm f(2, static_cast<int>(m.rows()));
  std::vector<int> t;
  if (f.k_ <= f.d_ && first_tuple(t, 2)) {
    do {
      f.component(t) = m(t[0], t[1]);
    } while (next_tuple(t, f.d_));
  }
  return f;
}

int AltForm::index_of(const std::vector<int>& increasing) const {
  return tuple_rank(increasing, d_);
}

double AltForm::component(const std::vector<int>& increasing) const {
  return comps_[index_of(increasing)];
}

double& AltForm::component(const std::vector<int>& increasing) {
  return comps_[index_of(increasing)];
}

double AltForm::evaluate(const Eigen::MatrixXd& vectors) const {
  if (vectors.rows() != d_ || vectors.cols() != k_)
    fail(ErrorKind::InvalidArgument, "evaluation arity does not match form degree");
  if (k_ == 0) return comps_[0];
  double total = 0.0;
  std::vector<int> I;
  first_tuple(I, k_);
  Eigen::MatrixXd sub(k_, k_);
  do {
    const double c = component(I);
    if (c != 0.0) {
      for (int r = 0; r < k_; ++r)
        for (int cidx = 0; cidx < k_; ++cidx) sub(r, cidx) = vectors(I[r], cidx);
      total += c * sub.determinant();
    }
  } while (next_tuple(I, d_));
  return total;
}

double AltForm::max_abs() const {
  double m = 0.0;
  for (double v : comps_) m = std::max(m, std::abs(v));
  return m;
}

AltForm wedge(const AltForm& a, const AltForm& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::InvalidArgument, "wedge of forms on different spaces");
  const int d = a.dim(), p = a.degree(), q = b.degree();
  // Degree beyond the dimension is identically zero; report it as the zero
  // top-degree form so residual checks have something to measure.
  if (p + q > d) return AltForm(d, d);
  AltForm r(p + q, d);
  if (p == 0) {
    r = b;
    const double s = a.comps_[0];
    for (double& c : r.comps_) c *= s;
    return r;
  }
  if (q == 0) {
    r = a;
    const double s = b.comps_[0];
    for (double& c : r.comps_) c *= s;
    return r;
  }
  const double weight = factorial(p) * factorial(q) / factorial(p + q);
  std::vector<int> K;
  first_tuple(K, p + q);
  do {
    double sum = 0.0;
    // iterate subsets of positions of size p via increasing tuples over p+q
    std::vector<int> S;
    first_tuple(S, p);
    do {
      std::vector<int> ia(p), ib(q);
      std::vector<char> taken(p + q, 0);
      for (int i = 0; i < p; ++i) {
        ia[i] = K[S[i]];
        taken[S[i]] = 1;
      }
      int bi = 0;
      for (int i = 0; i < p + q; ++i)
        if (!taken[i]) ib[bi++] = K[i];
      // shuffle sign: parity of moving selected positions to the front
      int inversions = 0;
      for (int i = 0; i < p; ++i) inversions += S[i] - i;
      const double sgn = (inversions % 2 == 0) ? 1.0 : -1.0;
      sum += sgn * a.component(ia) * b.component(ib);
    } while (next_tuple(S, p + q));
    r.component(K) = weight * sum;
  } while (next_tuple(K, d));
  return r;
}

AltForm wedge_power(const AltForm& a, int k) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "negative wedge power");
  AltForm r = AltForm::scalar_one(a.dim());
  for (int i = 0; i < k; ++i) {
    if (r.degree() + a.degree() > a.dim()) {
      // the product would exceed top degree, hence is identically zero;
      // return a zero form of the clamped degree for residual reporting
      return AltForm(a.dim(), a.dim());
    }
    r = wedge(r, a);
  }
  return r;
}

}  // namespace qs3
