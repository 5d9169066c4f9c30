#pragma once

#include <Eigen/Dense>

namespace gpdmm {

// Continuous linear map between flattened spaces. Identity, negated identity
// and zero are named kinds so the ubiquitous consensus-style constraints skip
// dense matvecs and keep closed-form node updates scalar.
class LinearMap {
 public:
  enum class Kind { Identity, NegIdentity, Zero, Dense };

  LinearMap() = default;
  static LinearMap identity(int dim) { return LinearMap(Kind::Identity, dim, dim); }
  static LinearMap neg_identity(int dim) { return LinearMap(Kind::NegIdentity, dim, dim); }
  static LinearMap zero(int rows, int cols) { return LinearMap(Kind::Zero, rows, cols); }
  static LinearMap dense(Eigen::MatrixXd m);

  Kind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& g) const;

  // AᵀA == gram_scale() * I for the named kinds.
  bool isotropic() const { return kind_ != Kind::Dense; }
  double gram_scale() const { return kind_ == Kind::Zero ? 0.0 : 1.0; }
  void add_gram(Eigen::MatrixXd& m, double scale) const;  // m += scale * AᵀA

  const Eigen::MatrixXd& matrix() const { return mat_; }

 private:
  LinearMap(Kind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {}
  Kind kind_ = Kind::Zero;
  int rows_ = 0, cols_ = 0;
  Eigen::MatrixXd mat_;
};

}  // namespace gpdmm
