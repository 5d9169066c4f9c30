#include "gpdmm/linear_map.hpp"

#include <stdexcept>

namespace gpdmm {

LinearMap LinearMap::dense(Eigen::MatrixXd m) {
  if (m.size() == 0) throw std::invalid_argument("linear map: empty matrix");
  LinearMap out(Kind::Dense, static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  out.mat_ = std::move(m);
  return out;
}

Eigen::VectorXd LinearMap::apply(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case Kind::Identity:
      return x;
    case Kind::NegIdentity:
      return -x;
    case Kind::Zero:
      return Eigen::VectorXd::Zero(rows_);
    case Kind::Dense:
      return mat_ * x;
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd LinearMap::apply_adjoint(const Eigen::VectorXd& g) const {
  switch (kind_) {
    case Kind::Identity:
      return g;
    case Kind::NegIdentity:
      return -g;
    case Kind::Zero:
      return Eigen::VectorXd::Zero(cols_);
    case Kind::Dense:
      return mat_.transpose() * g;
  }
  throw std::logic_error("unreachable");
}

void LinearMap::add_gram(Eigen::MatrixXd& m, double scale) const {
  switch (kind_) {
    case Kind::Identity:
    case Kind::NegIdentity:
      m.diagonal().array() += scale;
      return;
    case Kind::Zero:
      return;
    case Kind::Dense:
      m.noalias() += scale * (mat_.transpose() * mat_);
      return;
  }
}

}  // namespace gpdmm
