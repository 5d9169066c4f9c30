#include "gpdmm/cones.hpp"

#include <cmath>
#include <stdexcept>

#include "gpdmm/errors.hpp"

namespace gpdmm {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd to_matrix(const EdgeVector& v, int rows, int cols) {
  return Eigen::Map<const RowMajorMatrix>(v.data(), rows, cols);
}

EdgeVector from_matrix(const Eigen::MatrixXd& m) {
  RowMajorMatrix rm = m;
  return Eigen::Map<const VectorXd>(rm.data(), rm.size());
}

ConeSpec::ConeSpec(Kind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {
  if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("cone: ambient dimension must be positive");
  if (kind_ == Kind::Soc && rows_ < 2)
    throw std::invalid_argument("cone: second-order cone needs dimension >= 2");
}

namespace {

void check_shape(const ConeSpec& k, const EdgeVector& v) {
  if (v.size() != k.ambient_dim())
    throw std::invalid_argument("cone: value has dimension " + std::to_string(v.size()) +
                                ", expected " + std::to_string(k.ambient_dim()));
}

// Eigenvalue split of a symmetric matrix into its PSD and NSD parts.
// Truncation threshold is exactly 0.
std::pair<EdgeVector, EdgeVector> psd_split(const EdgeVector& v, int n) {
  MatrixXd sym = to_matrix(v, n, n);
  sym = 0.5 * (sym + sym.transpose().eval());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw SolverError("psd cone: eigendecomposition failed (order " + std::to_string(n) + ")");
  const MatrixXd& q = es.eigenvectors();
  const VectorXd& lam = es.eigenvalues();
  MatrixXd pos = q * lam.cwiseMax(0.0).asDiagonal() * q.transpose();
  MatrixXd neg = q * lam.cwiseMin(0.0).asDiagonal() * q.transpose();
  return {from_matrix(pos), from_matrix(neg)};
}

// Projection onto {(t, w) : |w| <= t}: zero, identity, or boundary scaling.
EdgeVector soc_project(const EdgeVector& v) {
  const double t = v[0];
  const double wn = v.tail(v.size() - 1).norm();
  if (wn <= t) return v;
  EdgeVector out = EdgeVector::Zero(v.size());
  if (wn <= -t) return out;
  const double s = 0.5 * (t + wn);
  out[0] = s;
  out.tail(v.size() - 1) = (s / wn) * v.tail(v.size() - 1);
  return out;
}

}  // namespace

EdgeVector project_cone(const ConeSpec& k, const EdgeVector& v) {
  check_shape(k, v);
  switch (k.kind()) {
    case ConeSpec::Kind::Zero:
      return EdgeVector::Zero(v.size());
    case ConeSpec::Kind::Orthant:
      return v.cwiseMax(0.0);
    case ConeSpec::Kind::Psd:
      return psd_split(v, k.psd_order()).first;
    case ConeSpec::Kind::Soc:
      return soc_project(v);
  }
  throw std::logic_error("unreachable");
}

EdgeVector project_polar(const ConeSpec& k, const EdgeVector& v) {
  check_shape(k, v);
  switch (k.kind()) {
    case ConeSpec::Kind::Zero:
      return v;  // polar of {0} is the whole space
    case ConeSpec::Kind::Orthant:
      return v.cwiseMin(0.0);
    case ConeSpec::Kind::Psd:
      return psd_split(v, k.psd_order()).second;
    case ConeSpec::Kind::Soc:
      // self-dual: K° = -K
      return -soc_project(-v);
  }
  throw std::logic_error("unreachable");
}

std::pair<EdgeVector, EdgeVector> reflect_m(const ConeSpec& k, const EdgeVector& y_ij,
                                            const EdgeVector& y_ji) {
  check_shape(k, y_ij);
  check_shape(k, y_ji);
  if (k.kind() == ConeSpec::Kind::Zero) return {y_ji, y_ij};
  const EdgeVector s = project_polar(k, y_ij + y_ji);
  return {s - y_ij, s - y_ji};
}

std::pair<double, double> moreau_check(const ConeSpec& k, const EdgeVector& v) {
  const EdgeVector p = project_cone(k, v);
  const EdgeVector q = project_polar(k, v);
  return {(v - p - q).norm(), std::abs(p.dot(q))};
}

EdgeVector make_edge_vector(const ConeSpec& k, const EdgeVector& raw) {
  check_shape(k, raw);
  if (k.kind() == ConeSpec::Kind::Psd) {
    const int n = k.psd_order();
    MatrixXd m = to_matrix(raw, n, n);
    return from_matrix(0.5 * (m + m.transpose().eval()));
  }
  return raw;
}

}  // namespace gpdmm
