#include "gpdmm/node_problem.hpp"

#include <cmath>
#include <string>

#include "gpdmm/errors.hpp"

namespace gpdmm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::VectorXd apply_trace_corrections(const Eigen::VectorXd& x_tilde,
                                        const std::vector<Eigen::VectorXd>& rows) {
  if (rows.empty()) return x_tilde;
  const int m = static_cast<int>(rows.size());
  MatrixXd gram(m, m);
  VectorXd resid(m);
  for (int a = 0; a < m; ++a) {
    resid[a] = rows[a].dot(x_tilde) - 1.0;
    for (int b = 0; b < m; ++b) gram(a, b) = rows[a].dot(rows[b]);
  }
  Eigen::FullPivLU<MatrixXd> lu(gram);
  if (!lu.isInvertible())
    throw SolverError("trace corrections: constraint Gram matrix is singular");
  const VectorXd gamma = lu.solve(resid);
  VectorXd x = x_tilde;
  for (int a = 0; a < m; ++a) x -= gamma[a] * rows[a];
  return x;
}

LocalXSolver::LocalXSolver(const NodeProblem& problem, std::vector<IncidentConstraint> incident,
                           double c)
    : problem_(&problem), incident_(std::move(incident)), c_(c) {
  const int dim = problem.dim;
  if (dim < 1) throw SolverError("local solver: node dimension must be positive");
  if (!(c > 0.0)) throw SolverError("local solver: step size c must be positive");

  bool edges_isotropic = true;
  double gram_sum = 0.0;
  for (const auto& inc : incident_) {
    if (!inc.map->isotropic()) edges_isotropic = false;
    else gram_sum += inc.map->gram_scale();
  }

  // Constant part of the stationarity right-hand side: -linear + (c/2) Σ Aᵀ b.
  const_rhs_ = VectorXd::Zero(dim);
  if (const auto* quad = std::get_if<QuadraticObjective>(&problem.objective)) {
    if (quad->linear.size() != dim) throw SolverError("local solver: linear term dimension mismatch");
    const_rhs_ = -quad->linear;
  } else if (const auto* lin = std::get_if<LinearTraceObjective>(&problem.objective)) {
    if (lin->coeff.size() != dim) throw SolverError("local solver: trace coefficient dimension mismatch");
    const_rhs_ = -lin->coeff;
  }
  for (const auto& inc : incident_) {
    if (inc.offset != nullptr && !inc.offset->isZero(0.0))
      const_rhs_ += (c_ / 2.0) * inc.map->apply_adjoint(*inc.offset);
  }

  if (std::holds_alternative<ProxObjective>(problem.objective)) {
    if (!edges_isotropic)
      throw SolverError("local solver: prox objectives need identity-like edge maps");
    if (!(c_ * gram_sum > 0.0))
      throw SolverError("local solver: prox objective has no curvature (isolated node)");
    if (!problem.trace_rows.empty())
      throw SolverError("local solver: prox objectives cannot carry trace constraints");
    mode_ = Mode::Prox;
    prox_tau_ = 1.0 / (c_ * gram_sum);
  } else {
    const auto* quad = std::get_if<QuadraticObjective>(&problem.objective);
    const bool dense_q = quad != nullptr && quad->curvature.size() > 0;
    if (!dense_q && edges_isotropic) {
      mode_ = Mode::Isotropic;
      denom_ = (quad != nullptr ? quad->iso_scale : 0.0) + c_ * gram_sum;
      if (!(denom_ > 1e-14)) throw SolverError("local solver: singular local system");
    } else {
      if (!problem.trace_rows.empty())
        throw SolverError(
            "local solver: trace constraints require isotropic curvature for an exact update");
      MatrixXd m;
      if (dense_q) {
        if (quad->curvature.rows() != dim || quad->curvature.cols() != dim)
          throw SolverError("local solver: curvature dimension mismatch");
        m = quad->curvature;
        Eigen::SelfAdjointEigenSolver<MatrixXd> check(m);
        if (check.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, check.eigenvalues().cwiseAbs().maxCoeff()))
          throw SolverError("local solver: objective curvature is not positive semidefinite");
      } else {
        m = MatrixXd::Zero(dim, dim);
        m.diagonal().array() += (quad != nullptr ? quad->iso_scale : 0.0);
      }
      for (const auto& inc : incident_) inc.map->add_gram(m, c_);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
      const double max_eig = es.eigenvalues().cwiseAbs().maxCoeff();
      if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, max_eig))
        throw SolverError("local solver: singular local system");
      mode_ = Mode::Dense;
      ldlt_.compute(m);
    }
  }

  if (!problem.trace_rows.empty()) {
    const int m = static_cast<int>(problem.trace_rows.size());
    MatrixXd gram(m, m);
    for (int a = 0; a < m; ++a) {
      if (problem.trace_rows[a].size() != dim)
        throw SolverError("local solver: trace row dimension mismatch");
      for (int b = 0; b < m; ++b) gram(a, b) = problem.trace_rows[a].dot(problem.trace_rows[b]);
    }
    gram_lu_.compute(gram);
    if (!gram_lu_.isInvertible())
      throw SolverError("local solver: constraint Gram matrix is singular");
  }
}

Eigen::VectorXd LocalXSolver::solve(const std::vector<const Eigen::VectorXd*>& z) const {
  VectorXd rhs = const_rhs_;
  for (std::size_t s = 0; s < incident_.size(); ++s) {
    const LinearMap& a = *incident_[s].map;
    switch (a.kind()) {
      case LinearMap::Kind::Identity:
        rhs -= *z[s];
        break;
      case LinearMap::Kind::NegIdentity:
        rhs += *z[s];
        break;
      case LinearMap::Kind::Zero:
        break;
      case LinearMap::Kind::Dense:
        rhs.noalias() -= a.matrix().transpose() * (*z[s]);
        break;
    }
  }

  VectorXd x;
  switch (mode_) {
    case Mode::Isotropic:
      x = rhs / denom_;
      break;
    case Mode::Dense:
      x = ldlt_.solve(rhs);
      break;
    case Mode::Prox: {
      const auto& prox = std::get<ProxObjective>(problem_->objective).prox;
      x = prox(rhs * prox_tau_, prox_tau_);
      break;
    }
  }

  if (!problem_->trace_rows.empty()) {
    const auto& rows = problem_->trace_rows;
    const int m = static_cast<int>(rows.size());
    VectorXd resid(m);
    for (int a = 0; a < m; ++a) resid[a] = rows[a].dot(x) - 1.0;
    const VectorXd gamma = gram_lu_.solve(resid);
    for (int a = 0; a < m; ++a) x -= gamma[a] * rows[a];
  }
  return x;
}

Eigen::VectorXd local_x_update(const NodeProblem& problem,
                               const std::vector<IncidentConstraint>& incident,
                               const std::vector<const Eigen::VectorXd*>& z, double c) {
  return LocalXSolver(problem, incident, c).solve(z);
}

}  // namespace gpdmm
