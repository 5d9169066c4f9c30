#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "gpdmm/linear_map.hpp"

namespace gpdmm {

// f_i(x) = 0.5 * x' Q x + <linear, x>. Q is iso_scale * I unless a dense
// curvature matrix is given. Must be convex.
struct QuadraticObjective {
  double iso_scale = 0.0;
  Eigen::MatrixXd curvature;  // empty => isotropic
  Eigen::VectorXd linear;
};

// f_i(X) = tra(C' X) on the flattened space, minimisation convention.
// Builders negate maximisation objectives.
struct LinearTraceObjective {
  Eigen::VectorXd coeff;  // vec(C)
};

// prox(v, tau) must return argmin_u f_i(u) + |u - v|^2 / (2 tau), exactly;
// inexact inner solves are out of contract. Only usable when the incident
// edge maps are all identity-like, so the edge terms fold into the prox.
struct ProxObjective {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> prox;
};

struct NodeProblem {
  int dim = 0;
  std::variant<QuadraticObjective, LinearTraceObjective, ProxObjective> objective;
  // Affine rows <h_l, x> = 1; trace-form tra(H' X) = 1 on matrix spaces.
  std::vector<Eigen::VectorXd> trace_rows;
};

// x_tilde minus the span{h_l} correction that restores <h_l, x> = 1 for all
// rows: gamma = G^{-1} (<h_l, x_tilde> - 1), G_mn = <h_m, h_n>. Throws
// SolverError when G is singular.
Eigen::VectorXd apply_trace_corrections(const Eigen::VectorXd& x_tilde,
                                        const std::vector<Eigen::VectorXd>& rows);

// One incident edge term of the regularised local problem: the map applied to
// this node's variable and the (possibly null = zero) constraint offset.
struct IncidentConstraint {
  const LinearMap* map = nullptr;
  const Eigen::VectorXd* offset = nullptr;
};

// Solves  argmin_x f_i(x) + sum_e ( <z_e, A_e x> + (c/2) |A_e x - b_e / 2|^2 )
// with the curvature structure factorised once. Keeps pointers into the
// problem and constraints; both must outlive the solver.
class LocalXSolver {
 public:
  LocalXSolver() = default;
  LocalXSolver(const NodeProblem& problem, std::vector<IncidentConstraint> incident, double c);

  Eigen::VectorXd solve(const std::vector<const Eigen::VectorXd*>& z) const;

 private:
  enum class Mode { Isotropic, Dense, Prox };
  const NodeProblem* problem_ = nullptr;
  std::vector<IncidentConstraint> incident_;
  double c_ = 1.0;
  Mode mode_ = Mode::Isotropic;
  double denom_ = 0.0;     // Isotropic
  double prox_tau_ = 0.0;  // Prox
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  Eigen::VectorXd const_rhs_;
  Eigen::FullPivLU<Eigen::MatrixXd> gram_lu_;
};

// One-shot form of the local node update.
Eigen::VectorXd local_x_update(const NodeProblem& problem,
                               const std::vector<IncidentConstraint>& incident,
                               const std::vector<const Eigen::VectorXd*>& z, double c);

}  // namespace gpdmm
