#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gpdmm/graph.hpp"
#include "gpdmm/solver.hpp"

namespace gpdmm {

// Max-cut instance: nonnegative symmetric weights on the graph edges.
struct MaxCutSpec {
  Graph graph;
  std::vector<double> weights;  // aligned with graph.edges()
};

// Weighted graph Laplacian: diagonal sum_j w_ij, off-diagonal -w_ij.
Eigen::MatrixXd build_maxcut_w(const MaxCutSpec& spec);

// Node-local splitting of W: (i,i) = sum_j w_ij, (i,j) = (j,i) = -w_ij / 2
// for neighbours j. Each W_i is PSD and sum_i W_i = W.
std::vector<Eigen::MatrixXd> build_maxcut_wi(const MaxCutSpec& spec);

// Distributed relaxation: per-node local copies X_i of the N x N Gram
// matrix, objective tra(W_i X_i) (negated into the minimisation convention),
// unit diagonal via trace corrections, PSD node cone, equality edges.
Problem build_maxcut_sdp(const MaxCutSpec& spec);

struct CutSolution {
  Eigen::VectorXi assignment;  // entries in {-1, +1}
  double cut_value = 0.0;
  double sdp_objective = 0.0;  // tra(W X) at the relaxed solution
  std::string method;
};

double cut_value(const MaxCutSpec& spec, const Eigen::VectorXi& assignment);

// Signs of the leading eigenvector; sign(0) -> +1.
CutSolution round_rank1(const MaxCutSpec& spec, const Eigen::MatrixXd& x_relaxed);

// Gaussian sampling through a symmetric factor of X; keeps the best of
// `samples` sign vectors. Deterministic given the seed.
CutSolution round_randomized(const MaxCutSpec& spec, const Eigen::MatrixXd& x_relaxed,
                             int samples, std::uint64_t seed);

// Node average of the converged per-node copies, symmetrised.
Eigen::MatrixXd average_node_matrix(const std::vector<Eigen::VectorXd>& x, int order);

// Experiment generator: geometric graph, integer weights uniform on {0..9}.
MaxCutSpec maxcut_spec_uniform(const Graph& graph, std::uint64_t seed);
MaxCutSpec maxcut_preset(int n_nodes, std::uint64_t seed);

}  // namespace gpdmm
