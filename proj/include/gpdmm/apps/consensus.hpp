#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "gpdmm/cones.hpp"
#include "gpdmm/graph.hpp"
#include "gpdmm/solver.hpp"

namespace gpdmm {

// Cone-constrained matrix consensus: minimise sum_i |X_i - A_i|_F^2 subject
// to X_i = X_j on every edge and (optionally) X_i in K per node.
struct ConsensusSpec {
  Graph graph;
  int rows = 0, cols = 0;
  std::vector<Eigen::MatrixXd> data;  // A_i, one per node
  std::optional<ConeSpec> node_cone;  // realised as a dummy-node self edge
};

// Equality edges get the zero cone and identity maps (+I on the lower node).
// Throws on a disconnected graph.
Problem build_consensus(const ConsensusSpec& spec);

// Closed-form optimum: the cone projection of the data average.
Eigen::MatrixXd consensus_optimum(const ConsensusSpec& spec);

// Communication radius sqrt(2 log(n) / n) used by the geometric experiments.
double geometric_radius(int n);

// Experiment generators: geometric graph, Gaussian data.
ConsensusSpec consensus_orthant_spec(int n_nodes, int rows, int cols, std::uint64_t seed);
ConsensusSpec consensus_psd_spec(int n_nodes, int order, std::uint64_t seed);

}  // namespace gpdmm
