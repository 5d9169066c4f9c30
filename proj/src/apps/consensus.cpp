#include "gpdmm/apps/consensus.hpp"

#include <cmath>
#include <stdexcept>

#include "gpdmm/random.hpp"

namespace gpdmm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Problem build_consensus(const ConsensusSpec& spec) {
  const int n = spec.graph.node_count();
  if (!spec.graph.connected()) throw std::invalid_argument("consensus: graph must be connected");
  if (spec.rows < 1 || spec.cols < 1) throw std::invalid_argument("consensus: bad data shape");
  if (static_cast<int>(spec.data.size()) != n)
    throw std::invalid_argument("consensus: need one data matrix per node");
  for (const MatrixXd& a : spec.data)
    if (a.rows() != spec.rows || a.cols() != spec.cols)
      throw std::invalid_argument("consensus: data matrices must share one shape");
  if (spec.node_cone) {
    if (spec.node_cone->ambient_dim() != spec.rows * spec.cols)
      throw std::invalid_argument("consensus: node cone shape does not match data");
    if (spec.node_cone->kind() == ConeSpec::Kind::Psd) {
      if (spec.rows != spec.cols)
        throw std::invalid_argument("consensus: PSD scenario needs square data");
      for (const MatrixXd& a : spec.data)
        if ((a - a.transpose()).norm() > 1e-10 * (1.0 + a.norm()))
          throw std::invalid_argument("consensus: PSD scenario needs symmetric data");
    }
  }

  const int dim = spec.rows * spec.cols;
  Problem p;
  p.graph = spec.graph;
  p.name = "consensus";

  p.nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    QuadraticObjective q;
    q.iso_scale = 2.0;  // |X - A|^2 has curvature 2I
    q.linear = -2.0 * from_matrix(spec.data[i]);
    p.nodes[i].dim = dim;
    p.nodes[i].objective = std::move(q);
  }

  p.edges.reserve(spec.graph.edge_count());
  for (const auto& [i, j] : spec.graph.edges()) {
    EdgeConstraint ec;
    ec.i = i;
    ec.j = j;
    ec.a_i = LinearMap::identity(dim);
    ec.a_j = LinearMap::neg_identity(dim);
    ec.b = VectorXd::Zero(dim);
    ec.cone = ConeSpec::zero(dim);
    p.edges.push_back(std::move(ec));
  }

  p.node_cones.resize(n);
  if (spec.node_cone) {
    for (int i = 0; i < n; ++i) {
      NodeConeConstraint nc;
      nc.a = LinearMap::identity(dim);
      nc.b = VectorXd::Zero(dim);
      nc.cone = *spec.node_cone;
      p.node_cones[i].push_back(std::move(nc));
    }
  }

  const MatrixXd opt = consensus_optimum(spec);
  p.reference = std::vector<VectorXd>(n, from_matrix(opt));
  return p;
}

Eigen::MatrixXd consensus_optimum(const ConsensusSpec& spec) {
  MatrixXd avg = MatrixXd::Zero(spec.rows, spec.cols);
  for (const MatrixXd& a : spec.data) avg += a;
  avg /= static_cast<double>(spec.data.size());
  if (!spec.node_cone) return avg;
  return to_matrix(project_cone(*spec.node_cone, from_matrix(avg)), spec.rows, spec.cols);
}

double geometric_radius(int n) { return std::sqrt(2.0 * std::log(static_cast<double>(n)) / n); }

ConsensusSpec consensus_orthant_spec(int n_nodes, int rows, int cols, std::uint64_t seed) {
  ConsensusSpec spec;
  spec.graph = random_geometric_graph(n_nodes, geometric_radius(n_nodes), seed);
  spec.rows = rows;
  spec.cols = cols;
  auto rng = seeded_rng(seed, 1);
  spec.data.reserve(n_nodes);
  for (int i = 0; i < n_nodes; ++i) spec.data.push_back(gaussian_matrix(rows, cols, rng));
  spec.node_cone = ConeSpec::orthant(rows, cols);
  return spec;
}

ConsensusSpec consensus_psd_spec(int n_nodes, int order, std::uint64_t seed) {
  ConsensusSpec spec;
  spec.graph = random_geometric_graph(n_nodes, geometric_radius(n_nodes), seed);
  spec.rows = order;
  spec.cols = order;
  auto rng = seeded_rng(seed, 1);
  spec.data.reserve(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const MatrixXd g = gaussian_matrix(order, order, rng);
    spec.data.push_back(0.5 * (g + g.transpose()));
  }
  spec.node_cone = ConeSpec::psd(order);
  return spec;
}

}  // namespace gpdmm
