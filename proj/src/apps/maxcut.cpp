#include "gpdmm/apps/maxcut.hpp"

#include <stdexcept>

#include "gpdmm/apps/consensus.hpp"
#include "gpdmm/cones.hpp"
#include "gpdmm/errors.hpp"
#include "gpdmm/random.hpp"

namespace gpdmm {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

namespace {

void check_spec(const MaxCutSpec& spec) {
  if (spec.weights.size() != static_cast<std::size_t>(spec.graph.edge_count()))
    throw std::invalid_argument("maxcut: need one weight per edge");
  for (double w : spec.weights)
    if (w < 0.0) throw std::invalid_argument("maxcut: weights must be nonnegative");
}

}  // namespace

Eigen::MatrixXd build_maxcut_w(const MaxCutSpec& spec) {
  check_spec(spec);
  const int n = spec.graph.node_count();
  MatrixXd w = MatrixXd::Zero(n, n);
  for (int e = 0; e < spec.graph.edge_count(); ++e) {
    const auto [i, j] = spec.graph.edges()[e];
    const double wij = spec.weights[e];
    w(i, i) += wij;
    w(j, j) += wij;
    w(i, j) = -wij;
    w(j, i) = -wij;
  }
  return w;
}

std::vector<Eigen::MatrixXd> build_maxcut_wi(const MaxCutSpec& spec) {
  check_spec(spec);
  const int n = spec.graph.node_count();
  std::vector<MatrixXd> wi(n, MatrixXd::Zero(n, n));
  for (int e = 0; e < spec.graph.edge_count(); ++e) {
    const auto [i, j] = spec.graph.edges()[e];
    const double wij = spec.weights[e];
    wi[i](i, i) += wij;
    wi[i](i, j) = wi[i](j, i) = -0.5 * wij;
    wi[j](j, j) += wij;
    wi[j](i, j) = wi[j](j, i) = -0.5 * wij;
  }
  return wi;
}

Problem build_maxcut_sdp(const MaxCutSpec& spec) {
  check_spec(spec);
  if (!spec.graph.connected()) throw std::invalid_argument("maxcut: graph must be connected");
  const int n = spec.graph.node_count();
  const int dim = n * n;

  Problem p;
  p.graph = spec.graph;
  p.name = "maxcut";

  const std::vector<MatrixXd> wi = build_maxcut_wi(spec);
  p.nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    LinearTraceObjective obj;
    obj.coeff = from_matrix(-wi[i]);  // maximise tra(W_i X) == minimise tra(-W_i X)
    p.nodes[i].dim = dim;
    p.nodes[i].objective = std::move(obj);
    p.nodes[i].trace_rows.reserve(n);
    for (int l = 0; l < n; ++l) {
      VectorXd e_l = VectorXd::Zero(dim);
      e_l[l * n + l] = 1.0;  // unit diagonal matrix, row-major
      p.nodes[i].trace_rows.push_back(std::move(e_l));
    }
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
  for (int i = 0; i < n; ++i) {
    NodeConeConstraint nc;
    nc.a = LinearMap::identity(dim);
    nc.b = VectorXd::Zero(dim);
    nc.cone = ConeSpec::psd(n);
    p.node_cones[i].push_back(std::move(nc));
  }
  return p;
}

double cut_value(const MaxCutSpec& spec, const Eigen::VectorXi& assignment) {
  check_spec(spec);
  if (assignment.size() != spec.graph.node_count())
    throw std::invalid_argument("maxcut: assignment size mismatch");
  double total = 0.0;
  for (int e = 0; e < spec.graph.edge_count(); ++e) {
    const auto [i, j] = spec.graph.edges()[e];
    if (assignment[i] != assignment[j]) total += spec.weights[e];
  }
  return total;
}

namespace {

VectorXi signs_of(const VectorXd& v) {
  VectorXi s(v.size());
  for (int i = 0; i < v.size(); ++i) s[i] = v[i] >= 0.0 ? 1 : -1;
  return s;
}

}  // namespace

CutSolution round_rank1(const MaxCutSpec& spec, const Eigen::MatrixXd& x_relaxed) {
  check_spec(spec);
  const MatrixXd sym = 0.5 * (x_relaxed + x_relaxed.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw SolverError("rank-1 rounding: eigendecomposition failed");
  const VectorXd q1 = es.eigenvectors().col(sym.rows() - 1);  // leading eigenpair
  CutSolution out;
  out.assignment = signs_of(q1);
  out.cut_value = cut_value(spec, out.assignment);
  out.sdp_objective = (build_maxcut_w(spec) * sym).trace();
  out.method = "rank1";
  return out;
}

CutSolution round_randomized(const MaxCutSpec& spec, const Eigen::MatrixXd& x_relaxed,
                             int samples, std::uint64_t seed) {
  check_spec(spec);
  if (samples < 1) throw std::invalid_argument("maxcut: need at least one sample");
  const int n = static_cast<int>(x_relaxed.rows());
  const MatrixXd sym = 0.5 * (x_relaxed + x_relaxed.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw SolverError("randomized rounding: eigendecomposition failed");
  // Symmetric square-root factor; tiny negative eigenvalues are clamped, the
  // same effect as the usual diagonal shift before factorisation.
  const MatrixXd factor =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  auto rng = seeded_rng(seed, 3);
  CutSolution best;
  best.method = "randomized";
  best.cut_value = -1.0;
  for (int s = 0; s < samples; ++s) {
    const VectorXd xi = factor * gaussian_vector(n, rng);
    const VectorXi cand = signs_of(xi);
    const double val = cut_value(spec, cand);
    if (val > best.cut_value) {
      best.cut_value = val;
      best.assignment = cand;
    }
  }
  best.sdp_objective = (build_maxcut_w(spec) * sym).trace();
  return best;
}

Eigen::MatrixXd average_node_matrix(const std::vector<Eigen::VectorXd>& x, int order) {
  if (x.empty()) throw std::invalid_argument("average: no node state");
  VectorXd mean = VectorXd::Zero(x[0].size());
  for (const VectorXd& xi : x) mean += xi;
  mean /= static_cast<double>(x.size());
  const MatrixXd m = to_matrix(mean, order, order);
  return 0.5 * (m + m.transpose());
}

MaxCutSpec maxcut_spec_uniform(const Graph& graph, std::uint64_t seed) {
  MaxCutSpec spec;
  spec.graph = graph;
  auto rng = seeded_rng(seed, 1);
  spec.weights.resize(graph.edge_count());
  for (double& w : spec.weights) w = static_cast<double>(rng() % 10);  // uniform on {0..9}
  return spec;
}

MaxCutSpec maxcut_preset(int n_nodes, std::uint64_t seed) {
  return maxcut_spec_uniform(random_geometric_graph(n_nodes, geometric_radius(n_nodes), seed),
                             seed);
}

}  // namespace gpdmm
