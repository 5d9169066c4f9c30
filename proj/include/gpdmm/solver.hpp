#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gpdmm/cones.hpp"
#include "gpdmm/graph.hpp"
#include "gpdmm/linear_map.hpp"
#include "gpdmm/node_problem.hpp"

namespace gpdmm {

// Constraint a_i x_i + a_j x_j - b in cone, attached to the undirected edge
// {i, j} with i < j.
struct EdgeConstraint {
  int i = 0, j = 0;
  LinearMap a_i, a_j;
  Eigen::VectorXd b;
  ConeSpec cone = ConeSpec::zero(1);
};

// Constraint a x_i - b in cone, realised as a dummy-node self edge: both
// auxiliary variables live in node-local state and no exchange happens.
struct NodeConeConstraint {
  LinearMap a;
  Eigen::VectorXd b;
  ConeSpec cone = ConeSpec::zero(1);
};

struct Problem {
  Graph graph;
  std::vector<NodeProblem> nodes;                           // one per node
  std::vector<EdgeConstraint> edges;                        // aligned with graph.edges()
  std::vector<std::vector<NodeConeConstraint>> node_cones;  // per node, may be empty
  std::optional<std::vector<Eigen::VectorXd>> reference;    // known optimum, for metrics
  std::string name;
};

// Shape/alignment checks; throws std::invalid_argument.
void validate_problem(const Problem& p);

struct Schedule {
  enum class Kind { Synchronous, Stochastic };
  Kind kind = Kind::Synchronous;
  double p = 1.0;                  // per-slot update probability
  std::vector<double> per_slot_p;  // optional per-slot override, entries in (0,1]
  std::uint64_t seed = 0;

  static Schedule synchronous() { return {}; }
  static Schedule stochastic(double p, std::uint64_t seed) {
    Schedule s;
    s.kind = Kind::Stochastic;
    s.p = p;
    s.seed = seed;
    return s;
  }
};

struct Metrics {
  double primal_residual = std::numeric_limits<double>::quiet_NaN();
  double feasibility_residual = 0.0;
  std::optional<double> distance_to_reference;
};

struct Checkpoint {
  int iteration = 0;
  double c = 1.0, alpha = 1.0;
  Schedule schedule;
  std::string rng_state;
  std::vector<Eigen::VectorXd> z;
  std::vector<Eigen::VectorXd> x;
  std::string problem_name;
};

struct EngineOptions {
  double c = 1.0;
  double alpha = 1.0;  // 1 = non-averaged, 1/2 = half-averaged
  Schedule schedule;
  int threads = 1;  // 1 = serial reference path; >1 = OpenMP, bit-identical
};

struct RunStats {
  int iterations = 0;
  bool reached_tol = false;
};

// Iteration engine. One iteration runs three phases separated by barriers:
// node x-updates, per-slot y-updates, masked per-pair z-updates. Each phase
// only reads state frozen at its start, so the OpenMP path is bit-identical
// to the serial one. The stochastic mask is drawn on a single stream before
// the parallel phases.
//
// Auxiliary state is indexed by "slots": the 2|E| directed edges in
// lexicographic order, followed by two slots (near, far) per node-cone
// constraint in node order.
class Engine {
 public:
  Engine(Problem problem, EngineOptions opts);

  int slot_count() const { return static_cast<int>(slots_.size()); }
  int iteration() const { return k_; }
  const Problem& problem() const { return problem_; }
  const DirectedEdgeIndex& directed_edges() const { return dedges_; }
  const EngineOptions& options() const { return opts_; }

  const std::vector<Eigen::VectorXd>& x() const { return x_; }
  const std::vector<Eigen::VectorXd>& z() const { return z_; }
  const std::vector<Eigen::VectorXd>& y() const { return y_; }
  std::vector<Eigen::VectorXd> lambda_bar() const;  // derived: y - c (A x - b/2)

  void set_z(const std::vector<Eigen::VectorXd>& z);
  void randomize_z(std::uint64_t seed);

  // One full iteration; stochastic schedules draw a fresh i.i.d. mask.
  void iterate();
  // Iteration with an explicit update mask over slots (the schedule seam).
  void iterate_masked(const std::vector<std::uint8_t>& mask);

  RunStats run(int max_iters, std::optional<double> tol,
               const std::function<void(const Engine&)>& per_iteration = {});

  // |x - x_prev| over stacked node variables, for the last iteration.
  double primal_residual() const { return primal_residual_; }
  Metrics metrics() const;

  Checkpoint snapshot() const;
  void restore(const Checkpoint& ck);

 private:
  struct Slot {
    int node;  // -1 for the fictive side of a dummy edge
    const LinearMap* map;
    const Eigen::VectorXd* offset;  // null when b = 0
    bool has_offset;
  };
  struct ZPair {
    int s1, s2;
    const ConeSpec* cone;
  };

  void build_tables();
  void update_node(int i);
  void update_slot_y(int s);
  void update_pair_z(int p, const std::vector<std::uint8_t>& mask);
  void blend_z(int slot, EdgeVector&& reflected);
  template <typename F>
  void parallel_for(int n, F&& body);

  Problem problem_;
  DirectedEdgeIndex dedges_;
  EngineOptions opts_;

  std::vector<Slot> slots_;
  std::vector<ZPair> pairs_;
  std::vector<std::vector<int>> node_slots_;  // incident slots per node, update order
  std::vector<std::vector<const Eigen::VectorXd*>> node_z_ptrs_;
  std::vector<LocalXSolver> node_solvers_;
  std::vector<double> slot_p_;

  std::vector<Eigen::VectorXd> x_, x_prev_, z_, y_;
  int k_ = 0;
  double primal_residual_ = std::numeric_limits<double>::quiet_NaN();
  std::mt19937_64 mask_rng_;
  std::vector<std::uint8_t> mask_;
};

}  // namespace gpdmm
