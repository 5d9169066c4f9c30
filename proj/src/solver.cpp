#include "gpdmm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gpdmm/errors.hpp"
#include "gpdmm/random.hpp"

namespace gpdmm {

using Eigen::VectorXd;

void validate_problem(const Problem& p) {
  const int n = p.graph.node_count();
  if (n < 1) throw std::invalid_argument("problem: empty graph");
  if (static_cast<int>(p.nodes.size()) != n)
    throw std::invalid_argument("problem: node problem count does not match graph");
  if (static_cast<int>(p.edges.size()) != p.graph.edge_count())
    throw std::invalid_argument("problem: edge constraint count does not match graph");
  if (!p.node_cones.empty() && static_cast<int>(p.node_cones.size()) != n)
    throw std::invalid_argument("problem: node cone list does not match graph");
  for (int i = 0; i < n; ++i) {
    if (p.nodes[i].dim < 1) throw std::invalid_argument("problem: node dimension must be positive");
  }
  for (int e = 0; e < p.graph.edge_count(); ++e) {
    const EdgeConstraint& ec = p.edges[e];
    const auto [gi, gj] = p.graph.edges()[e];
    if (ec.i != gi || ec.j != gj)
      throw std::invalid_argument("problem: edge constraints must align with graph edge order");
    const int dim = ec.cone.ambient_dim();
    if (ec.a_i.rows() != dim || ec.a_j.rows() != dim || ec.b.size() != dim)
      throw std::invalid_argument("problem: edge constraint codomain shapes disagree");
    if (ec.a_i.cols() != p.nodes[ec.i].dim || ec.a_j.cols() != p.nodes[ec.j].dim)
      throw std::invalid_argument("problem: edge map domain does not match node dimension");
  }
  for (std::size_t i = 0; i < p.node_cones.size(); ++i) {
    for (const NodeConeConstraint& nc : p.node_cones[i]) {
      const int dim = nc.cone.ambient_dim();
      if (nc.a.rows() != dim || nc.b.size() != dim)
        throw std::invalid_argument("problem: node cone constraint shapes disagree");
      if (nc.a.cols() != p.nodes[i].dim)
        throw std::invalid_argument("problem: node cone map domain does not match node dimension");
    }
  }
  if (p.reference) {
    if (p.reference->size() != p.nodes.size())
      throw std::invalid_argument("problem: reference size mismatch");
    for (int i = 0; i < n; ++i)
      if ((*p.reference)[i].size() != p.nodes[i].dim)
        throw std::invalid_argument("problem: reference dimension mismatch");
  }
}

Engine::Engine(Problem problem, EngineOptions opts)
    : problem_(std::move(problem)), dedges_(problem_.graph), opts_(opts) {
  validate_problem(problem_);
  if (!(opts_.c > 0.0)) throw std::invalid_argument("engine: c must be positive");
  if (!(opts_.alpha > 0.0) || opts_.alpha > 1.0)
    throw std::invalid_argument("engine: alpha must lie in (0, 1]");
  if (opts_.threads < 1) throw std::invalid_argument("engine: threads must be >= 1");
  if (opts_.schedule.kind == Schedule::Kind::Stochastic) {
    if (!(opts_.schedule.p > 0.0) || opts_.schedule.p > 1.0)
      throw std::invalid_argument("engine: stochastic p must lie in (0, 1]");
  }
  build_tables();

  if (opts_.schedule.kind == Schedule::Kind::Stochastic) {
    slot_p_.assign(slots_.size(), opts_.schedule.p);
    if (!opts_.schedule.per_slot_p.empty()) {
      if (opts_.schedule.per_slot_p.size() != slots_.size())
        throw std::invalid_argument("engine: per-slot probability count must equal slot count");
      for (double q : opts_.schedule.per_slot_p)
        if (!(q > 0.0) || q > 1.0)
          throw std::invalid_argument("engine: per-slot probabilities must lie in (0, 1]");
      slot_p_ = opts_.schedule.per_slot_p;
    }
    mask_rng_ = seeded_rng(opts_.schedule.seed);
  }
  mask_.assign(slots_.size(), 1);
}

void Engine::build_tables() {
  const int n = problem_.graph.node_count();
  if (problem_.node_cones.empty()) problem_.node_cones.resize(n);

  // Directed-edge slots, lexicographic.
  for (int e = 0; e < dedges_.size(); ++e) {
    const auto [u, v] = dedges_.pair(e);
    const EdgeConstraint& ec = problem_.edges[dedges_.undirected_id(e)];
    const LinearMap* map = (u == ec.i) ? &ec.a_i : &ec.a_j;
    slots_.push_back(Slot{u, map, &ec.b, !ec.b.isZero(0.0)});
  }
  // Dummy-edge slots (near then far), node order.
  std::vector<std::vector<int>> dummy_near(n);
  for (int i = 0; i < n; ++i) {
    for (const NodeConeConstraint& nc : problem_.node_cones[i]) {
      const int near = static_cast<int>(slots_.size());
      slots_.push_back(Slot{i, &nc.a, &nc.b, !nc.b.isZero(0.0)});
      slots_.push_back(Slot{-1, nullptr, &nc.b, !nc.b.isZero(0.0)});
      dummy_near[i].push_back(near);
    }
  }

  // Reflection pairs: one per undirected edge, then one per dummy edge.
  for (int e = 0; e < dedges_.size(); ++e) {
    const int r = dedges_.reverse(e);
    if (e < r) pairs_.push_back(ZPair{e, r, &problem_.edges[dedges_.undirected_id(e)].cone});
  }
  for (int i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < problem_.node_cones[i].size(); ++q) {
      const int near = dummy_near[i][q];
      pairs_.push_back(ZPair{near, near + 1, &problem_.node_cones[i][q].cone});
    }
  }

  node_slots_.resize(n);
  for (int i = 0; i < n; ++i) {
    node_slots_[i] = dedges_.outgoing(i);
    node_slots_[i].insert(node_slots_[i].end(), dummy_near[i].begin(), dummy_near[i].end());
  }

  // State, sized per slot.
  z_.resize(slots_.size());
  y_.resize(slots_.size());
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    z_[s] = VectorXd::Zero(slots_[s].offset->size());
    y_[s] = VectorXd::Zero(slots_[s].offset->size());
  }
  x_.resize(n);
  x_prev_.resize(n);
  for (int i = 0; i < n; ++i) {
    x_[i] = VectorXd::Zero(problem_.nodes[i].dim);
    x_prev_[i] = VectorXd::Zero(problem_.nodes[i].dim);
  }

  node_solvers_.resize(n);
  node_z_ptrs_.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<IncidentConstraint> incident;
    incident.reserve(node_slots_[i].size());
    for (int s : node_slots_[i]) {
      incident.push_back(IncidentConstraint{slots_[s].map,
                                            slots_[s].has_offset ? slots_[s].offset : nullptr});
      node_z_ptrs_[i].push_back(&z_[s]);
    }
    try {
      node_solvers_[i] = LocalXSolver(problem_.nodes[i], std::move(incident), opts_.c);
    } catch (const SolverError& err) {
      throw SolverError("node " + std::to_string(i) + ": " + err.what());
    }
  }
}

std::vector<Eigen::VectorXd> Engine::lambda_bar() const {
  std::vector<VectorXd> out(slots_.size());
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& sl = slots_[s];
    VectorXd t = (sl.node >= 0) ? sl.map->apply(x_[sl.node]) : VectorXd::Zero(z_[s].size());
    if (sl.has_offset) t -= 0.5 * (*sl.offset);
    out[s] = y_[s] - opts_.c * t;
  }
  return out;
}

void Engine::set_z(const std::vector<Eigen::VectorXd>& z) {
  if (z.size() != z_.size()) throw std::invalid_argument("set_z: slot count mismatch");
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (z[s].size() != z_[s].size()) throw std::invalid_argument("set_z: slot dimension mismatch");
    z_[s] = z[s];
  }
}

void Engine::randomize_z(std::uint64_t seed) {
  auto rng = seeded_rng(seed, 2);
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const ZPair& zp = pairs_[p];
    for (int s : {zp.s1, zp.s2})
      z_[s] = make_edge_vector(*zp.cone, gaussian_vector(static_cast<int>(z_[s].size()), rng));
  }
}

template <typename F>
void Engine::parallel_for(int n, F&& body) {
  if (opts_.threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
  std::exception_ptr err;
#pragma omp parallel for schedule(static) num_threads(opts_.threads)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
#else
  for (int i = 0; i < n; ++i) body(i);
#endif
}

void Engine::update_node(int i) { x_[i] = node_solvers_[i].solve(node_z_ptrs_[i]); }

void Engine::update_slot_y(int s) {
  const Slot& sl = slots_[s];
  const double c = opts_.c;
  const double two_c = 2.0 * c;
  if (sl.node < 0) {
    if (sl.has_offset) y_[s] = z_[s] - c * (*sl.offset);
    else y_[s] = z_[s];
    return;
  }
  const VectorXd& x = x_[sl.node];
  switch (sl.map->kind()) {
    case LinearMap::Kind::Identity:
      if (sl.has_offset) y_[s] = z_[s] + two_c * (x - 0.5 * (*sl.offset));
      else y_[s] = z_[s] + two_c * x;
      break;
    case LinearMap::Kind::NegIdentity:
      if (sl.has_offset) y_[s] = z_[s] + two_c * (-x - 0.5 * (*sl.offset));
      else y_[s] = z_[s] - two_c * x;
      break;
    case LinearMap::Kind::Zero:
      if (sl.has_offset) y_[s] = z_[s] - c * (*sl.offset);
      else y_[s] = z_[s];
      break;
    case LinearMap::Kind::Dense: {
      VectorXd t = sl.map->matrix() * x;
      if (sl.has_offset) t -= 0.5 * (*sl.offset);
      y_[s] = z_[s] + two_c * t;
      break;
    }
  }
}

void Engine::blend_z(int slot, EdgeVector&& reflected) {
  if (opts_.alpha == 1.0) z_[slot] = std::move(reflected);
  else z_[slot] = (1.0 - opts_.alpha) * z_[slot] + opts_.alpha * reflected;
}

void Engine::update_pair_z(int p, const std::vector<std::uint8_t>& mask) {
  const ZPair& zp = pairs_[p];
  if (!mask[zp.s1] && !mask[zp.s2]) return;
  auto [r1, r2] = reflect_m(*zp.cone, y_[zp.s1], y_[zp.s2]);
  if (mask[zp.s1]) blend_z(zp.s1, std::move(r1));
  if (mask[zp.s2]) blend_z(zp.s2, std::move(r2));
}

void Engine::iterate() {
  if (opts_.schedule.kind == Schedule::Kind::Stochastic) {
    for (std::size_t s = 0; s < mask_.size(); ++s)
      mask_[s] = uniform01(mask_rng_) < slot_p_[s] ? 1 : 0;
  }
  iterate_masked(mask_);
}

void Engine::iterate_masked(const std::vector<std::uint8_t>& mask) {
  if (mask.size() != slots_.size())
    throw std::invalid_argument("iterate_masked: mask size must equal slot count");
  std::swap(x_, x_prev_);
  parallel_for(problem_.graph.node_count(), [&](int i) { update_node(i); });
  double sq = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) sq += (x_[i] - x_prev_[i]).squaredNorm();
  primal_residual_ = std::sqrt(sq);
  parallel_for(static_cast<int>(slots_.size()), [&](int s) { update_slot_y(s); });
  parallel_for(static_cast<int>(pairs_.size()), [&](int p) { update_pair_z(p, mask); });
  ++k_;
}

RunStats Engine::run(int max_iters, std::optional<double> tol,
                     const std::function<void(const Engine&)>& per_iteration) {
  RunStats stats;
  for (int it = 0; it < max_iters; ++it) {
    iterate();
    ++stats.iterations;
    if (per_iteration) per_iteration(*this);
    if (tol && primal_residual_ <= *tol) {
      stats.reached_tol = true;
      break;
    }
  }
  return stats;
}

Metrics Engine::metrics() const {
  Metrics m;
  m.primal_residual = primal_residual_;
  double feas = 0.0;
  for (const ZPair& zp : pairs_) {
    const Slot& s1 = slots_[zp.s1];
    const Slot& s2 = slots_[zp.s2];
    VectorXd r = s1.map->apply(x_[s1.node]);
    if (s2.node >= 0) r += s2.map->apply(x_[s2.node]);
    if (s1.has_offset) r -= *s1.offset;
    feas += (r - project_cone(*zp.cone, r)).norm();
  }
  m.feasibility_residual = feas;
  if (problem_.reference) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      num += (x_[i] - (*problem_.reference)[i]).squaredNorm();
      den += (*problem_.reference)[i].squaredNorm();
    }
    m.distance_to_reference = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }
  return m;
}

Checkpoint Engine::snapshot() const {
  Checkpoint ck;
  ck.iteration = k_;
  ck.c = opts_.c;
  ck.alpha = opts_.alpha;
  ck.schedule = opts_.schedule;
  std::ostringstream os;
  os << mask_rng_;
  ck.rng_state = os.str();
  ck.z = z_;
  ck.x = x_;
  ck.problem_name = problem_.name;
  return ck;
}

void Engine::restore(const Checkpoint& ck) {
  if (ck.c != opts_.c || ck.alpha != opts_.alpha)
    throw ConfigError("restore: checkpoint c/alpha do not match the configured run");
  if (ck.schedule.kind != opts_.schedule.kind || ck.schedule.p != opts_.schedule.p ||
      ck.schedule.seed != opts_.schedule.seed)
    throw ConfigError("restore: checkpoint schedule does not match the configured run");
  if (ck.z.size() != z_.size() || ck.x.size() != x_.size())
    throw ConfigError("restore: checkpoint state size does not match this problem");
  for (std::size_t s = 0; s < z_.size(); ++s) {
    if (ck.z[s].size() != z_[s].size())
      throw ConfigError("restore: checkpoint slot dimension mismatch");
    z_[s] = ck.z[s];
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (ck.x[i].size() != x_[i].size())
      throw ConfigError("restore: checkpoint node dimension mismatch");
    x_[i] = ck.x[i];
  }
  std::istringstream is(ck.rng_state);
  is >> mask_rng_;
  if (is.fail() && !ck.rng_state.empty())
    throw ConfigError("restore: malformed RNG state");
  k_ = ck.iteration;
  primal_residual_ = std::numeric_limits<double>::quiet_NaN();
}

}  // namespace gpdmm
