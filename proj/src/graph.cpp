#include "gpdmm/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

#include "gpdmm/errors.hpp"
#include "gpdmm/random.hpp"

namespace gpdmm {

Graph::Graph(int node_count, std::vector<std::pair<int, int>> edges)
    : node_count_(node_count) {
  if (node_count < 1) throw std::invalid_argument("graph: node_count must be positive");
  for (auto& [i, j] : edges) {
    if (i == j) throw std::invalid_argument("graph: self-loop at node " + std::to_string(i));
    if (i < 0 || j < 0 || i >= node_count || j >= node_count)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("graph: duplicate edge");
  edges_ = std::move(edges);

  adjacency_.resize(node_count_);
  for (const auto& [i, j] : edges_) {
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

bool Graph::connected() const {
  if (node_count_ == 0) return false;
  std::vector<char> seen(node_count_, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        frontier.push(v);
      }
    }
  }
  return visited == node_count_;
}

DirectedEdgeIndex::DirectedEdgeIndex(const Graph& g) {
  pairs_.reserve(2 * g.edge_count());
  for (const auto& [i, j] : g.edges()) {
    pairs_.emplace_back(i, j);
    pairs_.emplace_back(j, i);
  }
  std::sort(pairs_.begin(), pairs_.end());

  reverse_.resize(pairs_.size());
  undirected_.resize(pairs_.size());
  outgoing_.resize(g.node_count());
  for (int e = 0; e < size(); ++e) {
    const auto [i, j] = pairs_[e];
    reverse_[e] = index_of(j, i);
    const auto norm = std::minmax(i, j);
    const auto it = std::lower_bound(g.edges().begin(), g.edges().end(),
                                     std::pair<int, int>(norm.first, norm.second));
    undirected_[e] = static_cast<int>(it - g.edges().begin());
    outgoing_[i].push_back(e);
  }
}

int DirectedEdgeIndex::index_of(int i, int j) const {
  const auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair<int, int>(i, j));
  if (it == pairs_.end() || *it != std::pair<int, int>(i, j)) return -1;
  return static_cast<int>(it - pairs_.begin());
}

Graph geometric_graph_draw(int n, double radius, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("geometric graph: need n >= 2");
  if (!(radius > 0.0) || radius > std::sqrt(2.0) + 1e-12)
    throw std::invalid_argument("geometric graph: radius must be in (0, sqrt(2)]");
  auto rng = seeded_rng(seed);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) {
    p.first = uniform01(rng);
    p.second = uniform01(rng);
  }
  const double r2 = radius * radius;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = pts[i].first - pts[j].first;
      const double dy = pts[i].second - pts[j].second;
      if (dx * dx + dy * dy <= r2) edges.emplace_back(i, j);
    }
  }
  return Graph(n, std::move(edges));
}

Graph random_geometric_graph(int n, double radius, std::uint64_t seed) {
  constexpr int kRetryBudget = 100;
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    Graph g = geometric_graph_draw(n, radius, seed + static_cast<std::uint64_t>(attempt) * 0x9e3779b97f4a7c15ull);
    if (g.connected()) return g;
  }
  throw SolverError("geometric graph: no connected draw in 100 attempts (n=" +
                    std::to_string(n) + ", radius=" + std::to_string(radius) + ")");
}

}  // namespace gpdmm
