#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace gpdmm {

// Undirected graph on nodes 0..N-1. Immutable after construction; safe to
// share read-only across parallel node updates.
class Graph {
 public:
  Graph() = default;
  Graph(int node_count, std::vector<std::pair<int, int>> edges);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  // Normalized to (i, j) with i < j, sorted lexicographically.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return adjacency_[i]; }
  int degree(int i) const { return static_cast<int>(adjacency_[i].size()); }
  bool connected() const;

 private:
  int node_count_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
};

// All ordered pairs (i,j) and (j,i) for {i,j} in E, in lexicographic order.
// Every per-edge state vector in the solver is indexed by this order, which
// makes runs bit-reproducible.
class DirectedEdgeIndex {
 public:
  explicit DirectedEdgeIndex(const Graph& g);

  int size() const { return static_cast<int>(pairs_.size()); }  // == 2|E|
  std::pair<int, int> pair(int e) const { return pairs_[e]; }
  int reverse(int e) const { return reverse_[e]; }
  int index_of(int i, int j) const;  // -1 if (i,j) is not a directed edge
  // Position of the underlying undirected edge in Graph::edges().
  int undirected_id(int e) const { return undirected_[e]; }
  // Directed edges (i, *), ordered by target id.
  const std::vector<int>& outgoing(int i) const { return outgoing_[i]; }

 private:
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> reverse_;
  std::vector<int> undirected_;
  std::vector<std::vector<int>> outgoing_;
};

// One draw of the geometric model: n points uniform on the unit square,
// edge iff Euclidean distance <= radius. May be disconnected.
Graph geometric_graph_draw(int n, double radius, std::uint64_t seed);

// Regenerates with fresh sub-seeds until connected; throws SolverError after
// 100 attempts.
Graph random_geometric_graph(int n, double radius, std::uint64_t seed);

}  // namespace gpdmm
