#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace pathenc {

class QuantumSystem;

/// Oriented edge in the natural orientation: tail < head, forward = tail -> head.
struct Edge {
  int tail;
  int head;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Transition graph of a system. Vertices are 0-based eigenstate indices and
/// edges are kept sorted ascending by (tail, head); an edge's position in
/// that list is its index everywhere else in the library.
class HamiltonianGraph {
 public:
  HamiltonianGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_[index]; }
  std::optional<std::size_t> edge_index(int u, int v) const;
  // Neighbours of v in ascending order.
  const std::vector<int>& neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  bool connected() const;

  friend bool operator==(const HamiltonianGraph& a, const HamiltonianGraph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

struct SpanningTree {
  std::vector<std::size_t> edge_indices;  // ascending
  bool contains(std::size_t edge) const;
};

/// Integer edge-coefficient vector (1-chain). Length is the edge count for
/// undirected chains and twice that for directed ones.
struct Chain {
  std::vector<std::int64_t> coefficients;
  friend bool operator==(const Chain&, const Chain&) = default;
};

struct Arc {
  int from;
  int to;
  std::size_t edge;
  bool forward;
};

/// Both directions of every edge: all forward arcs in edge order, then all
/// backward arcs in edge order.
struct DirectedGraph {
  int vertex_count;
  std::vector<Arc> arcs;
};

HamiltonianGraph build_graph(const QuantumSystem& system);

// Breadth-first tree rooted at vertex 0, neighbours taken in ascending order.
SpanningTree spanning_tree(const HamiltonianGraph& graph);

// Tree given as explicit edges; checked for size, acyclicity and coverage.
SpanningTree spanning_tree_from_edges(const HamiltonianGraph& graph, const std::vector<Edge>& edges);

std::vector<std::size_t> non_tree_edges(const HamiltonianGraph& graph, const SpanningTree& tree);

// d x r, column for edge (a, b) has -1 at row a and +1 at row b.
Eigen::MatrixXi incidence_matrix(const HamiltonianGraph& graph);

// Exact rank over the rationals (fraction-free elimination).
int integer_rank(const Eigen::MatrixXi& matrix);

std::vector<std::int64_t> boundary(const HamiltonianGraph& graph, const Chain& chain);

Chain fundamental_cycle(const HamiltonianGraph& graph, const SpanningTree& tree,
                        std::size_t non_tree_edge);

// Unique chain inside the tree with boundary v_b - v_a.
Chain tree_path_chain(const HamiltonianGraph& graph, const SpanningTree& tree, int a, int b);

DirectedGraph directed_graph(const HamiltonianGraph& graph);

}  // namespace pathenc
