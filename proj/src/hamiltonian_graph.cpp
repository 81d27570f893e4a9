#include "pathenc/hamiltonian_graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "pathenc/error.hpp"
#include "pathenc/quantum_system.hpp"

namespace pathenc {

namespace {

std::string edge_label(const Edge& e) {
  return "(" + std::to_string(e.tail + 1) + "," + std::to_string(e.head + 1) + ")";
}

// Parent links of the tree rooted at `root`: parent_edge[v] is the tree edge
// leading from v toward the root.
struct RootedTree {
  std::vector<int> parent;
  std::vector<std::size_t> parent_edge;
  std::vector<int> depth;
};

RootedTree root_tree(const HamiltonianGraph& graph, const SpanningTree& tree, int root) {
  const int d = graph.vertex_count();
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(static_cast<std::size_t>(d));
  for (std::size_t idx : tree.edge_indices) {
    const Edge& e = graph.edge(idx);
    adj[static_cast<std::size_t>(e.tail)].emplace_back(e.head, idx);
    adj[static_cast<std::size_t>(e.head)].emplace_back(e.tail, idx);
  }
  RootedTree rooted{std::vector<int>(static_cast<std::size_t>(d), -1),
                    std::vector<std::size_t>(static_cast<std::size_t>(d), 0),
                    std::vector<int>(static_cast<std::size_t>(d), -1)};
  std::queue<int> queue;
  rooted.depth[static_cast<std::size_t>(root)] = 0;
  queue.push(root);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (auto [w, idx] : adj[static_cast<std::size_t>(v)]) {
      if (rooted.depth[static_cast<std::size_t>(w)] >= 0) continue;
      rooted.depth[static_cast<std::size_t>(w)] = rooted.depth[static_cast<std::size_t>(v)] + 1;
      rooted.parent[static_cast<std::size_t>(w)] = v;
      rooted.parent_edge[static_cast<std::size_t>(w)] = idx;
      queue.push(w);
    }
  }
  return rooted;
}

}  // namespace

HamiltonianGraph::HamiltonianGraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 1) throw Error(ErrorKind::InvalidGraph, "graph needs at least one vertex");
  for (Edge& e : edges_) {
    if (e.tail == e.head) throw Error(ErrorKind::InvalidGraph, "self-loop " + edge_label(e));
    if (e.tail > e.head) std::swap(e.tail, e.head);
    if (e.tail < 0 || e.head >= vertex_count_) {
      throw Error(ErrorKind::InvalidGraph, "edge " + edge_label(e) + " references a missing vertex");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw Error(ErrorKind::InvalidGraph, "duplicate edge");
  }
  adjacency_.resize(static_cast<std::size_t>(vertex_count_));
  for (const Edge& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.tail)].push_back(e.head);
    adjacency_[static_cast<std::size_t>(e.head)].push_back(e.tail);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

std::optional<std::size_t> HamiltonianGraph::edge_index(int u, int v) const {
  Edge key{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || !(*it == key)) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

bool HamiltonianGraph::connected() const {
  std::vector<bool> seen(static_cast<std::size_t>(vertex_count_), false);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = true;
  int count = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int w : neighbors(v)) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      ++count;
      queue.push(w);
    }
  }
  return count == vertex_count_;
}

bool SpanningTree::contains(std::size_t edge) const {
  return std::binary_search(edge_indices.begin(), edge_indices.end(), edge);
}

HamiltonianGraph build_graph(const QuantumSystem& system) {
  std::vector<Edge> edges;
  edges.reserve(system.transitions().size());
  for (auto [i, j] : system.transitions()) edges.push_back(Edge{i, j});
  return HamiltonianGraph(system.dimension(), std::move(edges));
}

SpanningTree spanning_tree(const HamiltonianGraph& graph) {
  const int d = graph.vertex_count();
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  SpanningTree tree;
  std::queue<int> queue;
  queue.push(0);
  seen[0] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int w : graph.neighbors(v)) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      tree.edge_indices.push_back(*graph.edge_index(v, w));
      queue.push(w);
    }
  }
  if (static_cast<int>(tree.edge_indices.size()) != d - 1) {
    throw Error(ErrorKind::DisconnectedGraph, "Hamiltonian graph is not connected");
  }
  std::sort(tree.edge_indices.begin(), tree.edge_indices.end());
  return tree;
}

SpanningTree spanning_tree_from_edges(const HamiltonianGraph& graph, const std::vector<Edge>& edges) {
  if (!graph.connected()) throw Error(ErrorKind::DisconnectedGraph, "Hamiltonian graph is not connected");
  const int d = graph.vertex_count();
  if (static_cast<int>(edges.size()) != d - 1) {
    throw Error(ErrorKind::InvalidTree, "a spanning tree of " + std::to_string(d) + " vertices needs " +
                                            std::to_string(d - 1) + " edges");
  }
  // Union-find keeps the check for cycles linear.
  std::vector<int> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  SpanningTree tree;
  for (const Edge& e : edges) {
    auto idx = graph.edge_index(e.tail, e.head);
    if (!idx) throw Error(ErrorKind::InvalidTree, "tree edge " + edge_label(e) + " is not a transition");
    const int ra = find(e.tail);
    const int rb = find(e.head);
    if (ra == rb) throw Error(ErrorKind::InvalidTree, "tree edges contain a cycle at " + edge_label(e));
    parent[static_cast<std::size_t>(ra)] = rb;
    tree.edge_indices.push_back(*idx);
  }
  std::sort(tree.edge_indices.begin(), tree.edge_indices.end());
  return tree;
}

std::vector<std::size_t> non_tree_edges(const HamiltonianGraph& graph, const SpanningTree& tree) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    if (!tree.contains(i)) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXi incidence_matrix(const HamiltonianGraph& graph) {
  Eigen::MatrixXi d = Eigen::MatrixXi::Zero(graph.vertex_count(), static_cast<Eigen::Index>(graph.edge_count()));
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    const Edge& e = graph.edge(i);
    d(e.tail, static_cast<Eigen::Index>(i)) = -1;
    d(e.head, static_cast<Eigen::Index>(i)) = 1;
  }
  return d;
}

int integer_rank(const Eigen::MatrixXi& matrix) {
  // Bareiss elimination; every intermediate value is a minor of the input.
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> a = matrix.cast<std::int64_t>();
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  std::int64_t previous_pivot = 1;
  Eigen::Index rank = 0;
  for (Eigen::Index col = 0; col < cols && rank < rows; ++col) {
    Eigen::Index pivot_row = -1;
    for (Eigen::Index r = rank; r < rows; ++r) {
      if (a(r, col) != 0) {
        pivot_row = r;
        break;
      }
    }
    if (pivot_row < 0) continue;
    a.row(rank).swap(a.row(pivot_row));
    const std::int64_t pivot = a(rank, col);
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      for (Eigen::Index c = col + 1; c < cols; ++c) {
        a(r, c) = (pivot * a(r, c) - a(r, col) * a(rank, c)) / previous_pivot;
      }
      a(r, col) = 0;
    }
    previous_pivot = pivot;
    ++rank;
  }
  return static_cast<int>(rank);
}

std::vector<std::int64_t> boundary(const HamiltonianGraph& graph, const Chain& chain) {
  if (chain.coefficients.size() != graph.edge_count()) {
    throw Error(ErrorKind::ShapeMismatch, "chain length does not match edge count");
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(graph.vertex_count()), 0);
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    const Edge& e = graph.edge(i);
    out[static_cast<std::size_t>(e.head)] += chain.coefficients[i];
    out[static_cast<std::size_t>(e.tail)] -= chain.coefficients[i];
  }
  return out;
}

Chain tree_path_chain(const HamiltonianGraph& graph, const SpanningTree& tree, int a, int b) {
  const int d = graph.vertex_count();
  if (a < 0 || b < 0 || a >= d || b >= d) {
    throw Error(ErrorKind::InvalidTransition, "tree path endpoint out of range");
  }
  Chain chain{std::vector<std::int64_t>(graph.edge_count(), 0)};
  if (a == b) return chain;
  const RootedTree rooted = root_tree(graph, tree, a);
  if (rooted.depth[static_cast<std::size_t>(b)] < 0) {
    throw Error(ErrorKind::DisconnectedGraph, "tree does not connect the requested states");
  }
  // Walk from b back to the root a; each hop parent -> v is traversed forward in time.
  for (int v = b; v != a; v = rooted.parent[static_cast<std::size_t>(v)]) {
    const int from = rooted.parent[static_cast<std::size_t>(v)];
    const std::size_t idx = rooted.parent_edge[static_cast<std::size_t>(v)];
    chain.coefficients[idx] += graph.edge(idx).tail == from ? 1 : -1;
  }
  return chain;
}

Chain fundamental_cycle(const HamiltonianGraph& graph, const SpanningTree& tree,
                        std::size_t non_tree_edge) {
  if (non_tree_edge >= graph.edge_count()) {
    throw Error(ErrorKind::InvalidGraph, "edge index out of range");
  }
  if (tree.contains(non_tree_edge)) {
    throw Error(ErrorKind::EdgeInTree, "edge " + edge_label(graph.edge(non_tree_edge)) + " is a tree edge");
  }
  const Edge& e = graph.edge(non_tree_edge);
  Chain chain = tree_path_chain(graph, tree, e.head, e.tail);
  chain.coefficients[non_tree_edge] += 1;
  return chain;
}

DirectedGraph directed_graph(const HamiltonianGraph& graph) {
  DirectedGraph out{graph.vertex_count(), {}};
  out.arcs.reserve(2 * graph.edge_count());
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    out.arcs.push_back(Arc{graph.edge(i).tail, graph.edge(i).head, i, true});
  }
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    out.arcs.push_back(Arc{graph.edge(i).head, graph.edge(i).tail, i, false});
  }
  return out;
}

}  // namespace pathenc
