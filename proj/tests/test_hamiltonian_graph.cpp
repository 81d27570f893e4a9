#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "pathenc/error.hpp"
#include "pathenc/hamiltonian_graph.hpp"
#include "support.hpp"

using namespace pathenc;

namespace {

// All chains with coefficients in {-1, 0, 1}, +1 on `edge`, 0 on every other
// non-tree edge, and zero boundary.
std::vector<Chain> brute_force_cycles(const HamiltonianGraph& graph, const SpanningTree& tree, std::size_t edge) {
  const std::size_t r = graph.edge_count();
  std::vector<std::size_t> free_edges = tree.edge_indices;
  std::vector<Chain> found;
  std::size_t combos = 1;
  for (std::size_t k = 0; k < free_edges.size(); ++k) combos *= 3;
  for (std::size_t code = 0; code < combos; ++code) {
    Chain c{std::vector<std::int64_t>(r, 0)};
    c.coefficients[edge] = 1;
    std::size_t rest = code;
    for (std::size_t idx : free_edges) {
      c.coefficients[idx] = static_cast<std::int64_t>(rest % 3) - 1;
      rest /= 3;
    }
    const auto b = boundary(graph, c);
    if (std::all_of(b.begin(), b.end(), [](std::int64_t v) { return v == 0; })) found.push_back(c);
  }
  return found;
}

int float_rank(const Eigen::MatrixXi& m) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m.cast<double>());
  return static_cast<int>(lu.rank());
}

}  // namespace

TEST_CASE("graphs of the bundled systems") {
  const auto tri = build_graph(testing::three_level());
  CHECK(tri.vertex_count() == 3);
  CHECK(tri.edge_count() == 3);
  const auto cube = build_graph(testing::three_qubit());
  CHECK(cube.vertex_count() == 8);
  CHECK(cube.edge_count() == 12);
  CHECK(cube == testing::cube());
  CMatrix sx(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  CHECK(build_graph(build_system({0.0, 1.0}, {sx})).edge_count() == 1);
}

TEST_CASE("graph construction normalizes and validates edges") {
  const HamiltonianGraph g(3, {{2, 1}, {0, 1}});
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(g.edge_index(2, 1) == 1u);
  CHECK_FALSE(g.edge_index(0, 2).has_value());
  CHECK_THROWS_AS(HamiltonianGraph(3, {{1, 1}}), Error);
  CHECK_THROWS_AS(HamiltonianGraph(3, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(HamiltonianGraph(3, {{0, 3}}), Error);
}

TEST_CASE("breadth-first spanning trees") {
  const auto tri = testing::triangle();
  const SpanningTree t = spanning_tree(tri);
  CHECK(t.edge_indices == std::vector<std::size_t>{0, 1});  // (1,2), (1,3)
  const auto cube = testing::cube();
  const SpanningTree ct = spanning_tree(cube);
  CHECK(ct.edge_indices.size() == 7);
  CHECK(non_tree_edges(cube, ct).size() == 5);
  const HamiltonianGraph path(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(spanning_tree(path).edge_indices.size() == 3);
  CHECK(non_tree_edges(path, spanning_tree(path)).empty());
  try {
    spanning_tree(HamiltonianGraph(4, {{0, 1}, {2, 3}}));
    FAIL("disconnected graph accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DisconnectedGraph);
  }
}

TEST_CASE("explicit trees are validated") {
  const auto cube = testing::cube();
  const SpanningTree t = spanning_tree_from_edges(cube, testing::cube_tree_edges());
  CHECK(t.edge_indices.size() == 7);
  std::vector<Edge> encoded;
  for (std::size_t e : non_tree_edges(cube, t)) encoded.push_back(cube.edge(e));
  CHECK(encoded == std::vector<Edge>{{2, 3}, {2, 6}, {3, 7}, {4, 5}, {6, 7}});
  CHECK_THROWS_AS(spanning_tree_from_edges(testing::triangle(), {{0, 1}}), Error);
  CHECK_THROWS_AS(spanning_tree_from_edges(HamiltonianGraph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}),
                                           {{0, 1}, {1, 2}, {0, 2}}),
                  Error);
  CHECK_THROWS_AS(spanning_tree_from_edges(testing::triangle(), {{0, 1}, {0, 3}}), Error);
}

TEST_CASE("incidence matrices") {
  const auto single = HamiltonianGraph(2, {{0, 1}});
  const Eigen::MatrixXi d1 = incidence_matrix(single);
  CHECK(d1(0, 0) == -1);
  CHECK(d1(1, 0) == 1);
  const Eigen::MatrixXi dt = incidence_matrix(testing::triangle());
  CHECK(integer_rank(dt) == 2);
  CHECK(3 - integer_rank(dt) == 1);
  const Eigen::MatrixXi dc = incidence_matrix(testing::cube());
  CHECK(integer_rank(dc) == 7);
  CHECK(12 - integer_rank(dc) == 5);
}

TEST_CASE("rank and nullity on random connected graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> dd(2, 9);
    const int d = dd(rng);
    std::uniform_int_distribution<int> rr(d - 1, d * (d - 1) / 2);
    const int r = rr(rng);
    const auto g = testing::random_connected_graph(rng, d, r);
    const Eigen::MatrixXi inc = incidence_matrix(g);
    const int rank = integer_rank(inc);
    CHECK(rank == d - 1);
    CHECK(rank == float_rank(inc));
    CHECK(static_cast<int>(g.edge_count()) - rank == r - d + 1);
  }
}

TEST_CASE("triangle fundamental cycle") {
  const auto tri = testing::triangle();
  const SpanningTree t = spanning_tree(tri);
  const Chain c = fundamental_cycle(tri, t, 2);
  const auto expected = brute_force_cycles(tri, t, 2);
  REQUIRE(expected.size() == 1);
  CHECK(c == expected[0]);
  CHECK(c.coefficients == std::vector<std::int64_t>{1, -1, 1});
  try {
    fundamental_cycle(tri, t, 0);
    FAIL("tree edge accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EdgeInTree);
  }
}

TEST_CASE("cube fundamental cycles form an independent kernel basis") {
  const auto cube = testing::cube();
  const SpanningTree t = spanning_tree_from_edges(cube, testing::cube_tree_edges());
  const auto encoded = non_tree_edges(cube, t);
  Eigen::MatrixXi basis(12, static_cast<Eigen::Index>(encoded.size()));
  for (std::size_t k = 0; k < encoded.size(); ++k) {
    const Chain c = fundamental_cycle(cube, t, encoded[k]);
    const auto oracle = brute_force_cycles(cube, t, encoded[k]);
    REQUIRE(oracle.size() == 1);
    CHECK(c == oracle[0]);
    for (std::size_t e = 0; e < 12; ++e) basis(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(k)) =
        static_cast<int>(c.coefficients[e]);
  }
  CHECK(integer_rank(basis) == 5);
  const Eigen::MatrixXi zero = incidence_matrix(cube) * basis;
  CHECK(zero.cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("fundamental cycles on random graphs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = testing::random_connected_graph(rng, 6, 10);
    const auto t = spanning_tree(g);
    const auto encoded = non_tree_edges(g, t);
    CHECK(encoded.size() + t.edge_indices.size() == g.edge_count());
    for (std::size_t e : encoded) {
      const Chain c = fundamental_cycle(g, t, e);
      for (auto v : boundary(g, c)) CHECK(v == 0);
      for (std::size_t other : encoded) CHECK(c.coefficients[other] == (other == e ? 1 : 0));
    }
  }
}

TEST_CASE("tree path chains") {
  const auto tri = testing::triangle();
  const SpanningTree bfs = spanning_tree(tri);
  CHECK(tree_path_chain(tri, bfs, 1, 1).coefficients == std::vector<std::int64_t>{0, 0, 0});
  CHECK(tree_path_chain(tri, bfs, 0, 1).coefficients == std::vector<std::int64_t>{1, 0, 0});
  const SpanningTree ladder = spanning_tree_from_edges(tri, {{0, 1}, {1, 2}});
  CHECK(tree_path_chain(tri, ladder, 0, 2).coefficients == std::vector<std::int64_t>{1, 0, 1});
  CHECK(tree_path_chain(tri, ladder, 2, 0).coefficients == std::vector<std::int64_t>{-1, 0, -1});

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testing::random_connected_graph(rng, 7, 11);
    const auto t = spanning_tree(g);
    std::uniform_int_distribution<int> v(0, 6);
    const int a = v(rng), b = v(rng), c = v(rng);
    Chain sum = tree_path_chain(g, t, a, b);
    const Chain bc = tree_path_chain(g, t, b, c);
    for (std::size_t e = 0; e < sum.coefficients.size(); ++e) sum.coefficients[e] += bc.coefficients[e];
    auto bd = boundary(g, sum);
    for (int x = 0; x < 7; ++x) {
      CHECK(bd[static_cast<std::size_t>(x)] == (x == c ? 1 : 0) - (x == a ? 1 : 0));
    }
  }
}

TEST_CASE("directed graphs list forward then backward arcs") {
  CHECK(directed_graph(testing::triangle()).arcs.size() == 6);
  CHECK(directed_graph(HamiltonianGraph(2, {{0, 1}})).arcs.size() == 2);
  const auto dg = directed_graph(testing::cube());
  REQUIRE(dg.arcs.size() == 24);
  for (std::size_t k = 0; k < 12; ++k) {
    CHECK(dg.arcs[k].forward);
    CHECK(dg.arcs[k].edge == k);
    CHECK(dg.arcs[k].from < dg.arcs[k].to);
    CHECK_FALSE(dg.arcs[k + 12].forward);
    CHECK(dg.arcs[k + 12].from == dg.arcs[k].to);
  }
}
