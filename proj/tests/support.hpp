#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pathenc/hamiltonian_graph.hpp"
#include "pathenc/pulse_synth.hpp"
#include "pathenc/quantum_system.hpp"

namespace testing {

using pathenc::CMatrix;
using pathenc::Complex;

inline pathenc::QuantumSystem three_level() {
  CMatrix mu(3, 3);
  mu << 0.0, 0.061, -0.013, 0.061, 0.0, 0.083, -0.013, 0.083, 0.0;
  return pathenc::QuantumSystem({0.0, 0.0082, 0.016}, {mu});
}

// Nearest-neighbour chain 1 - 2 - 3 with the same levels.
inline pathenc::QuantumSystem ladder() {
  CMatrix mu(3, 3);
  mu << 0.0, 0.061, 0.0, 0.061, 0.0, 0.083, 0.0, 0.083, 0.0;
  return pathenc::QuantumSystem({0.0, 0.0082, 0.016}, {mu});
}

// Three coupled spins, basis index = 4 q1 + 2 q2 + q3 with |0> = spin up.
inline pathenc::QuantumSystem three_qubit() {
  constexpr double tp = 2.0 * std::numbers::pi;
  const double w[3] = {tp * 12039.6, tp * -6855.5, tp * -12039.0};
  const double j12 = tp * 54.0, j13 = tp * -1.3, j23 = tp * 35.0;
  std::vector<double> energies(8);
  CMatrix mx = CMatrix::Zero(8, 8);
  CMatrix my = CMatrix::Zero(8, 8);
  for (int s = 0; s < 8; ++s) {
    double m[3];
    for (int k = 0; k < 3; ++k) m[k] = ((s >> (2 - k)) & 1) ? -0.5 : 0.5;
    energies[static_cast<std::size_t>(s)] =
        w[0] * m[0] + w[1] * m[1] + w[2] * m[2] + j12 * m[0] * m[1] + j13 * m[0] * m[2] + j23 * m[1] * m[2];
    for (int k = 0; k < 3; ++k) {
      const int t = s ^ (1 << (2 - k));
      mx(t, s) = 0.5;
      my(t, s) = ((s >> (2 - k)) & 1) ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
    }
  }
  return pathenc::QuantumSystem(energies, {mx, my});
}

// Spanning tree drawn for the cube in the worked qubit example (0-based).
inline std::vector<pathenc::Edge> cube_tree_edges() {
  return {{0, 1}, {0, 2}, {0, 4}, {1, 3}, {1, 5}, {4, 6}, {5, 7}};
}

inline pathenc::HamiltonianGraph triangle() { return pathenc::HamiltonianGraph(3, {{0, 1}, {0, 2}, {1, 2}}); }

inline pathenc::HamiltonianGraph cube() {
  std::vector<pathenc::Edge> edges;
  for (int s = 0; s < 8; ++s) {
    for (int k = 0; k < 3; ++k) {
      const int t = s | (1 << k);
      if (t != s) edges.push_back({s, t});
    }
  }
  return pathenc::HamiltonianGraph(8, edges);
}

// Random spanning path plus extra random edges, relabelled randomly.
inline pathenc::HamiltonianGraph random_connected_graph(std::mt19937_64& rng, int d, int r) {
  std::vector<int> order(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < d; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    const int u = order[static_cast<std::size_t>(pick(rng))];
    const int v = order[static_cast<std::size_t>(i)];
    edges.insert({std::min(u, v), std::max(u, v)});
  }
  std::uniform_int_distribution<int> vertex(0, d - 1);
  while (static_cast<int>(edges.size()) < r) {
    const int u = vertex(rng), v = vertex(rng);
    if (u != v) edges.insert({std::min(u, v), std::max(u, v)});
  }
  std::vector<pathenc::Edge> list;
  for (auto [u, v] : edges) list.push_back({u, v});
  return pathenc::HamiltonianGraph(d, list);
}

// Random Hermitian dipole supported on the graph's edges, plus random levels.
inline pathenc::QuantumSystem random_system(std::mt19937_64& rng, const pathenc::HamiltonianGraph& graph,
                                            double energy_scale = 0.02, double coupling = 0.08) {
  const int d = graph.vertex_count();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> energies(static_cast<std::size_t>(d));
  for (auto& e : energies) e = energy_scale * u(rng);
  CMatrix mu = CMatrix::Zero(d, d);
  for (const auto& e : graph.edges()) {
    const Complex v{coupling * u(rng), coupling * u(rng)};
    mu(e.tail, e.head) = v;
    mu(e.head, e.tail) = std::conj(v);
  }
  return pathenc::QuantumSystem(energies, {mu});
}

inline pathenc::ControlField random_field(std::mt19937_64& rng, double dt, std::size_t channels, std::size_t steps,
                                          double bound) {
  std::uniform_real_distribution<double> u(-bound, bound);
  std::vector<std::vector<double>> samples(channels, std::vector<double>(steps));
  for (auto& channel : samples) {
    for (auto& v : channel) v = u(rng);
  }
  return pathenc::ControlField(dt, samples);
}

// Synthesis parameters of the bundled three-level fixture.
inline pathenc::SynthesisConfig three_level_synthesis() {
  pathenc::SynthesisConfig config;
  config.initial = 0;
  config.target = 2;
  config.horizon = 20000.0;
  config.dt = 20.0;
  config.max_iterations = 800;
  config.target_infidelity = 1e-3;
  config.seed = 2;
  config.amplitude_bound = 0.0035;
  return config;
}

inline const pathenc::ControlField& three_level_pulse() {
  static const pathenc::ControlField field = pathenc::grape_optimize(three_level(), three_level_synthesis()).field;
  return field;
}

inline pathenc::SynthesisConfig three_qubit_synthesis() {
  pathenc::SynthesisConfig config;
  config.initial = 0;
  config.target = 1;
  config.horizon = 1e-3;
  config.dt = 1e-5;
  config.max_iterations = 300;
  config.target_infidelity = 1e-3;
  config.seed = 1;
  config.amplitude_bound = 2.0 * std::numbers::pi * 2000.0;
  return config;
}

// Dense reference: expm by diagonalization of a Hermitian matrix.
inline CMatrix hermitian_expm(const CMatrix& h, Complex factor) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXcd phases = (factor * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
