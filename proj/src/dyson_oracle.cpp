#include "pathenc/dyson_oracle.hpp"

#include <string>

#include "pathenc/error.hpp"

namespace pathenc {

namespace {

void extend(const HamiltonianGraph& graph, std::vector<Pathway>& level, bool allow_rabi_flop,
            std::size_t cap, std::size_t& produced) {
  std::vector<Pathway> next;
  for (const Pathway& p : level) {
    const int last = p.states.back();
    const int before = p.states.size() >= 2 ? p.states[p.states.size() - 2] : -1;
    for (int w : graph.neighbors(last)) {
      if (!allow_rabi_flop && w == before) continue;
      if (++produced > cap) {
        throw Error(ErrorKind::EnumerationOverflow, "pathway enumeration exceeded " + std::to_string(cap));
      }
      Pathway q = p;
      q.states.push_back(w);
      next.push_back(std::move(q));
    }
  }
  level = std::move(next);
}

}  // namespace

std::vector<Pathway> enumerate_pathways(const HamiltonianGraph& graph, int a, int b, int max_order,
                                        bool allow_rabi_flop, std::size_t cap) {
  const int d = graph.vertex_count();
  if (a < 0 || b < 0 || a >= d || b >= d) throw Error(ErrorKind::InvalidTransition, "state out of range");
  std::vector<Pathway> out;
  std::vector<Pathway> level{Pathway{{a}}};
  std::size_t produced = 0;
  for (int order = 0; order <= max_order && !level.empty(); ++order) {
    if (order > 0) extend(graph, level, allow_rabi_flop, cap, produced);
    for (const Pathway& p : level) {
      if (p.states.back() == b) out.push_back(p);
    }
  }
  return out;
}

Complex pathway_amplitude(const QuantumSystem& system, const ControlField& field, const Pathway& pathway,
                          int substeps) {
  if (substeps < 1) throw Error(ErrorKind::InvalidField, "substeps must be >= 1");
  if (field.channels() != system.dipole_count()) {
    throw Error(ErrorKind::ShapeMismatch, "control channel count does not match dipole count");
  }
  const auto& states = pathway.states;
  if (states.empty()) throw Error(ErrorKind::InvalidTransition, "empty pathway");
  const int d = system.dimension();
  for (int s : states) {
    if (s < 0 || s >= d) throw Error(ErrorKind::InvalidTransition, "pathway state out of range");
  }
  const std::size_t order = pathway.order();
  if (order == 0) return {1.0, 0.0};

  // Couplings mu_c(to, from) and Bohr frequencies of each hop.
  std::vector<std::vector<Complex>> coupling(order, std::vector<Complex>(system.dipole_count()));
  std::vector<double> bohr(order);
  for (std::size_t m = 0; m < order; ++m) {
    const int from = states[m];
    const int to = states[m + 1];
    bool allowed = false;
    for (std::size_t c = 0; c < system.dipole_count(); ++c) {
      coupling[m][c] = system.dipoles()[c](to, from);
      allowed = allowed || coupling[m][c] != Complex{};
    }
    if (!allowed) {
      throw Error(ErrorKind::InvalidTransition, "no transition between states " + std::to_string(from + 1) +
                                                    " and " + std::to_string(to + 1));
    }
    bohr[m] = system.energies()[static_cast<std::size_t>(to)] - system.energies()[static_cast<std::size_t>(from)];
  }

  const double h = field.dt() / substeps;
  const Complex i_unit{0.0, 1.0};
  std::vector<Complex> amp(order + 1, Complex{});
  std::vector<Complex> prev(order + 1, Complex{});
  amp[0] = prev[0] = 1.0;
  std::vector<Complex> strength(order);
  std::size_t k = 0;
  for (std::size_t n = 0; n < field.steps(); ++n) {
    for (std::size_t m = 0; m < order; ++m) {
      Complex s{};
      for (std::size_t c = 0; c < system.dipole_count(); ++c) s += coupling[m][c] * field.sample(c, n);
      strength[m] = i_unit * s;
    }
    for (int q = 0; q < substeps; ++q, ++k) {
      const double t0 = h * static_cast<double>(k);
      const double t1 = h * static_cast<double>(k + 1);
      prev = amp;
      for (std::size_t m = 1; m <= order; ++m) {
        const Complex v0 = strength[m - 1] * std::polar(1.0, bohr[m - 1] * t0);
        const Complex v1 = strength[m - 1] * std::polar(1.0, bohr[m - 1] * t1);
        amp[m] = prev[m] + 0.5 * h * (v0 * prev[m - 1] + v1 * amp[m - 1]);
      }
    }
  }
  return amp[order];
}

OracleResult class_amplitude_oracle(const QuantumSystem& system, const ControlField& field,
                                    const EncodingScheme& scheme, std::int64_t target_m, int a, int b,
                                    int max_order, int substeps) {
  OracleResult result{{0.0, 0.0}, false, 0};
  const auto pathways = enumerate_pathways(scheme.graph(), a, b, max_order + 2, true);
  for (const Pathway& p : pathways) {
    if (pathway_frequency(scheme, p) != target_m) continue;
    if (static_cast<int>(p.order()) > max_order) {
      result.truncated = true;
      continue;
    }
    result.amplitude += pathway_amplitude(system, field, p, substeps);
    ++result.pathways;
  }
  return result;
}

}  // namespace pathenc
