#include "pathenc/encoder.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pathenc/error.hpp"

namespace pathenc {

namespace {

constexpr int kMaxExponent = 62;

void require_base(int base, bool hermitian) {
  if (hermitian) {
    if (base >= 2 && base % 2 == 0) {
      throw Error(ErrorKind::EvenBase, "Hermitian encodings need an odd base (B = 2 m0 + 1), got " +
                                           std::to_string(base));
    }
    if (base < 3) throw Error(ErrorKind::InvalidBase, "Hermitian base must be an odd integer >= 3");
  } else if (base < 2) {
    throw Error(ErrorKind::InvalidBase, "base must be >= 2");
  }
}

void require_connected(const HamiltonianGraph& graph) {
  if (!graph.connected()) throw Error(ErrorKind::DisconnectedGraph, "Hamiltonian graph is not connected");
}

Complex unit_phase(std::uint64_t index, int exponent) {
  if (index == 0) return {1.0, 0.0};
  const double turns = static_cast<double>(index) / std::ldexp(1.0, exponent);
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

template <typename PhaseOf>
std::vector<CMatrix> apply_modulation(const QuantumSystem& system, const EncodingScheme& scheme,
                                      PhaseOf phase_of) {
  if (!(scheme.graph() == build_graph(system))) {
    throw Error(ErrorKind::SchemeSystemMismatch, "encoding scheme was built for a different graph");
  }
  std::vector<CMatrix> out = system.dipoles();
  for (std::size_t k = 0; k < scheme.slot_count(); ++k) {
    const Slot& slot = scheme.slots()[k];
    const Edge& e = scheme.graph().edge(slot.edge);
    const auto [factor, skip] = phase_of(scheme.weight(k));
    if (skip) continue;
    for (CMatrix& mu : out) {
      if (scheme.hermitian()) {
        mu(e.head, e.tail) *= factor;
        mu(e.tail, e.head) *= std::conj(factor);
      } else if (slot.forward) {
        mu(e.head, e.tail) *= factor;
      } else {
        mu(e.tail, e.head) *= factor;
      }
    }
  }
  return out;
}

}  // namespace

bool is_hermitian_mode(EncodingMode mode) {
  return mode == EncodingMode::HermitianFull || mode == EncodingMode::HermitianOHPE;
}

std::string_view to_string(EncodingMode mode) {
  switch (mode) {
    case EncodingMode::HermitianFull: return "full-h";
    case EncodingMode::HermitianOHPE: return "ohpe";
    case EncodingMode::NonHermitianFull: return "full-nh";
    case EncodingMode::NonHermitianNHPE: return "nhpe";
  }
  return "unknown";
}

GammaScale compute_gamma0(int base, int encoded_slots) {
  if (base < 2) throw Error(ErrorKind::InvalidBase, "base must be >= 2");
  if (encoded_slots < 1) throw Error(ErrorKind::NoEncodedEdges, "at least one slot is required");
  // Smallest N with 2^N >= base^slots, in exact integer arithmetic.
  unsigned __int128 power = 1;
  for (int k = 0; k < encoded_slots; ++k) {
    power *= static_cast<unsigned>(base);
    if (power > (static_cast<unsigned __int128>(1) << kMaxExponent)) {
      throw Error(ErrorKind::InvalidBase, "base^slots exceeds 2^" + std::to_string(kMaxExponent));
    }
  }
  int exponent = 0;
  while ((static_cast<unsigned __int128>(1) << exponent) < power) ++exponent;
  return {2.0 * std::numbers::pi / std::ldexp(1.0, exponent), exponent};
}

EncodingScheme::EncodingScheme(EncodingMode mode, int base, std::vector<Slot> slots,
                               HamiltonianGraph graph, SpanningTree tree)
    : mode_(mode), base_(base), slots_(std::move(slots)), graph_(std::move(graph)), tree_(std::move(tree)) {
  require_base(base_, hermitian());
  if (slots_.empty()) {
    throw Error(ErrorKind::NoEncodedEdges,
                "no transitions to encode: the graph is a tree and every pathway class is the default one");
  }
  const auto scale = compute_gamma0(base_, static_cast<int>(slots_.size()));
  gamma0_ = scale.gamma0;
  exponent_ = scale.exponent;
  const std::size_t r = graph_.edge_count();
  forward_weights_.assign(r, 0);
  backward_weights_.assign(r, 0);
  forward_slot_.assign(r, -1);
  backward_slot_.assign(r, -1);
  std::int64_t w = 1;
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    const Slot& slot = slots_[k];
    if (slot.edge >= r) throw Error(ErrorKind::InvalidGraph, "slot references a missing edge");
    if (hermitian() && !slot.forward) throw Error(ErrorKind::ModeMismatch, "Hermitian slots are undirected");
    auto& owner = slot.forward ? forward_slot_[slot.edge] : backward_slot_[slot.edge];
    if (owner >= 0) throw Error(ErrorKind::InvalidGraph, "transition encoded twice");
    owner = static_cast<int>(k);
    weights_.push_back(w);
    if (slot.forward) {
      forward_weights_[slot.edge] = w;
      if (hermitian()) backward_weights_[slot.edge] = -w;
    } else {
      backward_weights_[slot.edge] = w;
    }
    w *= base_;
  }
}

EncodingScheme assign_ohpe(const HamiltonianGraph& graph, const SpanningTree& tree, int base) {
  require_base(base, true);
  require_connected(graph);
  std::vector<Slot> slots;
  for (std::size_t idx : non_tree_edges(graph, tree)) slots.push_back(Slot{idx, true});
  return EncodingScheme(EncodingMode::HermitianOHPE, base, std::move(slots), graph, tree);
}

EncodingScheme assign_nhpe(const HamiltonianGraph& graph, const SpanningTree& tree, int base) {
  require_base(base, false);
  require_connected(graph);
  std::vector<Slot> slots;
  for (std::size_t idx : non_tree_edges(graph, tree)) slots.push_back(Slot{idx, true});
  for (std::size_t idx = 0; idx < graph.edge_count(); ++idx) slots.push_back(Slot{idx, false});
  return EncodingScheme(EncodingMode::NonHermitianNHPE, base, std::move(slots), graph, tree);
}

static std::vector<Slot> every_transition(const HamiltonianGraph& graph, bool hermitian) {
  std::vector<Slot> slots;
  for (std::size_t idx = 0; idx < graph.edge_count(); ++idx) slots.push_back(Slot{idx, true});
  if (!hermitian) {
    for (std::size_t idx = 0; idx < graph.edge_count(); ++idx) slots.push_back(Slot{idx, false});
  }
  return slots;
}

EncodingScheme assign_full(const HamiltonianGraph& graph, int base, bool hermitian) {
  SpanningTree tree = graph.connected() ? spanning_tree(graph) : SpanningTree{};
  return make_scheme(hermitian ? EncodingMode::HermitianFull : EncodingMode::NonHermitianFull, graph, tree,
                     base);
}

EncodingScheme make_scheme(EncodingMode mode, const HamiltonianGraph& graph, const SpanningTree& tree,
                           int base) {
  switch (mode) {
    case EncodingMode::HermitianOHPE: return assign_ohpe(graph, tree, base);
    case EncodingMode::NonHermitianNHPE: return assign_nhpe(graph, tree, base);
    case EncodingMode::HermitianFull:
    case EncodingMode::NonHermitianFull: {
      const bool hermitian = is_hermitian_mode(mode);
      require_base(base, hermitian);
      return EncodingScheme(mode, base, every_transition(graph, hermitian), graph, tree);
    }
  }
  throw Error(ErrorKind::ModeMismatch, "unknown encoding mode");
}

std::vector<CMatrix> modulated_dipoles(const QuantumSystem& system, const EncodingScheme& scheme, double s) {
  return apply_modulation(system, scheme, [&](std::int64_t weight) {
    const double angle = static_cast<double>(weight) * scheme.gamma0() * s;
    return std::pair{std::polar(1.0, angle), angle == 0.0};
  });
}

std::vector<CMatrix> modulated_dipoles_at(const QuantumSystem& system, const EncodingScheme& scheme,
                                          std::uint64_t grid_index) {
  const std::uint64_t mask = scheme.sample_count() - 1;
  return apply_modulation(system, scheme, [&](std::int64_t weight) {
    const auto product = static_cast<unsigned __int128>(static_cast<std::uint64_t>(weight)) * grid_index;
    const auto index = static_cast<std::uint64_t>(product) & mask;
    return std::pair{unit_phase(index, scheme.exponent()), index == 0};
  });
}

std::uint64_t cost_ratio_vs_full(const EncodingScheme& scheme) {
  const bool hermitian = scheme.hermitian();
  const std::size_t r = scheme.graph().edge_count();
  const int full_slots = static_cast<int>(hermitian ? r : 2 * r);
  const int full_exponent = compute_gamma0(scheme.base(), full_slots).exponent;
  return std::uint64_t{1} << (full_exponent - scheme.exponent());
}

}  // namespace pathenc
