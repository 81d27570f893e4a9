#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "pathenc/hamiltonian_graph.hpp"
#include "pathenc/quantum_system.hpp"

namespace pathenc {

enum class EncodingMode { HermitianFull, HermitianOHPE, NonHermitianFull, NonHermitianNHPE };

bool is_hermitian_mode(EncodingMode mode);
std::string_view to_string(EncodingMode mode);

struct GammaScale {
  double gamma0;
  int exponent;  // 2^exponent sample points
};

// gamma0 = 2 pi / 2^N with N the smallest integer such that 2^N >= base^slots.
GammaScale compute_gamma0(int base, int encoded_slots);

/// One modulated transition. Hermitian modes only use forward slots and apply
/// +gamma below the diagonal and -gamma above it; non-Hermitian modes treat
/// the two arcs of an edge independently.
struct Slot {
  std::size_t edge;
  bool forward = true;
  friend bool operator==(const Slot&, const Slot&) = default;
};

class EncodingScheme {
 public:
  EncodingScheme(EncodingMode mode, int base, std::vector<Slot> slots, HamiltonianGraph graph,
                 SpanningTree tree);

  EncodingMode mode() const { return mode_; }
  bool hermitian() const { return is_hermitian_mode(mode_); }
  int base() const { return base_; }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t slot_count() const { return slots_.size(); }
  double gamma0() const { return gamma0_; }
  int exponent() const { return exponent_; }
  std::uint64_t sample_count() const { return std::uint64_t{1} << exponent_; }
  const HamiltonianGraph& graph() const { return graph_; }
  const SpanningTree& tree() const { return tree_; }

  // base^k, the frequency multiple carried by slot k (0-based).
  std::int64_t weight(std::size_t slot) const { return weights_[slot]; }
  // Frequency multiple of a forward / backward traversal of `edge`
  // (0 when the traversal is not modulated).
  std::int64_t forward_weight(std::size_t edge) const { return forward_weights_[edge]; }
  std::int64_t backward_weight(std::size_t edge) const { return backward_weights_[edge]; }
  // Slot index of an edge's forward / backward arc, or -1.
  int forward_slot(std::size_t edge) const { return forward_slot_[edge]; }
  int backward_slot(std::size_t edge) const { return backward_slot_[edge]; }

 private:
  EncodingMode mode_;
  int base_;
  std::vector<Slot> slots_;
  HamiltonianGraph graph_;
  SpanningTree tree_;
  double gamma0_;
  int exponent_;
  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> forward_weights_;
  std::vector<std::int64_t> backward_weights_;
  std::vector<int> forward_slot_;
  std::vector<int> backward_slot_;
};

EncodingScheme assign_ohpe(const HamiltonianGraph& graph, const SpanningTree& tree, int base);
EncodingScheme assign_nhpe(const HamiltonianGraph& graph, const SpanningTree& tree, int base);
EncodingScheme assign_full(const HamiltonianGraph& graph, int base, bool hermitian);

// Builds the scheme for `mode`; the tree is ignored by the full encodings
// except as the reference for signature expansion.
EncodingScheme make_scheme(EncodingMode mode, const HamiltonianGraph& graph,
                           const SpanningTree& tree, int base);

/// mu_c(s): every encoded matrix position multiplied by exp(i gamma s).
std::vector<CMatrix> modulated_dipoles(const QuantumSystem& system, const EncodingScheme& scheme,
                                       double s);

/// mu_c(s_j) at grid point s_j = j. Phases are reduced modulo 2^N in integer
/// arithmetic, so j = 0 returns the unmodulated dipoles bit for bit.
std::vector<CMatrix> modulated_dipoles_at(const QuantumSystem& system,
                                          const EncodingScheme& scheme, std::uint64_t grid_index);

// Sample-count ratio 2^(N_full - N_reduced) against the matching full encoding.
std::uint64_t cost_ratio_vs_full(const EncodingScheme& scheme);

}  // namespace pathenc
