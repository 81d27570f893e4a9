#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pathenc/decoder.hpp"
#include "pathenc/encoder.hpp"
#include "pathenc/hamiltonian_graph.hpp"
#include "pathenc/quantum_system.hpp"

namespace pathenc {

struct PathwayAmplitude {
  Pathway pathway;
  Complex amplitude;
  std::size_t order() const { return pathway.order(); }
};

/// Every pathway a -> b of order <= max_order in breadth-first order (by
/// order, then lexicographically). Without Rabi flops no x -> y -> x
/// segment is allowed.
std::vector<Pathway> enumerate_pathways(const HamiltonianGraph& graph, int a, int b, int max_order,
                                        bool allow_rabi_flop, std::size_t cap = 1'000'000);

/// Nested time-ordered integral of one Dyson term, accumulated with the
/// trapezoidal rule on the field grid split into `substeps` per sample.
Complex pathway_amplitude(const QuantumSystem& system, const ControlField& field, const Pathway& pathway,
                          int substeps = 1);

struct OracleResult {
  Complex amplitude;
  bool truncated = false;      // the class has members above max_order
  std::size_t pathways = 0;    // members summed
};

OracleResult class_amplitude_oracle(const QuantumSystem& system, const ControlField& field,
                                    const EncodingScheme& scheme, std::int64_t target_m, int a, int b,
                                    int max_order, int substeps = 1);

}  // namespace pathenc
