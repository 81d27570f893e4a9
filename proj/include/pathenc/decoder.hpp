#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "pathenc/encoder.hpp"
#include "pathenc/hamiltonian_graph.hpp"
#include "pathenc/quantum_system.hpp"

namespace pathenc {

/// Fourier coefficients of U_ba(T; s_j) over the 2^N grid s_j = j.
/// Bin k holds the amplitude of frequency k gamma0; Hermitian tables read
/// bins k >= 2^(N-1) as the negative frequency k - 2^N.
class AmplitudeTable {
 public:
  AmplitudeTable(std::vector<Complex> bins, bool hermitian, int initial = 0, int final = 0);

  bool hermitian() const { return hermitian_; }
  int exponent() const { return exponent_; }
  std::size_t size() const { return bins_.size(); }
  int initial() const { return initial_; }
  int final_state() const { return final_; }
  const std::vector<Complex>& bins() const { return bins_; }

  std::int64_t frequency_of_bin(std::size_t bin) const;
  std::size_t bin_of_frequency(std::int64_t m) const;  // m taken modulo 2^N
  Complex amplitude(std::int64_t m) const { return bins_[bin_of_frequency(m)]; }
  Complex total() const;
  // f_j = sum_m amp(m) e^{2 pi i m j / 2^N}.
  std::vector<Complex> reconstruct() const;

 private:
  std::vector<Complex> bins_;
  bool hermitian_;
  int exponent_;
  int initial_;
  int final_;
};

/// Normalized DFT: amp(m) = 2^-N sum_j f_j e^{-2 pi i m j / 2^N}.
AmplitudeTable spectrum_from_samples(const std::vector<Complex>& samples, bool hermitian,
                                     int initial = 0, int final = 0);

// <b| U(T; s_j) |a> for every grid point; `workers` = 0 picks the hardware
// concurrency. Results do not depend on the worker count.
std::vector<Complex> sample_transition(const QuantumSystem& system, const ControlField& field,
                                       const EncodingScheme& scheme, int a, int b, unsigned workers = 0);

AmplitudeTable extract_spectrum(const QuantumSystem& system, const ControlField& field,
                                const EncodingScheme& scheme, int a, int b, unsigned workers = 0);

/// Per-slot digits of a frequency. Hermitian digits are balanced,
/// in [-(B-1)/2, (B-1)/2]; non-Hermitian digits lie in [0, B-1].
struct Signature {
  std::vector<std::int64_t> digits;
  bool hermitian = true;
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature decompose_nonhermitian(std::int64_t m, int base, int slots);
Signature decompose_hermitian(std::int64_t m, int base, int slots);
Signature decompose(const EncodingScheme& scheme, std::int64_t m);
std::int64_t recompose(const Signature& signature, int base);

/// Sequence of 0-based states a, l1, ..., b.
struct Pathway {
  std::vector<int> states;
  std::size_t order() const { return states.empty() ? 0 : states.size() - 1; }
  friend bool operator==(const Pathway&, const Pathway&) = default;
  friend auto operator<=>(const Pathway&, const Pathway&) = default;
};

std::int64_t pathway_frequency(const EncodingScheme& scheme, const Pathway& pathway);

// Per-slot traversal counts (net for Hermitian schemes, per arc otherwise).
Signature pathway_signature(const EncodingScheme& scheme, const Pathway& pathway);

// Net traversal count of every edge (full Hermitian signature).
Chain full_signature(const HamiltonianGraph& graph, const Pathway& pathway);

// Per-arc traversal counts in canonical arc order (length 2r).
Chain arc_signature(const HamiltonianGraph& graph, const Pathway& pathway);

/// FHPS = sum_k ohps_k * fundamental_cycle_k + tree_path_chain(a, b), with
/// the k-th digit belonging to the k-th non-tree edge.
Chain expand_signature(const Signature& ohps, const HamiltonianGraph& graph, const SpanningTree& tree,
                       int a, int b);

// Net counts on the non-tree edges implied by a non-Hermitian reduced signature.
Signature induced_hermitian(const EncodingScheme& scheme, const Signature& signature);

using TranslationMap = std::map<std::pair<int, std::int64_t>, Pathway>;

/// Shortest pathway (then lexicographically smallest) of each
/// (final state, frequency) among pathways from `a` of order <= l_max.
/// Hermitian schemes skip pathways containing an immediate x -> y -> x.
TranslationMap build_translation_map(const EncodingScheme& scheme, int a, int l_max,
                                     std::size_t cap = 1'000'000);

struct ClassAmplitude {
  std::int64_t m;
  Complex amplitude;
};

inline constexpr double kReportFloor = 1e-12;

/// Entries with |amp| > epsilon_abs sorted by descending magnitude (ties by
/// ascending m). epsilon_abs = 0 keeps every entry. Amplitudes below
/// kReportFloor are returned as zero.
std::vector<ClassAmplitude> significant(const AmplitudeTable& table, double epsilon_abs);

struct Validation {
  bool self_validating = true;
  std::vector<std::int64_t> offending;  // frequencies with extremal or undecodable digits
};

Validation self_validating(const AmplitudeTable& table, const EncodingScheme& scheme, double epsilon_abs);

}  // namespace pathenc
