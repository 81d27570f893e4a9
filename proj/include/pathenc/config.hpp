#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pathenc/encoder.hpp"
#include "pathenc/hamiltonian_graph.hpp"
#include "pathenc/pulse_synth.hpp"
#include "pathenc/quantum_system.hpp"

namespace pathenc {

struct PulseSpec {
  std::optional<ControlField> field;          // inline samples or samples_file
  std::optional<SynthesisConfig> synthesis;   // a, b filled from the report section
};

struct EncodingSpec {
  EncodingMode mode = EncodingMode::HermitianOHPE;
  int base = 7;
  double epsilon_rel = 0.01;
  std::optional<std::vector<Edge>> tree;  // 0-based
};

struct ReportSpec {
  int initial = 0;  // 0-based
  int target = 0;
  int l_max = 8;
  std::filesystem::path out_dir;
};

/// Parsed configuration file. Energies are in atomic units (hbar = 1) and
/// dipole entries are sparse 1-based (i, j, value) triples; a missing (j, i)
/// partner is filled with conj(value).
struct AnalysisConfig {
  std::string name;
  QuantumSystem system;
  PulseSpec pulse;
  EncodingSpec encoding;
  ReportSpec report;
  std::filesystem::path source;
};

AnalysisConfig parse_config(const std::filesystem::path& path);
AnalysisConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".");

EncodingMode parse_mode(const std::string& name);

// Spanning tree from the encoding section, or the default breadth-first tree.
SpanningTree config_tree(const AnalysisConfig& config, const HamiltonianGraph& graph);

}  // namespace pathenc
