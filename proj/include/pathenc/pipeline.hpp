#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathenc/config.hpp"
#include "pathenc/decoder.hpp"
#include "pathenc/encoder.hpp"
#include "pathenc/pulse_synth.hpp"
#include "pathenc/report.hpp"

namespace pathenc {

struct AnalysisOptions {
  unsigned workers = 0;
  std::optional<EncodingMode> mode;
  std::optional<int> base;
  std::optional<double> epsilon_rel;
  std::optional<std::uint64_t> seed;
  int max_order = -1;  // >= 0 adds Dyson-oracle amplitudes for the significant classes
};

// Applies command-line overrides to a parsed configuration.
AnalysisConfig with_overrides(AnalysisConfig config, const AnalysisOptions& options);

struct OracleRow {
  std::int64_t m;
  Complex decoded;
  Complex oracle;
  bool truncated;
  std::size_t pathways;
};

struct AnalysisResult {
  EncodingScheme scheme;
  AmplitudeTable table;
  Complex transition;       // U_ba(T) from direct propagation
  double sum_residual;      // |sum_m amp(m) - U_ba(T)|
  double epsilon_abs;
  Validation validation;
  std::vector<AmplitudeRow> rows;
  std::vector<std::vector<double>> populations;
  double dt;
  std::vector<OracleRow> oracle;
};

// Pulse from the config: explicit samples, else a previously written
// pulse.csv in `out_dir`, else a fresh synthesis run.
ControlField obtain_pulse(const AnalysisConfig& config, const std::filesystem::path& out_dir,
                          ConvergenceReport* report = nullptr);

SynthesisResult run_synthesis(const AnalysisConfig& config);

AnalysisResult run_analysis(const AnalysisConfig& config, const ControlField& field,
                            const AnalysisOptions& options = {});

nlohmann::json summary_json(const AnalysisConfig& config, const AnalysisResult& result);

// amplitudes.csv, spectrum.csv, summary.json, populations.csv (+ oracle.csv).
void write_analysis(const AnalysisConfig& config, const AnalysisResult& result, const std::filesystem::path& out_dir);

// arrows.svg and populations.svg from a results directory.
void write_report(const std::filesystem::path& results_dir);

std::string verdict_line(const AnalysisResult& result);

}  // namespace pathenc
