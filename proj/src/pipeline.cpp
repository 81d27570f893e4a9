#include "pathenc/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pathenc/dyson_oracle.hpp"
#include "pathenc/error.hpp"

namespace pathenc {

namespace {

nlohmann::json complex_json(Complex z) {
  return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}, {"phase_deg", phase_degrees(z)}};
}

nlohmann::json edge_json(const Edge& e) { return nlohmann::json::array({e.tail + 1, e.head + 1}); }

}  // namespace

AnalysisConfig with_overrides(AnalysisConfig config, const AnalysisOptions& options) {
  if (options.mode) config.encoding.mode = *options.mode;
  if (options.base) config.encoding.base = *options.base;
  if (options.epsilon_rel) config.encoding.epsilon_rel = *options.epsilon_rel;
  if (options.seed && config.pulse.synthesis) config.pulse.synthesis->seed = *options.seed;
  const bool hermitian = is_hermitian_mode(config.encoding.mode);
  if (hermitian && config.encoding.base % 2 == 0) {
    throw Error(ErrorKind::EvenBase, "Hermitian encodings need an odd base, got " + std::to_string(config.encoding.base));
  }
  return config;
}

SynthesisResult run_synthesis(const AnalysisConfig& config) {
  if (!config.pulse.synthesis) throw Error(ErrorKind::ConfigParse, "pulse.synthesize: missing synthesis parameters");
  return grape_optimize(config.system, *config.pulse.synthesis);
}

ControlField obtain_pulse(const AnalysisConfig& config, const std::filesystem::path& out_dir,
                          ConvergenceReport* report) {
  if (config.pulse.field) return *config.pulse.field;
  const auto cached = out_dir / "pulse.csv";
  if (std::filesystem::exists(cached)) return read_pulse_csv(cached, config.pulse.synthesis->dt);
  SynthesisResult synth = run_synthesis(config);
  if (report) *report = synth.report;
  return synth.field;
}

AnalysisResult run_analysis(const AnalysisConfig& config, const ControlField& field, const AnalysisOptions& options) {
  const QuantumSystem& system = config.system;
  const int a = config.report.initial;
  const int b = config.report.target;
  const HamiltonianGraph graph = build_graph(system);
  const SpanningTree tree = config_tree(config, graph);
  EncodingScheme scheme = make_scheme(config.encoding.mode, graph, tree, config.encoding.base);
  AmplitudeTable table = extract_spectrum(system, field, scheme, a, b, options.workers);
  const Complex transition = propagate_state(system, field, a)(b);
  const double epsilon_abs = config.encoding.epsilon_rel * std::abs(transition);
  Validation validation = self_validating(table, scheme, epsilon_abs);
  const TranslationMap map = build_translation_map(scheme, a, config.report.l_max);
  std::vector<AmplitudeRow> rows = amplitude_rows(table, scheme, map, epsilon_abs);

  std::vector<OracleRow> oracle;
  if (options.max_order >= 0) {
    for (const AmplitudeRow& row : rows) {
      const auto r = class_amplitude_oracle(system, field, scheme, row.m, a, b, options.max_order, 16);
      oracle.push_back({row.m, row.amplitude, r.amplitude, r.truncated, r.pathways});
    }
  }
  const double residual = std::abs(table.total() - transition);
  return AnalysisResult{std::move(scheme),
                        std::move(table),
                        transition,
                        residual,
                        epsilon_abs,
                        std::move(validation),
                        std::move(rows),
                        propagate_trajectory(system, field, a),
                        field.dt(),
                        std::move(oracle)};
}

nlohmann::json summary_json(const AnalysisConfig& config, const AnalysisResult& result) {
  const EncodingScheme& scheme = result.scheme;
  nlohmann::json j;
  j["name"] = config.name;
  j["units"] = "atomic units, hbar = 1";
  j["initial"] = config.report.initial + 1;
  j["target"] = config.report.target + 1;
  j["U_ba"] = complex_json(result.transition);
  j["sum_of_amplitudes"] = complex_json(result.table.total());
  j["sum_residual"] = result.sum_residual;
  j["epsilon_rel"] = config.encoding.epsilon_rel;
  j["epsilon_abs"] = result.epsilon_abs;
  j["self_validating"] = result.validation.self_validating;
  j["offending_frequencies"] = result.validation.offending;
  j["significant_classes"] = result.rows.size();
  j["mode"] = std::string(to_string(scheme.mode()));
  j["base"] = scheme.base();
  j["gamma0"] = scheme.gamma0();
  j["N"] = scheme.exponent();
  j["sample_points"] = scheme.sample_count();
  j["cost_ratio_vs_full"] = cost_ratio_vs_full(scheme);
  nlohmann::json slots = nlohmann::json::array();
  for (std::size_t k = 0; k < scheme.slot_count(); ++k) {
    const Slot& slot = scheme.slots()[k];
    const Edge& e = scheme.graph().edge(slot.edge);
    nlohmann::json s;
    // Arcs are written as [from, to].
    s["arc"] = slot.forward ? edge_json(e) : nlohmann::json::array({e.head + 1, e.tail + 1});
    s["edge"] = edge_json(e);
    s["direction"] = scheme.hermitian() ? "both" : (slot.forward ? "forward" : "backward");
    s["weight"] = scheme.weight(k);
    slots.push_back(std::move(s));
  }
  j["encoded_slots"] = std::move(slots);
  nlohmann::json tree = nlohmann::json::array();
  for (std::size_t idx : scheme.tree().edge_indices) tree.push_back(edge_json(scheme.graph().edge(idx)));
  j["tree_edges"] = std::move(tree);
  if (!result.oracle.empty()) {
    nlohmann::json o = nlohmann::json::array();
    for (const auto& row : result.oracle) {
      o.push_back({{"m", row.m},
                   {"decoded", complex_json(row.decoded)},
                   {"oracle", complex_json(row.oracle)},
                   {"truncated", row.truncated},
                   {"pathways", row.pathways}});
    }
    j["oracle"] = std::move(o);
  }
  return j;
}

void write_analysis(const AnalysisConfig& config, const AnalysisResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_amplitudes_csv(out_dir / "amplitudes.csv", result.rows);
  write_spectrum_csv(out_dir / "spectrum.csv", result.table);
  write_populations_csv(out_dir / "populations.csv", result.populations, result.dt);
  write_text(out_dir / "summary.json", summary_json(config, result).dump(2) + "\n");
  if (!result.oracle.empty()) {
    std::string csv = "m,decoded_re,decoded_im,oracle_re,oracle_im,relative_error,truncated,pathways\n";
    char buf[320];
    for (const auto& row : result.oracle) {
      const double denom = std::abs(row.decoded);
      const double rel = denom > 0.0 ? std::abs(row.oracle - row.decoded) / denom : std::abs(row.oracle);
      std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g,%.6e,%d,%zu\n", static_cast<long long>(row.m),
                    row.decoded.real(), row.decoded.imag(), row.oracle.real(), row.oracle.imag(), rel,
                    row.truncated ? 1 : 0, row.pathways);
      csv += buf;
    }
    write_text(out_dir / "oracle.csv", csv);
  }
}

void write_report(const std::filesystem::path& results_dir) {
  const auto summary_path = results_dir / "summary.json";
  const auto amplitudes_path = results_dir / "amplitudes.csv";
  const auto populations_path = results_dir / "populations.csv";
  for (const auto& p : {summary_path, amplitudes_path, populations_path}) {
    if (!std::filesystem::exists(p)) {
      throw Error(ErrorKind::MissingResults, p.string() + " not found; run analyze first");
    }
  }
  std::ifstream in(summary_path);
  nlohmann::json summary;
  try {
    in >> summary;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MissingResults, summary_path.string() + ": " + e.what());
  }
  const Complex total{summary.at("U_ba").at("re").get<double>(), summary.at("U_ba").at("im").get<double>()};
  const std::string label = "U_" + std::to_string(summary.at("target").get<int>()) + "," +
                            std::to_string(summary.at("initial").get<int>()) + "(T)";
  const auto rows = read_amplitudes_csv(amplitudes_path);
  write_text(results_dir / "arrows.svg",
             arrow_plot_svg(rows, total, summary.value("name", std::string("analysis")) + ": class amplitudes of " + label));
  double dt = 0.0;
  const auto populations = read_populations_csv(populations_path, &dt);
  write_text(results_dir / "populations.svg",
             population_plot_svg(populations, dt, summary.value("name", std::string("analysis")) + ": populations"));
}

std::string verdict_line(const AnalysisResult& result) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "self-validating: %s | sum residual %.3e | |U_ba(T)| = %.6f | significant classes: %zu",
                result.validation.self_validating ? "yes" : "no", result.sum_residual, std::abs(result.transition),
                result.rows.size());
  return buf;
}

}  // namespace pathenc
