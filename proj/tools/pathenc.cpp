#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pathenc/config.hpp"
#include "pathenc/error.hpp"
#include "pathenc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pathenc;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  unsigned workers = 0;
  std::optional<double> epsilon_rel;
  std::optional<int> base;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  int max_order = -1;
};

// --out, then the config's report.out, then $PATHENC_OUT_DIR, then ./results.
fs::path output_dir(const CommonFlags& flags, const AnalysisConfig* config) {
  if (!flags.out.empty()) return flags.out;
  if (config && !config->report.out_dir.empty()) return config->report.out_dir;
  if (const char* env = std::getenv("PATHENC_OUT_DIR"); env && *env) return env;
  return "results";
}

AnalysisOptions options_from(const CommonFlags& flags) {
  AnalysisOptions options;
  options.workers = flags.workers;
  options.base = flags.base;
  options.epsilon_rel = flags.epsilon_rel;
  options.seed = flags.seed;
  options.max_order = flags.max_order;
  if (flags.mode) options.mode = parse_mode(*flags.mode);
  return options;
}

void print_convergence(const ConvergenceReport& report) {
  std::printf("converged: %s | fidelity %.6f | iterations %d | %s\n", report.converged ? "yes" : "no",
              report.fidelity, report.iterations, report.stop_reason.c_str());
}

int cmd_optimize(const CommonFlags& flags) {
  const AnalysisConfig config = with_overrides(parse_config(flags.config), options_from(flags));
  const fs::path out = output_dir(flags, &config);
  const SynthesisResult result = run_synthesis(config);
  write_pulse_csv(out / "pulse.csv", result.field);
  write_convergence_json(out / "convergence.json", *config.pulse.synthesis, result.report);
  print_convergence(result.report);
  if (!result.report.converged) {
    throw Error(ErrorKind::Nonconvergence, "target infidelity not reached; best pulse written to " +
                                               (out / "pulse.csv").string());
  }
  return 0;
}

int cmd_analyze(const CommonFlags& flags) {
  const AnalysisOptions options = options_from(flags);
  const AnalysisConfig config = with_overrides(parse_config(flags.config), options);
  const fs::path out = output_dir(flags, &config);
  ControlField field = [&] {
    if (config.pulse.field || fs::exists(out / "pulse.csv")) return obtain_pulse(config, out);
    const SynthesisResult synth = run_synthesis(config);
    write_pulse_csv(out / "pulse.csv", synth.field);
    write_convergence_json(out / "convergence.json", *config.pulse.synthesis, synth.report);
    if (!synth.report.converged) {
      std::fprintf(stderr, "warning: pulse synthesis stopped at fidelity %.6f (%s)\n", synth.report.fidelity,
                   synth.report.stop_reason.c_str());
    }
    return synth.field;
  }();
  const AnalysisResult result = run_analysis(config, field, options);
  write_analysis(config, result, out);
  std::printf("%s\n", verdict_line(result).c_str());
  return 0;
}

int cmd_report(const CommonFlags& flags, const std::string& results) {
  fs::path dir = results;
  if (dir.empty()) {
    std::optional<AnalysisConfig> config;
    if (!flags.config.empty()) config = parse_config(flags.config);
    dir = output_dir(flags, config ? &*config : nullptr);
  }
  write_report(dir);
  std::printf("wrote %s and %s\n", (dir / "arrows.svg").string().c_str(), (dir / "populations.svg").string().c_str());
  return 0;
}

int cmd_translate(const CommonFlags& flags, std::int64_t frequency, std::optional<int> final_state,
                  std::optional<int> l_max) {
  const AnalysisConfig config = with_overrides(parse_config(flags.config), options_from(flags));
  const HamiltonianGraph graph = build_graph(config.system);
  const SpanningTree tree = config_tree(config, graph);
  const EncodingScheme scheme = make_scheme(config.encoding.mode, graph, tree, config.encoding.base);
  int b = config.report.target;
  if (final_state) {
    if (*final_state < 1 || *final_state > graph.vertex_count()) {
      throw Error(ErrorKind::InvalidTransition, "--final must lie in 1.." + std::to_string(graph.vertex_count()));
    }
    b = *final_state - 1;
  }
  const int depth = l_max.value_or(config.report.l_max);
  const Signature signature = decompose(scheme, frequency);
  const TranslationMap map = build_translation_map(scheme, config.report.initial, depth);
  const auto it = map.find({b, frequency});
  std::printf("m = %lld | signature %s | ", static_cast<long long>(frequency), format_signature(signature).c_str());
  if (it == map.end()) {
    std::printf("no pathway to state %d up to order %d\n", b + 1, depth);
  } else {
    std::printf("pathway %s (order %zu)\n", format_pathway(it->second).c_str(), it->second.order());
  }
  return 0;
}

void add_encoding_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--epsilon-rel", flags.epsilon_rel, "Significance threshold relative to |U_ba(T)|")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--base", flags.base, "Encoding base B");
  cmd->add_option("--mode", flags.mode, "Encoding mode")->check(CLI::IsMember({"ohpe", "nhpe", "full-h", "full-nh"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathway-class amplitude extraction by Hamiltonian encoding"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* optimize = app.add_subcommand("optimize", "Synthesize a transfer pulse (pulse.csv, convergence.json)");
  optimize->add_option("--config", flags.config, "Configuration file")->required();
  optimize->add_option("--out", flags.out, "Output directory");
  optimize->add_option("--seed", flags.seed, "Random seed for the initial field");

  auto* analyze = app.add_subcommand("analyze", "Encode, propagate and decode class amplitudes");
  analyze->add_option("--config", flags.config, "Configuration file")->required();
  analyze->add_option("--out", flags.out, "Output directory");
  analyze->add_option("--workers", flags.workers, "Parallel propagations (0 = all cores)");
  analyze->add_option("--max-order", flags.max_order, "Also evaluate the Dyson oracle up to this order");
  analyze->add_option("--seed", flags.seed, "Random seed when the pulse is synthesized");
  add_encoding_flags(analyze, flags);

  std::string results;
  auto* report = app.add_subcommand("report", "Render arrows.svg and populations.svg from analyze output");
  report->add_option("results", results, "Results directory");
  report->add_option("--out", flags.out, "Results directory");
  report->add_option("--config", flags.config, "Configuration file naming the output directory");

  std::int64_t frequency = 0;
  std::optional<int> final_state;
  std::optional<int> l_max;
  auto* translate = app.add_subcommand("translate", "Representative pathway of a frequency");
  translate->add_option("--config", flags.config, "Configuration file")->required();
  translate->add_option("--frequency,-m", frequency, "Frequency in units of gamma0")->required();
  translate->add_option("--final", final_state, "Final state (1-based, default: report target)");
  translate->add_option("--l-max", l_max, "Longest pathway searched");
  add_encoding_flags(translate, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*optimize) return cmd_optimize(flags);
    if (*analyze) return cmd_analyze(flags);
    if (*report) return cmd_report(flags, results);
    if (*translate) return cmd_translate(flags, frequency, final_state, l_max);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
