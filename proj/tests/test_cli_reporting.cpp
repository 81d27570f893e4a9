#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "pathenc/config.hpp"
#include "pathenc/error.hpp"
#include "pathenc/pipeline.hpp"
#include "pathenc/report.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace pathenc;

namespace {

const fs::path kFixtures = PATHENC_FIXTURE_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pathenc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PATHENC_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

ErrorKind parse_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Nonconvergence;
}

std::string parse_message(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const char* kMinimal = R"({
  "system": {"energies": [0, 0.0082, 0.016], "dipoles": [[[1, 2, 0.061], [1, 3, -0.013], [2, 3, 0.083]]]},
  "pulse": {"dt": 20, "samples": [0.001, -0.002, 0.003]},
  "encoding": {"mode": "ohpe", "base": 7},
  "report": {"initial": 1, "target": 3}
})";

}  // namespace

TEST_CASE("bundled fixtures parse") {
  const AnalysisConfig three = parse_config(kFixtures / "three_level.json");
  CHECK(three.system.energies().size() == 3);
  CHECK(three.system.dipoles()[0](2, 0) == Complex(-0.013, 0.0));
  REQUIRE(three.pulse.synthesis.has_value());
  CHECK(three.pulse.synthesis->target == 2);
  CHECK(three.encoding.tree->size() == 2);

  const AnalysisConfig cube = parse_config(kFixtures / "three_qubit.json");
  CHECK(cube.system.dimension() == 8);
  const QuantumSystem ref = testing::three_qubit();
  for (int i = 0; i < 8; ++i) {
    CHECK(cube.system.energies()[static_cast<std::size_t>(i)] ==
          doctest::Approx(ref.energies()[static_cast<std::size_t>(i)]).epsilon(1e-14));
  }
  CHECK(testing::max_abs(cube.system.dipoles()[0] - ref.dipoles()[0]) < 1e-15);
  CHECK(testing::max_abs(cube.system.dipoles()[1] - ref.dipoles()[1]) < 1e-15);

  CHECK(parse_config(kFixtures / "aliasing_ladder.json").encoding.mode == EncodingMode::NonHermitianFull);
  CHECK(parse_config(kFixtures / "three_level_nhpe.json").encoding.base == 16);
}

TEST_CASE("config validation") {
  std::string even = kMinimal;
  even.replace(even.find("\"base\": 7"), 9, "\"base\": 6");
  CHECK(parse_error(even) == ErrorKind::ConfigParse);
  CHECK(parse_message(even).find("odd base") != std::string::npos);

  std::string missing = kMinimal;
  missing.replace(missing.find("\"energies\""), 10, "\"levels\"");
  CHECK(parse_message(missing).find("system.energies") != std::string::npos);

  std::string bad_state = kMinimal;
  bad_state.replace(bad_state.find("\"target\": 3"), 11, "\"target\": 4");
  CHECK(parse_message(bad_state).find("report.target") != std::string::npos);

  CHECK(parse_error("{not json") == ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"system": {"energies": [0, 1], "dipoles": [[[1, 2, 1.0], [2, 1, 2.0]]]},
                        "pulse": {"dt": 1, "samples": [0.1]}, "report": {"initial": 1, "target": 2}})") ==
        ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"system": {"energies": [0, 1], "dipoles": [[[1, 1, 1.0]]]},
                        "pulse": {"dt": 1, "samples": [0.1]}, "report": {"initial": 1, "target": 2}})") ==
        ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"system": {"energies": [0, 1], "dipoles": [[[1, 2, 1.0]]]},
                        "pulse": {"synthesize": {"horizon": 10, "dt": 3, "amplitude_bound": 0.1}},
                        "report": {"initial": 1, "target": 2}})") == ErrorKind::ConfigParse);
}

TEST_CASE("missing dipole partners are filled by Hermiticity") {
  const AnalysisConfig c = parse_config_text(R"({
    "system": {"energies": [0, 1], "dipoles": [[[1, 2, [0.2, 0.5]]]]},
    "pulse": {"dt": 1, "samples": [0.1, 0.2]},
    "report": {"initial": 1, "target": 2}})");
  CHECK(c.system.dipoles()[0](0, 1) == Complex(0.2, 0.5));
  CHECK(c.system.dipoles()[0](1, 0) == Complex(0.2, -0.5));
}

TEST_CASE("pulse, spectrum and amplitude files round-trip") {
  const fs::path dir = scratch("roundtrip");
  std::mt19937_64 rng(5);
  const ControlField f = testing::random_field(rng, 0.1, 2, 17, 3.0);
  write_pulse_csv(dir / "pulse.csv", f);
  const ControlField g = read_pulse_csv(dir / "pulse.csv");
  CHECK(g.samples() == f.samples());
  CHECK(g.dt() == f.dt());

  const AnalysisConfig config = parse_config_text(kMinimal);
  const AnalysisResult result = run_analysis(config, *config.pulse.field);
  write_analysis(config, result, dir);
  const AmplitudeTable back = read_spectrum_csv(dir / "spectrum.csv");
  CHECK(back.bins() == result.table.bins());
  CHECK(back.hermitian() == result.table.hermitian());
  const auto rows = read_amplitudes_csv(dir / "amplitudes.csv");
  REQUIRE(rows.size() == result.rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].m == result.rows[k].m);
    CHECK(rows[k].amplitude == result.rows[k].amplitude);
    CHECK(rows[k].pathway == result.rows[k].pathway);
  }
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(std::abs(rows[k - 1].amplitude) >= std::abs(rows[k].amplitude));
  }
}

TEST_CASE("arrow plots") {
  std::vector<AmplitudeRow> rows{{0, "0", "1 -> 2 -> 3", {0.5, 0.2}},
                                 {1, "1", "1 -> 3", {0.1, -0.1}},
                                 {-1, "-1", "", {-0.05, 0.02}}};
  const std::string svg = arrow_plot_svg(rows, {0.55, 0.12}, "t");
  CHECK(count(svg, "url(#head)") == 3);
  CHECK(count(svg, "url(#head-total)") == 1);
  CHECK(count(svg, ">-1</text>") == 1);
  const std::string empty = arrow_plot_svg({}, {0.3, 0.0}, "t");
  CHECK(count(empty, "url(#head)") == 0);
  CHECK(count(empty, "url(#head-total)") == 1);
  CHECK(arrow_plot_svg(rows, {0.55, 0.12}, "t") == svg);
}

TEST_CASE("analysis summary of the small encodings") {
  const AnalysisConfig tri = parse_config_text(kMinimal);
  const auto s = summary_json(tri, run_analysis(tri, *tri.pulse.field));
  CHECK(s["N"] == 3);
  CHECK(s["sample_points"] == 8);
  CHECK(s["encoded_slots"].size() == 1);
  CHECK(s["sum_residual"].get<double>() <= 1e-9);

  AnalysisOptions nh;
  nh.mode = EncodingMode::NonHermitianNHPE;
  nh.base = 16;
  const AnalysisConfig cfg = with_overrides(tri, nh);
  const auto n = summary_json(cfg, run_analysis(cfg, *cfg.pulse.field, nh));
  CHECK(n["encoded_slots"].size() == 4);
  CHECK(n["sample_points"] == 65536);
  CHECK(n["cost_ratio_vs_full"] == 256);

  AnalysisOptions even;
  even.base = 6;
  try {
    with_overrides(tri, even);
    FAIL("even base accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EvenBase);
  }
}

TEST_CASE("cube summary with a short pulse") {
  AnalysisConfig cube = parse_config(kFixtures / "three_qubit.json");
  std::mt19937_64 rng(2);
  const ControlField f = testing::random_field(rng, 1e-5, 2, 3, 5000.0);
  AnalysisOptions opts;
  opts.workers = 2;
  const AnalysisResult r = run_analysis(cube, f, opts);
  const auto s = summary_json(cube, r);
  CHECK(s["encoded_slots"].size() == 5);
  CHECK(s["N"] == 15);
  CHECK(s["sample_points"] == 32768);
  CHECK(r.sum_residual <= 1e-9);
  CHECK(s["tree_edges"].size() == 7);
}

TEST_CASE("command-line tool") {
  const fs::path dir = scratch("cli");
  const fs::path log = dir / "log.txt";
  const std::string fixture = (kFixtures / "three_level.json").string();

  CHECK(run_cli("optimize --config " + fixture + " --out " + (dir / "opt").string(), log) == 0);
  CHECK(slurp(log).find("converged: yes") != std::string::npos);
  const std::string pulse = slurp(dir / "opt" / "pulse.csv");
  CHECK(count(pulse, "\n") == 1000 + 1);
  CHECK(fs::exists(dir / "opt" / "convergence.json"));

  CHECK(run_cli("analyze --config " + fixture + " --out " + (dir / "opt").string() + " --workers 2", log) == 0);
  const std::string verdict = slurp(log);
  CHECK(verdict.find("self-validating: yes") != std::string::npos);
  CHECK(verdict.find("sum residual") != std::string::npos);
  const auto summary = nlohmann::json::parse(slurp(dir / "opt" / "summary.json"));
  CHECK(summary["N"] == 3);
  CHECK(summary["encoded_slots"].size() == 1);
  CHECK(fs::exists(dir / "opt" / "populations.csv"));

  CHECK(run_cli("report " + (dir / "opt").string(), log) == 0);
  const std::string arrows = slurp(dir / "opt" / "arrows.svg");
  CHECK(count(arrows, "url(#head)") == 3);
  for (const char* label : {">0</text>", ">1</text>", ">-1</text>"}) CHECK(count(arrows, label) == 1);
  const auto rows = read_amplitudes_csv(dir / "opt" / "amplitudes.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].m == 0);
  CHECK(std::abs(rows[0].amplitude) > 10.0 * std::abs(rows[1].amplitude));
  CHECK(fs::exists(dir / "opt" / "populations.svg"));
  CHECK(run_cli("report " + (dir / "opt").string(), log) == 0);
  CHECK(slurp(dir / "opt" / "arrows.svg") == arrows);

  CHECK(run_cli("translate --config " + fixture + " -m -1", log) == 0);
  CHECK(slurp(log).find("1 -> 2 -> 3 -> 1 -> 2 -> 3") != std::string::npos);

  std::ofstream(dir / "broken.json") << "{\"system\": {\"energies\": [0, 1]}}";
  CHECK(run_cli("analyze --config " + (dir / "broken.json").string(), log) == 2);
  CHECK(slurp(log).find("system.dipoles") != std::string::npos);
  CHECK(run_cli("analyze --config " + fixture + " --base 6 --out " + (dir / "opt").string(), log) == 5);
  CHECK(run_cli("report " + (dir / "nothing").string(), log) == 7);

  std::ofstream(dir / "split.json") << R"({
    "system": {"energies": [0, 1, 2, 3], "dipoles": [[[1, 2, 0.1], [3, 4, 0.1]]]},
    "pulse": {"dt": 1, "samples": [0.1]}, "report": {"initial": 1, "target": 2}})";
  CHECK(run_cli("analyze --config " + (dir / "split.json").string() + " --out " + (dir / "s").string(), log) == 4);

  std::ofstream(dir / "path.json") << R"({
    "system": {"energies": [0, 1, 2], "dipoles": [[[1, 2, 0.1], [2, 3, 0.1]]]},
    "pulse": {"dt": 1, "samples": [0.1]}, "report": {"initial": 1, "target": 3}})";
  CHECK(run_cli("analyze --config " + (dir / "path.json").string() + " --out " + (dir / "p").string(), log) == 6);

  std::ofstream(dir / "same.json") << R"({
    "system": {"energies": [0, 0.0082, 0.016], "dipoles": [[[1, 2, 0.061], [1, 3, -0.013], [2, 3, 0.083]]]},
    "pulse": {"synthesize": {"horizon": 200, "dt": 20, "amplitude_bound": 0.01}},
    "report": {"initial": 2, "target": 2}})";
  CHECK(run_cli("optimize --config " + (dir / "same.json").string() + " --out " + (dir / "same").string(), log) == 0);
  const auto same = read_pulse_csv(dir / "same" / "pulse.csv");
  CHECK(same.steps() == 10);
  for (double v : same.samples()[0]) CHECK(v == 0.0);

  std::ofstream(dir / "hard.json") << R"({
    "system": {"energies": [0, 0.0082, 0.016], "dipoles": [[[1, 2, 0.061], [1, 3, -0.013], [2, 3, 0.083]]]},
    "pulse": {"synthesize": {"horizon": 200, "dt": 20, "amplitude_bound": 0.0001, "max_iterations": 3}},
    "report": {"initial": 1, "target": 3}})";
  CHECK(run_cli("optimize --config " + (dir / "hard.json").string() + " --out " + (dir / "hard").string(), log) == 3);
  CHECK(fs::exists(dir / "hard" / "pulse.csv"));

  const std::string env_dir = (dir / "env").string();
  const std::string cmd = "PATHENC_OUT_DIR=" + env_dir + " " + PATHENC_CLI + " optimize --config " +
                          (dir / "same.json").string() + " > " + log.string() + " 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(fs::path(env_dir) / "pulse.csv"));
}
