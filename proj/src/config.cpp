#include "pathenc/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "pathenc/error.hpp"
#include "pathenc/report.hpp"

namespace pathenc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::ConfigParse, field + ": " + message);
}

const json& require(const json& node, const std::string& key, const std::string& where) {
  if (!node.is_object() || !node.contains(key)) fail(where + "." + key, "missing required field");
  return node.at(key);
}

double number(const json& node, const std::string& field) {
  if (!node.is_number()) fail(field, "expected a number");
  return node.get<double>();
}

int integer(const json& node, const std::string& field) {
  if (!node.is_number_integer()) fail(field, "expected an integer");
  return node.get<int>();
}

Complex complex_value(const json& node, const std::string& field) {
  if (node.is_number()) return {node.get<double>(), 0.0};
  if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number()) {
    return {node[0].get<double>(), node[1].get<double>()};
  }
  fail(field, "expected a real number or a [re, im] pair");
}

int state_index(const json& node, int dimension, const std::string& field) {
  const int v = integer(node, field);
  if (v < 1 || v > dimension) fail(field, "state " + std::to_string(v) + " outside 1.." + std::to_string(dimension));
  return v - 1;
}

CMatrix parse_dipole(const json& entries, int d, const std::string& where) {
  if (!entries.is_array()) fail(where, "expected a list of [i, j, value] triples");
  CMatrix mu = CMatrix::Zero(d, d);
  std::map<std::pair<int, int>, Complex> given;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string field = where + "[" + std::to_string(k) + "]";
    const json& t = entries[k];
    if (!t.is_array() || t.size() != 3) fail(field, "expected [i, j, value]");
    const int i = state_index(t[0], d, field + "[0]");
    const int j = state_index(t[1], d, field + "[1]");
    if (i == j) fail(field, "diagonal dipole entries are not supported");
    if (given.count({i, j})) fail(field, "duplicate entry");
    given[{i, j}] = complex_value(t[2], field + "[2]");
  }
  for (const auto& [ij, v] : given) {
    const auto [i, j] = ij;
    mu(i, j) = v;
    auto partner = given.find({j, i});
    if (partner == given.end()) {
      mu(j, i) = std::conj(v);
    } else if (std::abs(partner->second - std::conj(v)) > 1e-12 * std::max(1.0, std::abs(v))) {
      fail(where, "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") and (" +
                      std::to_string(j + 1) + "," + std::to_string(i + 1) + ") are not Hermitian conjugates");
    }
  }
  return mu;
}

ControlField inline_field(const json& pulse, std::size_t channels) {
  const double dt = number(require(pulse, "dt", "pulse"), "pulse.dt");
  const json& samples = pulse.at("samples");
  std::vector<std::vector<double>> data;
  if (!samples.is_array() || samples.empty()) fail("pulse.samples", "expected a non-empty array");
  if (samples[0].is_number()) {
    data.emplace_back();
    for (std::size_t n = 0; n < samples.size(); ++n) data[0].push_back(number(samples[n], "pulse.samples"));
  } else {
    for (std::size_t c = 0; c < samples.size(); ++c) {
      const std::string field = "pulse.samples[" + std::to_string(c) + "]";
      if (!samples[c].is_array()) fail(field, "expected an array of numbers");
      data.emplace_back();
      for (const json& v : samples[c]) data.back().push_back(number(v, field));
    }
  }
  if (data.size() != channels) {
    fail("pulse.samples", "has " + std::to_string(data.size()) + " channels but the system has " +
                              std::to_string(channels) + " dipoles");
  }
  try {
    return ControlField(dt, std::move(data));
  } catch (const Error& e) {
    fail("pulse", e.what());
  }
}

SynthesisConfig synthesis_config(const json& node) {
  SynthesisConfig s;
  s.horizon = number(require(node, "horizon", "pulse.synthesize"), "pulse.synthesize.horizon");
  s.dt = number(require(node, "dt", "pulse.synthesize"), "pulse.synthesize.dt");
  s.amplitude_bound =
      number(require(node, "amplitude_bound", "pulse.synthesize"), "pulse.synthesize.amplitude_bound");
  if (node.contains("max_iterations")) s.max_iterations = integer(node["max_iterations"], "pulse.synthesize.max_iterations");
  if (node.contains("target_infidelity")) {
    s.target_infidelity = number(node["target_infidelity"], "pulse.synthesize.target_infidelity");
  }
  if (node.contains("seed")) {
    if (!node["seed"].is_number_unsigned()) fail("pulse.synthesize.seed", "expected a non-negative integer");
    s.seed = node["seed"].get<std::uint64_t>();
  }
  if (!(s.dt > 0.0) || !(s.horizon > 0.0)) fail("pulse.synthesize", "horizon and dt must be positive");
  if (!(s.amplitude_bound > 0.0)) fail("pulse.synthesize.amplitude_bound", "must be positive");
  const double ratio = s.horizon / s.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) fail("pulse.synthesize", "horizon / dt must be an integer");
  if (s.max_iterations < 0) fail("pulse.synthesize.max_iterations", "must be non-negative");
  return s;
}

}  // namespace

EncodingMode parse_mode(const std::string& name) {
  if (name == "ohpe") return EncodingMode::HermitianOHPE;
  if (name == "nhpe") return EncodingMode::NonHermitianNHPE;
  if (name == "full-h") return EncodingMode::HermitianFull;
  if (name == "full-nh") return EncodingMode::NonHermitianFull;
  fail("encoding.mode", "unknown mode '" + name + "' (expected ohpe, nhpe, full-h or full-nh)");
}

AnalysisConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("config", e.what());
  }
  if (!root.is_object()) fail("config", "top level must be an object");

  const json& sys = require(root, "system", "config");
  const json& energies_node = require(sys, "energies", "system");
  if (!energies_node.is_array()) fail("system.energies", "expected an array of numbers");
  std::vector<double> energies;
  for (std::size_t k = 0; k < energies_node.size(); ++k) {
    energies.push_back(number(energies_node[k], "system.energies[" + std::to_string(k) + "]"));
  }
  const int d = static_cast<int>(energies.size());
  if (d < 2) fail("system.energies", "need at least two levels");
  const json& dipoles_node = require(sys, "dipoles", "system");
  if (!dipoles_node.is_array() || dipoles_node.empty()) fail("system.dipoles", "expected a list of dipoles");
  std::vector<CMatrix> dipoles;
  for (std::size_t c = 0; c < dipoles_node.size(); ++c) {
    dipoles.push_back(parse_dipole(dipoles_node[c], d, "system.dipoles[" + std::to_string(c) + "]"));
  }
  std::optional<QuantumSystem> system;
  try {
    system.emplace(std::move(energies), std::move(dipoles));
  } catch (const Error& e) {
    fail("system", e.what());
  }

  ReportSpec report;
  const json& rep = require(root, "report", "config");
  report.initial = state_index(require(rep, "initial", "report"), d, "report.initial");
  report.target = state_index(require(rep, "target", "report"), d, "report.target");
  if (rep.contains("l_max")) {
    report.l_max = integer(rep["l_max"], "report.l_max");
    if (report.l_max < 1) fail("report.l_max", "must be >= 1");
  }
  if (rep.contains("out")) {
    if (!rep["out"].is_string()) fail("report.out", "expected a path string");
    report.out_dir = rep["out"].get<std::string>();
  }

  EncodingSpec encoding;
  if (root.contains("encoding")) {
    const json& enc = root["encoding"];
    if (enc.contains("mode")) {
      if (!enc["mode"].is_string()) fail("encoding.mode", "expected a string");
      encoding.mode = parse_mode(enc["mode"].get<std::string>());
    }
    if (enc.contains("base")) encoding.base = integer(enc["base"], "encoding.base");
    if (enc.contains("epsilon_rel")) {
      encoding.epsilon_rel = number(enc["epsilon_rel"], "encoding.epsilon_rel");
      if (encoding.epsilon_rel < 0.0) fail("encoding.epsilon_rel", "must be non-negative");
    }
    if (enc.contains("tree")) {
      const json& tree = enc["tree"];
      if (!tree.is_array()) fail("encoding.tree", "expected a list of [i, j] edges");
      std::vector<Edge> edges;
      for (std::size_t k = 0; k < tree.size(); ++k) {
        const std::string field = "encoding.tree[" + std::to_string(k) + "]";
        if (!tree[k].is_array() || tree[k].size() != 2) fail(field, "expected [i, j]");
        const int i = state_index(tree[k][0], d, field);
        const int j = state_index(tree[k][1], d, field);
        edges.push_back(Edge{std::min(i, j), std::max(i, j)});
      }
      encoding.tree = std::move(edges);
    }
  }
  const bool hermitian = is_hermitian_mode(encoding.mode);
  if (hermitian && (encoding.base < 3 || encoding.base % 2 == 0)) {
    fail("encoding.base", "Hermitian encodings need an odd base >= 3 (balanced digits need B = 2 m0 + 1), got " +
                              std::to_string(encoding.base));
  }
  if (!hermitian && encoding.base < 2) fail("encoding.base", "must be >= 2");

  PulseSpec pulse;
  if (root.contains("pulse")) {
    const json& p = root["pulse"];
    if (p.contains("samples")) {
      pulse.field = inline_field(p, system->dipole_count());
    } else if (p.contains("samples_file")) {
      if (!p["samples_file"].is_string()) fail("pulse.samples_file", "expected a path string");
      std::optional<double> dt;
      if (p.contains("dt")) dt = number(p["dt"], "pulse.dt");
      try {
        pulse.field = read_pulse_csv(base_dir / p["samples_file"].get<std::string>(), dt);
      } catch (const Error& e) {
        fail("pulse.samples_file", e.what());
      }
      if (pulse.field->channels() != system->dipole_count()) {
        fail("pulse.samples_file", "channel count does not match the dipole count");
      }
    }
    if (p.contains("synthesize")) {
      pulse.synthesis = synthesis_config(p["synthesize"]);
      pulse.synthesis->initial = report.initial;
      pulse.synthesis->target = report.target;
    }
    if (!pulse.field && !pulse.synthesis) fail("pulse", "needs samples, samples_file or synthesize");
  } else {
    fail("config.pulse", "missing required field");
  }

  std::string name = root.contains("name") && root["name"].is_string() ? root["name"].get<std::string>() : "analysis";
  return AnalysisConfig{std::move(name), std::move(*system), std::move(pulse), std::move(encoding),
                        std::move(report), base_dir};
}

AnalysisConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigParse, path.string() + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  AnalysisConfig config = parse_config_text(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
  config.source = path;
  return config;
}

SpanningTree config_tree(const AnalysisConfig& config, const HamiltonianGraph& graph) {
  if (config.encoding.tree) return spanning_tree_from_edges(graph, *config.encoding.tree);
  return spanning_tree(graph);
}

}  // namespace pathenc
