#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pathenc/config.hpp"
#include "pathenc/decoder.hpp"
#include "pathenc/dyson_oracle.hpp"
#include "pathenc/encoder.hpp"
#include "pathenc/error.hpp"
#include "pathenc/hamiltonian_graph.hpp"
#include "pathenc/pipeline.hpp"
#include "pathenc/pulse_synth.hpp"
#include "pathenc/quantum_system.hpp"

namespace py = pybind11;
using namespace pathenc;

namespace {

std::vector<Edge> to_edges(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> edges;
  for (auto [u, v] : pairs) edges.push_back({std::min(u, v), std::max(u, v)});
  return edges;
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hamiltonian encoding of transition pathways";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&]() { return py::exception<Error>(m, "PathencError", PyExc_ValueError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string message = std::string("[") + to_string(e.kind()) + "] " + e.what();
      py::set_error(error_type.get_stored(), message.c_str());
    }
  });

  py::class_<QuantumSystem>(m, "QuantumSystem")
      .def(py::init(&build_system), py::arg("energies"), py::arg("dipoles"))
      .def_property_readonly("dimension", &QuantumSystem::dimension)
      .def_property_readonly("energies", &QuantumSystem::energies)
      .def_property_readonly("dipoles", &QuantumSystem::dipoles)
      .def_property_readonly("transitions", &QuantumSystem::transitions);

  py::class_<ControlField>(m, "ControlField")
      .def(py::init<double, std::vector<std::vector<double>>>(), py::arg("dt"), py::arg("samples"))
      .def_property_readonly("dt", &ControlField::dt)
      .def_property_readonly("samples", &ControlField::samples)
      .def_property_readonly("steps", &ControlField::steps)
      .def_property_readonly("channels", &ControlField::channels)
      .def_property_readonly("horizon", &ControlField::horizon)
      .def("scaled", &ControlField::scaled)
      .def("refined", &ControlField::refined);

  m.def("propagate", [](const QuantumSystem& s, const ControlField& f) { return propagate_final(s, f).matrix; },
        "U(T) for the unmodulated system.");
  m.def("populations", &propagate_trajectory, py::arg("system"), py::arg("field"), py::arg("initial"));
  m.def("fidelity", &fidelity, py::arg("system"), py::arg("field"), py::arg("a"), py::arg("b"));

  py::class_<HamiltonianGraph>(m, "HamiltonianGraph")
      .def_property_readonly("vertex_count", &HamiltonianGraph::vertex_count)
      .def_property_readonly("edges", [](const HamiltonianGraph& g) {
        std::vector<std::pair<int, int>> out;
        for (const auto& e : g.edges()) out.emplace_back(e.tail, e.head);
        return out;
      });
  m.def("build_graph", &build_graph);

  py::class_<EncodingScheme>(m, "EncodingScheme")
      .def_property_readonly("mode", [](const EncodingScheme& s) { return std::string(to_string(s.mode())); })
      .def_property_readonly("base", &EncodingScheme::base)
      .def_property_readonly("hermitian", &EncodingScheme::hermitian)
      .def_property_readonly("slot_count", &EncodingScheme::slot_count)
      .def_property_readonly("gamma0", &EncodingScheme::gamma0)
      .def_property_readonly("exponent", &EncodingScheme::exponent)
      .def_property_readonly("sample_count", &EncodingScheme::sample_count)
      .def_property_readonly("cost_ratio_vs_full", &cost_ratio_vs_full)
      .def_property_readonly("slots", [](const EncodingScheme& s) {
        std::vector<std::tuple<int, int, bool, std::int64_t>> out;
        for (std::size_t k = 0; k < s.slot_count(); ++k) {
          const Edge& e = s.graph().edge(s.slots()[k].edge);
          out.emplace_back(e.tail, e.head, s.slots()[k].forward, s.weight(k));
        }
        return out;
      });
  m.def(
      "make_scheme",
      [](const QuantumSystem& system, const std::string& mode, int base,
         std::optional<std::vector<std::pair<int, int>>> tree) {
        const auto graph = build_graph(system);
        const SpanningTree t = tree ? spanning_tree_from_edges(graph, to_edges(*tree)) : spanning_tree(graph);
        return make_scheme(parse_mode(mode), graph, t, base);
      },
      py::arg("system"), py::arg("mode") = "ohpe", py::arg("base") = 7, py::arg("tree") = py::none(),
      "Encoding for the system graph; the tree defaults to breadth-first from state 0.");

  py::class_<AmplitudeTable>(m, "AmplitudeTable")
      .def_property_readonly("bins", &AmplitudeTable::bins)
      .def_property_readonly("hermitian", &AmplitudeTable::hermitian)
      .def_property_readonly("exponent", &AmplitudeTable::exponent)
      .def("amplitude", &AmplitudeTable::amplitude)
      .def("frequency_of_bin", &AmplitudeTable::frequency_of_bin)
      .def("total", &AmplitudeTable::total)
      .def("significant", [](const AmplitudeTable& t, double eps) {
        std::vector<std::pair<std::int64_t, Complex>> out;
        for (const auto& c : significant(t, eps)) out.emplace_back(c.m, c.amplitude);
        return out;
      });
  m.def("extract_spectrum", &extract_spectrum, py::arg("system"), py::arg("field"), py::arg("scheme"), py::arg("a"),
        py::arg("b"), py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());

  m.def(
      "decompose",
      [](std::int64_t value, int base, int slots, bool hermitian) {
        return (hermitian ? decompose_hermitian(value, base, slots) : decompose_nonhermitian(value, base, slots))
            .digits;
      },
      py::arg("m"), py::arg("base"), py::arg("slots"), py::arg("hermitian"));
  m.def(
      "recompose",
      [](const std::vector<std::int64_t>& digits, int base) { return recompose(Signature{digits, true}, base); },
      py::arg("digits"), py::arg("base"));
  m.def(
      "pathway_frequency",
      [](const EncodingScheme& s, const std::vector<int>& states) { return pathway_frequency(s, Pathway{states}); },
      py::arg("scheme"), py::arg("states"));
  m.def(
      "translate",
      [](const EncodingScheme& s, int a, int l_max) {
        std::map<std::pair<int, std::int64_t>, std::vector<int>> out;
        for (const auto& [key, p] : build_translation_map(s, a, l_max)) out[key] = p.states;
        return out;
      },
      py::arg("scheme"), py::arg("a"), py::arg("l_max"), "Representative pathway per (final state, frequency).");
  m.def(
      "class_amplitude",
      [](const QuantumSystem& sys, const ControlField& f, const EncodingScheme& s, std::int64_t target, int a, int b,
         int max_order, int substeps) {
        const OracleResult r = class_amplitude_oracle(sys, f, s, target, a, b, max_order, substeps);
        return py::make_tuple(r.amplitude, r.truncated, r.pathways);
      },
      py::arg("system"), py::arg("field"), py::arg("scheme"), py::arg("m"), py::arg("a"), py::arg("b"),
      py::arg("max_order"), py::arg("substeps") = 1, "Truncated Dyson sum over one class: (amplitude, truncated, count).");

  m.def(
      "synthesize",
      [](const QuantumSystem& sys, int a, int b, double horizon, double dt, double bound, int max_iterations,
         double target_infidelity, std::uint64_t seed) {
        SynthesisConfig c;
        c.initial = a;
        c.target = b;
        c.horizon = horizon;
        c.dt = dt;
        c.amplitude_bound = bound;
        c.max_iterations = max_iterations;
        c.target_infidelity = target_infidelity;
        c.seed = seed;
        std::optional<SynthesisResult> result;
        {
          py::gil_scoped_release release;
          result = grape_optimize(sys, c);
        }
        const SynthesisResult& r = *result;
        py::dict report;
        report["converged"] = r.report.converged;
        report["iterations"] = r.report.iterations;
        report["fidelity"] = r.report.fidelity;
        report["history"] = r.report.history;
        report["stop_reason"] = r.report.stop_reason;
        return py::make_tuple(r.field, report);
      },
      py::arg("system"), py::arg("a"), py::arg("b"), py::arg("horizon"), py::arg("dt"), py::arg("amplitude_bound"),
      py::arg("max_iterations") = 500, py::arg("target_infidelity") = 1e-3, py::arg("seed") = 1);

  m.def(
      "analyze",
      [](const std::filesystem::path& config_path, std::optional<std::filesystem::path> out_dir,
         std::optional<std::string> mode, std::optional<int> base, unsigned workers) {
        AnalysisOptions options;
        options.workers = workers;
        if (mode) options.mode = parse_mode(*mode);
        options.base = base;
        const AnalysisConfig config = with_overrides(parse_config(config_path), options);
        nlohmann::json summary;
        {
          py::gil_scoped_release release;
          const std::filesystem::path dir = out_dir.value_or(config.report.out_dir);
          const ControlField field = obtain_pulse(config, dir);
          const AnalysisResult result = run_analysis(config, field, options);
          if (out_dir) write_analysis(config, result, *out_dir);
          summary = summary_json(config, result);
        }
        return to_python(summary);
      },
      py::arg("config"), py::arg("out_dir") = py::none(), py::arg("mode") = py::none(), py::arg("base") = py::none(),
      py::arg("workers") = 0, "Runs the analysis of a configuration file and returns its summary.");
}
