#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pathenc/decoder.hpp"
#include "pathenc/encoder.hpp"
#include "pathenc/pulse_synth.hpp"
#include "pathenc/quantum_system.hpp"

namespace pathenc {

// Columns: step, t, eps_1 .. eps_C. Values are written with 17 significant digits.
void write_pulse_csv(const std::filesystem::path& path, const ControlField& field);
// dt defaults to the t value of the second row.
ControlField read_pulse_csv(const std::filesystem::path& path, std::optional<double> dt = std::nullopt);

void write_convergence_json(const std::filesystem::path& path, const SynthesisConfig& config,
                            const ConvergenceReport& report);

// Every bin of a table: bin, m, re, im.
void write_spectrum_csv(const std::filesystem::path& path, const AmplitudeTable& table);
AmplitudeTable read_spectrum_csv(const std::filesystem::path& path);

struct AmplitudeRow {
  std::int64_t m = 0;
  std::string signature;  // space-separated digits, or "out-of-domain"
  std::string pathway;    // representative pathway, 1-based, or empty
  Complex amplitude;
};

std::vector<AmplitudeRow> amplitude_rows(const AmplitudeTable& table, const EncodingScheme& scheme,
                                         const TranslationMap& map, double epsilon_abs);

// Columns: m, signature, pathway, magnitude, phase_deg, re, im.
void write_amplitudes_csv(const std::filesystem::path& path, const std::vector<AmplitudeRow>& rows);
std::vector<AmplitudeRow> read_amplitudes_csv(const std::filesystem::path& path);

void write_populations_csv(const std::filesystem::path& path, const std::vector<std::vector<double>>& populations,
                           double dt);
std::vector<std::vector<double>> read_populations_csv(const std::filesystem::path& path, double* dt = nullptr);

std::string format_pathway(const Pathway& pathway);
std::string format_signature(const Signature& signature);
double phase_degrees(Complex z);  // in [0, 360)

/// Arrows from the origin for every row, labelled by frequency, plus a red
/// arrow for the total.
std::string arrow_plot_svg(const std::vector<AmplitudeRow>& rows, Complex total, const std::string& title);
std::string population_plot_svg(const std::vector<std::vector<double>>& populations, double dt,
                                 const std::string& title);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pathenc
