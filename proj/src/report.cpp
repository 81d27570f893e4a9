#include "pathenc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "pathenc/error.hpp"

namespace pathenc {

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::MissingResults, "cannot write " + path.string());
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingResults, "cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw Error(ErrorKind::MissingResults, path.string() + " is empty");
  return rows;
}

double to_double(const std::string& s, const std::filesystem::path& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw Error(ErrorKind::MissingResults, path.string() + ": bad number '" + s + "'");
  return v;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#d62728"};

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

void write_pulse_csv(const std::filesystem::path& path, const ControlField& field) {
  auto out = open_out(path);
  out << "step,t";
  for (std::size_t c = 0; c < field.channels(); ++c) out << ",eps_" << c + 1;
  out << '\n';
  for (std::size_t n = 0; n < field.steps(); ++n) {
    out << n << ',' << exact(field.dt() * static_cast<double>(n));
    for (std::size_t c = 0; c < field.channels(); ++c) out << ',' << exact(field.sample(c, n));
    out << '\n';
  }
}

ControlField read_pulse_csv(const std::filesystem::path& path, std::optional<double> dt) {
  const auto rows = read_csv(path);
  if (rows.front().size() < 3) throw Error(ErrorKind::InvalidField, path.string() + ": expected step,t,eps columns");
  const std::size_t channels = rows.front().size() - 2;
  std::vector<std::vector<double>> samples(channels);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != channels + 2) throw Error(ErrorKind::InvalidField, path.string() + ": ragged row");
    for (std::size_t c = 0; c < channels; ++c) samples[c].push_back(to_double(rows[r][c + 2], path));
  }
  if (!dt) {
    if (rows.size() < 3) throw Error(ErrorKind::InvalidField, path.string() + ": dt needed for a one-step pulse");
    dt = to_double(rows[2][1], path);
  }
  return ControlField(*dt, std::move(samples));
}

void write_convergence_json(const std::filesystem::path& path, const SynthesisConfig& config,
                            const ConvergenceReport& report) {
  nlohmann::json j;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["fidelity"] = report.fidelity;
  j["infidelity"] = 1.0 - report.fidelity;
  j["stop_reason"] = report.stop_reason;
  j["history"] = report.history;
  j["config"] = {{"initial", config.initial + 1},
                 {"target", config.target + 1},
                 {"horizon", config.horizon},
                 {"dt", config.dt},
                 {"max_iterations", config.max_iterations},
                 {"target_infidelity", config.target_infidelity},
                 {"seed", config.seed},
                 {"amplitude_bound", config.amplitude_bound}};
  write_text(path, j.dump(2) + "\n");
}

void write_spectrum_csv(const std::filesystem::path& path, const AmplitudeTable& table) {
  auto out = open_out(path);
  out << "bin,m,re,im\n";
  for (std::size_t bin = 0; bin < table.size(); ++bin) {
    const Complex z = table.bins()[bin];
    out << bin << ',' << table.frequency_of_bin(bin) << ',' << exact(z.real()) << ',' << exact(z.imag()) << '\n';
  }
}

AmplitudeTable read_spectrum_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  std::vector<Complex> bins;
  bool hermitian = false;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 4) throw Error(ErrorKind::MissingResults, path.string() + ": ragged row");
    bins.emplace_back(to_double(rows[r][2], path), to_double(rows[r][3], path));
    if (rows[r][1].front() == '-') hermitian = true;
  }
  return AmplitudeTable(std::move(bins), hermitian);
}

std::vector<AmplitudeRow> amplitude_rows(const AmplitudeTable& table, const EncodingScheme& scheme,
                                         const TranslationMap& map, double epsilon_abs) {
  std::vector<AmplitudeRow> rows;
  for (const ClassAmplitude& entry : significant(table, epsilon_abs)) {
    AmplitudeRow row;
    row.m = entry.m;
    row.amplitude = entry.amplitude;
    try {
      row.signature = format_signature(decompose(scheme, entry.m));
    } catch (const Error&) {
      row.signature = "out-of-domain";
    }
    if (auto it = map.find({table.final_state(), entry.m}); it != map.end()) {
      row.pathway = format_pathway(it->second);
    } else if (entry.m == 0 && table.initial() == table.final_state()) {
      row.pathway = format_pathway(Pathway{{table.initial()}});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_amplitudes_csv(const std::filesystem::path& path, const std::vector<AmplitudeRow>& rows) {
  auto out = open_out(path);
  out << "m,signature,pathway,magnitude,phase_deg,re,im\n";
  for (const auto& row : rows) {
    out << row.m << ',' << row.signature << ',' << row.pathway << ',' << exact(std::abs(row.amplitude)) << ','
        << fixed(phase_degrees(row.amplitude), 3) << ',' << exact(row.amplitude.real()) << ','
        << exact(row.amplitude.imag()) << '\n';
  }
}

std::vector<AmplitudeRow> read_amplitudes_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  std::vector<AmplitudeRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 7) throw Error(ErrorKind::MissingResults, path.string() + ": ragged row");
    AmplitudeRow row;
    row.m = std::stoll(rows[r][0]);
    row.signature = rows[r][1];
    row.pathway = rows[r][2];
    row.amplitude = {to_double(rows[r][5], path), to_double(rows[r][6], path)};
    out.push_back(std::move(row));
  }
  return out;
}

void write_populations_csv(const std::filesystem::path& path, const std::vector<std::vector<double>>& populations,
                           double dt) {
  auto out = open_out(path);
  out << "step,t";
  const std::size_t d = populations.empty() ? 0 : populations.front().size();
  for (std::size_t i = 0; i < d; ++i) out << ",p_" << i + 1;
  out << '\n';
  for (std::size_t n = 0; n < populations.size(); ++n) {
    out << n << ',' << exact(dt * static_cast<double>(n));
    for (double p : populations[n]) out << ',' << exact(p);
    out << '\n';
  }
}

std::vector<std::vector<double>> read_populations_csv(const std::filesystem::path& path, double* dt) {
  const auto rows = read_csv(path);
  std::vector<std::vector<double>> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::vector<double> p;
    for (std::size_t c = 2; c < rows[r].size(); ++c) p.push_back(to_double(rows[r][c], path));
    out.push_back(std::move(p));
  }
  if (dt) *dt = rows.size() >= 3 ? to_double(rows[2][1], path) : 0.0;
  return out;
}

std::string format_pathway(const Pathway& pathway) {
  std::string s;
  for (std::size_t k = 0; k < pathway.states.size(); ++k) {
    if (k) s += " -> ";
    s += std::to_string(pathway.states[k] + 1);
  }
  return s;
}

std::string format_signature(const Signature& signature) {
  std::string s;
  for (std::size_t k = 0; k < signature.digits.size(); ++k) {
    if (k) s += ' ';
    s += std::to_string(signature.digits[k]);
  }
  return s;
}

double phase_degrees(Complex z) {
  if (z == Complex{}) return 0.0;
  double deg = std::arg(z) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

std::string arrow_plot_svg(const std::vector<AmplitudeRow>& rows, Complex total, const std::string& title) {
  constexpr double size = 640.0;
  constexpr double margin = 50.0;
  constexpr double half = (size - 2 * margin) / 2.0;
  const double cx = size / 2.0;
  const double cy = size / 2.0 + 10.0;
  double extent = std::abs(total);
  for (const auto& row : rows) extent = std::max(extent, std::abs(row.amplitude));
  if (extent <= 0.0) extent = 1.0;
  extent *= 1.1;
  auto px = [&](Complex z) { return std::pair{cx + half * z.real() / extent, cy - half * z.imag() / extent}; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 20
      << "\" viewBox=\"0 0 " << size << ' ' << size + 20 << "\" font-family=\"sans-serif\">\n";
  svg << "<defs>\n"
      << "<marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">"
         "<path d=\"M0,0 L8,4 L0,8 z\" fill=\"#333\"/></marker>\n"
      << "<marker id=\"head-total\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">"
         "<path d=\"M0,0 L8,4 L0,8 z\" fill=\"#d62728\"/></marker>\n"
      << "</defs>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << cx << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << cy << "\" x2=\"" << size - margin << "\" y2=\"" << cy
      << "\" stroke=\"#bbb\"/>\n";
  svg << "<line x1=\"" << cx << "\" y1=\"" << cy - half << "\" x2=\"" << cx << "\" y2=\"" << cy + half
      << "\" stroke=\"#bbb\"/>\n";
  svg << "<text x=\"" << size - margin << "\" y=\"" << cy + 16 << "\" text-anchor=\"end\" font-size=\"11\">Re "
      << fixed(extent, 4) << "</text>\n";
  svg << "<text x=\"" << cx + 4 << "\" y=\"" << cy - half + 10 << "\" font-size=\"11\">Im " << fixed(extent, 4)
      << "</text>\n";
  for (const auto& row : rows) {
    const auto [x, y] = px(row.amplitude);
    svg << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << fixed(x, 2) << "\" y2=\"" << fixed(y, 2)
        << "\" stroke=\"#333\" stroke-width=\"1.5\" marker-end=\"url(#head)\"/>\n";
    svg << "<text x=\"" << fixed(x + 4, 2) << "\" y=\"" << fixed(y - 4, 2) << "\" font-size=\"12\">" << row.m
        << "</text>\n";
  }
  const auto [tx, ty] = px(total);
  svg << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << fixed(tx, 2) << "\" y2=\"" << fixed(ty, 2)
      << "\" stroke=\"#d62728\" stroke-width=\"2.5\" marker-end=\"url(#head-total)\"/>\n";
  svg << "<text x=\"" << fixed(tx + 4, 2) << "\" y=\"" << fixed(ty + 14, 2)
      << "\" font-size=\"12\" fill=\"#d62728\">sum</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string population_plot_svg(const std::vector<std::vector<double>>& populations, double dt,
                                const std::string& title) {
  constexpr double width = 760.0;
  constexpr double height = 420.0;
  constexpr double left = 60.0;
  constexpr double right = 130.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const std::size_t steps = populations.empty() ? 0 : populations.size() - 1;
  const std::size_t d = populations.empty() ? 0 : populations.front().size();
  const double horizon = dt * static_cast<double>(steps);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = top + plot_h * (1.0 - k / 4.0);
    svg << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << fixed(k / 4.0, 2) << "</text>\n";
  }
  svg << "<text x=\"" << left << "\" y=\"" << height - 15 << "\" font-size=\"11\">0</text>\n";
  svg << "<text x=\"" << left + plot_w << "\" y=\"" << height - 15 << "\" text-anchor=\"end\" font-size=\"11\">t = "
      << exact(horizon) << "</text>\n";
  // Long trajectories are thinned to at most ~2000 points per curve.
  const std::size_t stride = std::max<std::size_t>(1, steps / 2000);
  for (std::size_t i = 0; i < d; ++i) {
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 10] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t n = 0; n <= steps; n += stride) {
      const double x = left + (steps ? plot_w * static_cast<double>(n) / static_cast<double>(steps) : 0.0);
      const double y = top + plot_h * (1.0 - populations[n][i]);
      svg << fixed(x, 2) << ',' << fixed(y, 2) << ' ';
    }
    if (steps % stride != 0) {
      const double y = top + plot_h * (1.0 - populations[steps][i]);
      svg << fixed(left + plot_w, 2) << ',' << fixed(y, 2);
    }
    svg << "\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(i);
    svg << "<line x1=\"" << width - right + 12 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 32 << "\" y2=\""
        << ly << "\" stroke=\"" << kPalette[i % 10] << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << width - right + 38 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">|" << i + 1
        << "&#x27E9;</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pathenc
