#include "pathenc/pulse_synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "pathenc/error.hpp"

namespace pathenc {

namespace {

using Controls = std::vector<double>;  // flattened [channel * steps + step]

void check_states(const QuantumSystem& system, int a, int b) {
  const int d = system.dimension();
  if (a < 0 || b < 0 || a >= d || b >= d) {
    throw Error(ErrorKind::DimensionMismatch, "initial or target state out of range");
  }
}

ControlField unflatten(const Controls& x, std::size_t channels, std::size_t steps, double dt) {
  std::vector<std::vector<double>> samples(channels, std::vector<double>(steps));
  for (std::size_t c = 0; c < channels; ++c) {
    std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(c * steps), steps, samples[c].begin());
  }
  return ControlField(dt, std::move(samples));
}

Controls flatten(const ControlField& field) {
  Controls x;
  x.reserve(field.channels() * field.steps());
  for (const auto& channel : field.samples()) x.insert(x.end(), channel.begin(), channel.end());
  return x;
}

double dot(const Controls& u, const Controls& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double max_abs(const Controls& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

// Divided difference of exp(i dt x) on the eigenvalue pair (x, y).
Complex phase_divided_difference(double x, double y, double dt) {
  const Complex i_unit{0.0, 1.0};
  const double gap = x - y;
  if (std::abs(gap) * dt < 1e-8) return i_unit * dt * std::polar(1.0, dt * 0.5 * (x + y));
  return (std::polar(1.0, dt * x) - std::polar(1.0, dt * y)) / gap;
}

}  // namespace

double fidelity(const QuantumSystem& system, const ControlField& field, int a, int b) {
  check_states(system, a, b);
  const CVector psi = propagate_state(system, field, a);
  return std::min(1.0, std::norm(psi(b)));
}

std::vector<std::vector<double>> fidelity_gradient(const QuantumSystem& system, const ControlField& field,
                                                   int a, int b) {
  check_states(system, a, b);
  if (field.channels() != system.dipole_count()) {
    throw Error(ErrorKind::ShapeMismatch, "control channel count does not match dipole count");
  }
  const int d = system.dimension();
  const std::size_t steps = field.steps();
  const std::size_t channels = field.channels();
  const double dt = field.dt();
  const auto& dipoles = system.dipoles();

  // Eigenpairs of the coupling at every step; a single dipole is diagonalized once.
  std::vector<CMatrix> vectors(steps);
  std::vector<Eigen::VectorXd> values(steps);
  std::vector<std::vector<CMatrix>> rotated_dipoles;  // W^dagger mu_c W, shared when single
  const bool single = channels == 1;
  Eigen::SelfAdjointEigenSolver<CMatrix> single_solver;
  if (single) {
    single_solver.compute(dipoles.front());
    rotated_dipoles.push_back(
        {single_solver.eigenvectors().adjoint() * dipoles.front() * single_solver.eigenvectors()});
  }
  auto rotation = [&](std::size_t n) {
    CVector r(d);
    const double t = dt * static_cast<double>(n);
    for (int j = 0; j < d; ++j) r(j) = std::polar(1.0, system.energies()[static_cast<std::size_t>(j)] * t);
    return r;
  };
  for (std::size_t n = 0; n < steps; ++n) {
    if (single) {
      vectors[n] = single_solver.eigenvectors();
      values[n] = single_solver.eigenvalues() * field.sample(0, n);
    } else {
      CMatrix m = dipoles.front() * field.sample(0, n);
      for (std::size_t c = 1; c < channels; ++c) m += dipoles[c] * field.sample(c, n);
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
      vectors[n] = solver.eigenvectors();
      values[n] = solver.eigenvalues();
    }
  }
  auto step_apply = [&](std::size_t n, const CVector& psi) {
    const CVector r = rotation(n);
    CVector coeffs = vectors[n].adjoint() * r.conjugate().cwiseProduct(psi);
    for (int k = 0; k < d; ++k) coeffs(k) *= std::polar(1.0, dt * values[n](k));
    return CVector(r.cwiseProduct(vectors[n] * coeffs));
  };
  auto step_apply_left = [&](std::size_t n, const Eigen::RowVectorXcd& chi) {
    const CVector r = rotation(n);
    Eigen::RowVectorXcd w = chi.cwiseProduct(r.transpose()) * vectors[n];
    for (int k = 0; k < d; ++k) w(k) *= std::polar(1.0, dt * values[n](k));
    return Eigen::RowVectorXcd((w * vectors[n].adjoint()).cwiseProduct(r.conjugate().transpose()));
  };

  std::vector<CVector> forward(steps + 1);
  forward[0] = CVector::Zero(d);
  forward[0](a) = 1.0;
  for (std::size_t n = 0; n < steps; ++n) forward[n + 1] = step_apply(n, forward[n]);
  const Complex amplitude = forward[steps](b);

  std::vector<std::vector<double>> grad(channels, std::vector<double>(steps, 0.0));
  Eigen::RowVectorXcd chi = Eigen::RowVectorXcd::Zero(d);
  chi(b) = 1.0;
  CMatrix phi(d, d);
  for (std::size_t n = steps; n-- > 0;) {
    // chi = <b| P_{N-1} ... P_{n+1}; dU = chi R dX R^dagger psi_n.
    const CVector r = rotation(n);
    const CVector u = vectors[n].adjoint() * r.conjugate().cwiseProduct(forward[n]);
    const Eigen::RowVectorXcd w = chi.cwiseProduct(r.transpose()) * vectors[n];
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) phi(j, k) = phase_divided_difference(values[n](j), values[n](k), dt);
    }
    for (std::size_t c = 0; c < channels; ++c) {
      const CMatrix mu_rot =
          single ? rotated_dipoles.front().front() : CMatrix(vectors[n].adjoint() * dipoles[c] * vectors[n]);
      Complex du{0.0, 0.0};
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) du += w(j) * phi(j, k) * mu_rot(j, k) * u(k);
      }
      grad[c][n] = 2.0 * (std::conj(amplitude) * du).real();
    }
    chi = step_apply_left(n, chi);
  }
  return grad;
}

SynthesisResult grape_optimize(const QuantumSystem& system, const SynthesisConfig& config) {
  check_states(system, config.initial, config.target);
  if (!(config.dt > 0.0) || !(config.horizon > 0.0)) {
    throw Error(ErrorKind::InvalidField, "horizon and time step must be positive");
  }
  const double ratio = config.horizon / config.dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps == 0 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
    throw Error(ErrorKind::InvalidField, "horizon must be an integer number of time steps");
  }
  if (!(config.amplitude_bound > 0.0)) throw Error(ErrorKind::InvalidField, "amplitude bound must be positive");
  const std::size_t channels = system.dipole_count();
  const double bound = config.amplitude_bound;

  SynthesisResult result{ControlField::zeros(config.dt, channels, steps), {}};
  ConvergenceReport& report = result.report;
  if (config.initial == config.target) {
    report.converged = true;
    report.fidelity = fidelity(system, result.field, config.initial, config.target);
    report.history.push_back(report.fidelity);
    report.stop_reason = "initial state equals target";
    return result;
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> start(-bound, bound);
  Controls x(channels * steps);
  for (double& v : x) v = start(rng);

  auto evaluate = [&](const Controls& controls) {
    return fidelity(system, unflatten(controls, channels, steps, config.dt), config.initial, config.target);
  };
  auto gradient = [&](const Controls& controls) {
    const auto g = fidelity_gradient(system, unflatten(controls, channels, steps, config.dt), config.initial,
                                     config.target);
    return flatten(ControlField(config.dt, g));
  };
  auto project = [&](Controls& controls) {
    for (double& v : controls) v = std::clamp(v, -bound, bound);
  };

  double f = evaluate(x);
  Controls g = gradient(x);
  report.history.push_back(f);

  constexpr std::size_t memory = 10;
  std::deque<std::pair<Controls, Controls>> pairs;  // (s, y) with y = g_old - g_new

  auto steepest = [&](const Controls& grad) {
    const double gmax = max_abs(grad);
    Controls p = grad;
    const double scale = gmax > 0.0 ? 0.1 * bound / gmax : 0.0;
    for (double& v : p) v *= scale;
    return p;
  };
  auto quasi_newton = [&](const Controls& grad) {
    // Two-loop recursion on the minimization of -F, returned as an ascent direction.
    Controls q(grad.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = -grad[i];
    std::vector<double> alpha(pairs.size());
    for (std::size_t k = pairs.size(); k-- > 0;) {
      const auto& [s, y] = pairs[k];
      alpha[k] = dot(s, q) / dot(y, s);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * y[i];
    }
    const auto& [s_last, y_last] = pairs.back();
    const double gamma = dot(s_last, y_last) / dot(y_last, y_last);
    for (double& v : q) v *= gamma;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& [s, y] = pairs[k];
      const double beta = dot(y, q) / dot(y, s);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += s[i] * (alpha[k] - beta);
    }
    for (double& v : q) v = -v;
    return q;
  };
  auto line_search = [&](const Controls& direction, Controls& trial, double& f_trial) {
    double step = 1.0;
    for (int attempt = 0; attempt < 40; ++attempt, step *= 0.5) {
      trial = x;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += step * direction[i];
      project(trial);
      f_trial = evaluate(trial);
      if (f_trial > f) return true;
    }
    return false;
  };

  while (true) {
    if (1.0 - f <= config.target_infidelity) {
      report.converged = true;
      report.stop_reason = "target infidelity reached";
      break;
    }
    if (report.iterations >= config.max_iterations) {
      report.stop_reason = "iteration limit reached";
      break;
    }
    Controls direction = pairs.empty() ? steepest(g) : quasi_newton(g);
    if (dot(direction, g) <= 0.0) {
      pairs.clear();
      direction = steepest(g);
    }
    Controls trial;
    double f_trial = f;
    bool accepted = line_search(direction, trial, f_trial);
    if (!accepted && !pairs.empty()) {
      pairs.clear();
      accepted = line_search(steepest(g), trial, f_trial);
    }
    if (!accepted) {
      report.stop_reason = "line search stalled";
      break;
    }
    Controls g_trial = gradient(trial);
    Controls s(x.size());
    Controls y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = trial[i] - x[i];
      y[i] = g[i] - g_trial[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      pairs.emplace_back(std::move(s), std::move(y));
      if (pairs.size() > memory) pairs.pop_front();
    }
    x = std::move(trial);
    g = std::move(g_trial);
    f = f_trial;
    ++report.iterations;
    report.history.push_back(f);
  }
  report.fidelity = f;
  result.field = unflatten(x, channels, steps, config.dt);
  return result;
}

}  // namespace pathenc
