#include "pathenc/quantum_system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "pathenc/error.hpp"
#include "step_kernel.hpp"

namespace pathenc {

bool is_hermitian(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance * scale;
}

QuantumSystem::QuantumSystem(std::vector<double> energies, std::vector<CMatrix> dipoles)
    : energies_(std::move(energies)), dipoles_(std::move(dipoles)) {
  const auto d = static_cast<Eigen::Index>(energies_.size());
  if (d < 2) {
    throw Error(ErrorKind::DimensionMismatch, "a quantum system needs at least two levels");
  }
  if (dipoles_.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "a quantum system needs at least one dipole");
  }
  std::set<std::pair<int, int>> pattern;
  for (std::size_t c = 0; c < dipoles_.size(); ++c) {
    const CMatrix& mu = dipoles_[c];
    if (mu.rows() != d || mu.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  "dipole " + std::to_string(c) + " is not " + std::to_string(d) + "x" +
                      std::to_string(d));
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      if (mu(i, i) != Complex(0.0, 0.0)) {
        throw Error(ErrorKind::NonzeroDiagonal,
                    "dipole " + std::to_string(c) + " has a nonzero diagonal element at " +
                        std::to_string(i));
      }
    }
    if (!is_hermitian(mu)) {
      throw Error(ErrorKind::NonHermitianDipole,
                  "dipole " + std::to_string(c) + " is not Hermitian");
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i + 1; j < d; ++j) {
        if (mu(i, j) != Complex(0.0, 0.0)) pattern.emplace(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  transitions_.assign(pattern.begin(), pattern.end());
}

QuantumSystem build_system(std::vector<double> energies, std::vector<CMatrix> dipoles) {
  return QuantumSystem(std::move(energies), std::move(dipoles));
}

ControlField::ControlField(double dt, std::vector<std::vector<double>> samples)
    : dt_(dt), samples_(std::move(samples)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw Error(ErrorKind::InvalidField, "time step must be positive");
  }
  if (samples_.empty() || samples_.front().empty()) {
    throw Error(ErrorKind::InvalidField, "control field needs at least one channel and one step");
  }
  for (const auto& channel : samples_) {
    if (channel.size() != samples_.front().size()) {
      throw Error(ErrorKind::InvalidField, "control channels have different lengths");
    }
    for (double v : channel) {
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidField, "non-finite control sample");
    }
  }
}

ControlField ControlField::scaled(double factor) const {
  auto samples = samples_;
  for (auto& channel : samples) {
    for (double& v : channel) v *= factor;
  }
  return ControlField(dt_, std::move(samples));
}

ControlField ControlField::refined(int factor) const {
  if (factor < 1) throw Error(ErrorKind::InvalidField, "refinement factor must be >= 1");
  std::vector<std::vector<double>> samples(samples_.size());
  for (std::size_t c = 0; c < samples_.size(); ++c) {
    samples[c].reserve(samples_[c].size() * static_cast<std::size_t>(factor));
    for (double v : samples_[c]) samples[c].insert(samples[c].end(), factor, v);
  }
  return ControlField(dt_ / factor, std::move(samples));
}

ControlField ControlField::zeros(double dt, std::size_t channels, std::size_t steps) {
  return ControlField(dt, std::vector<std::vector<double>>(channels, std::vector<double>(steps, 0.0)));
}

namespace detail {

StepKernel::StepKernel(const QuantumSystem& system, const ControlField& field,
                       DipoleOverrides overrides)
    : system_(system), field_(field) {
  if (overrides.empty()) {
    couplings_ = system.dipoles();
  } else {
    if (overrides.size() != system.dipole_count()) {
      throw Error(ErrorKind::ShapeMismatch, "override count does not match dipole count");
    }
    const auto d = system.dimension();
    for (const auto& m : overrides) {
      if (m.rows() != d || m.cols() != d) {
        throw Error(ErrorKind::ShapeMismatch, "override matrix has the wrong shape");
      }
    }
    couplings_.assign(overrides.begin(), overrides.end());
  }
  if (field.channels() != couplings_.size()) {
    throw Error(ErrorKind::ShapeMismatch, "control channel count does not match dipole count");
  }
  hermitian_ = std::all_of(couplings_.begin(), couplings_.end(),
                           [](const CMatrix& m) { return is_hermitian(m); });
  if (hermitian_ && couplings_.size() == 1) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(couplings_.front());
    single_vectors_ = solver.eigenvectors();
    single_values_ = solver.eigenvalues();
    single_diagonalized_ = true;
  }
}

bool StepKernel::field_is_zero(std::size_t step) const {
  for (std::size_t c = 0; c < field_.channels(); ++c) {
    if (field_.sample(c, step) != 0.0) return false;
  }
  return true;
}

CMatrix StepKernel::coupling_at(std::size_t step) const {
  CMatrix m = couplings_.front() * field_.sample(0, step);
  for (std::size_t c = 1; c < couplings_.size(); ++c) m += couplings_[c] * field_.sample(c, step);
  return m;
}

CMatrix StepKernel::inner_exponential(std::size_t step) const {
  const auto d = system_.dimension();
  if (field_is_zero(step)) return CMatrix::Identity(d, d);
  const double dt = field_.dt();
  const Complex i_unit(0.0, 1.0);
  if (single_diagonalized_) {
    const double eps = field_.sample(0, step);
    CVector phases(d);
    for (int k = 0; k < d; ++k) phases(k) = std::polar(1.0, dt * eps * single_values_(k));
    return single_vectors_ * phases.asDiagonal() * single_vectors_.adjoint();
  }
  const CMatrix m = coupling_at(step);
  if (hermitian_) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    CVector phases(d);
    for (int k = 0; k < d; ++k) phases(k) = std::polar(1.0, dt * solver.eigenvalues()(k));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  }
  const CMatrix generator = (i_unit * dt) * m;
  return generator.exp();
}

CVector StepKernel::rotation(std::size_t step) const {
  const double t = field_.dt() * static_cast<double>(step);
  const auto& energies = system_.energies();
  CVector r(system_.dimension());
  for (int j = 0; j < system_.dimension(); ++j) r(j) = std::polar(1.0, energies[j] * t);
  return r;
}

CMatrix StepKernel::step(std::size_t step) const {
  CMatrix x = inner_exponential(step);
  if (field_is_zero(step)) return x;
  const CVector r = rotation(step);
  return r.asDiagonal() * x * r.conjugate().asDiagonal();
}

void StepKernel::apply(std::size_t step, CVector& psi) const {
  if (field_is_zero(step)) return;
  const CVector r = rotation(step);
  CVector rotated = r.conjugate().cwiseProduct(psi);
  if (single_diagonalized_) {
    const double phase_scale = field_.dt() * field_.sample(0, step);
    CVector coeffs = single_vectors_.adjoint() * rotated;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      coeffs(k) *= std::polar(1.0, phase_scale * single_values_(k));
    }
    rotated = single_vectors_ * coeffs;
  } else {
    rotated = inner_exponential(step) * rotated;
  }
  psi = r.cwiseProduct(rotated);
}

}  // namespace detail

CMatrix step_propagator(const QuantumSystem& system, const ControlField& field, std::size_t step,
                        DipoleOverrides overrides) {
  if (step >= field.steps()) {
    throw Error(ErrorKind::ShapeMismatch, "step index out of range");
  }
  detail::StepKernel kernel(system, field, overrides);
  return kernel.step(step);
}

Propagator propagate_final(const QuantumSystem& system, const ControlField& field,
                           DipoleOverrides overrides, double s_value) {
  detail::StepKernel kernel(system, field, overrides);
  const auto d = system.dimension();
  CMatrix u = CMatrix::Identity(d, d);
  for (std::size_t n = 0; n < field.steps(); ++n) {
    if (kernel.field_is_zero(n)) continue;
    u = kernel.step(n) * u;
  }
  return Propagator{std::move(u), s_value};
}

CVector propagate_state(const QuantumSystem& system, const ControlField& field, int initial,
                        DipoleOverrides overrides) {
  if (initial < 0 || initial >= system.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "initial state out of range");
  }
  detail::StepKernel kernel(system, field, overrides);
  CVector psi = CVector::Zero(system.dimension());
  psi(initial) = 1.0;
  for (std::size_t n = 0; n < field.steps(); ++n) kernel.apply(n, psi);
  return psi;
}

std::vector<std::vector<double>> propagate_trajectory(const QuantumSystem& system,
                                                      const ControlField& field, int initial) {
  if (initial < 0 || initial >= system.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "initial state out of range");
  }
  detail::StepKernel kernel(system, field, {});
  CVector psi = CVector::Zero(system.dimension());
  psi(initial) = 1.0;
  std::vector<std::vector<double>> populations;
  populations.reserve(field.steps() + 1);
  auto record = [&] {
    std::vector<double> p(static_cast<std::size_t>(psi.size()));
    for (Eigen::Index i = 0; i < psi.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(psi(i));
    populations.push_back(std::move(p));
  };
  record();
  for (std::size_t n = 0; n < field.steps(); ++n) {
    kernel.apply(n, psi);
    record();
  }
  return populations;
}

}  // namespace pathenc
