#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pathenc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// A closed d-level system H(t) = H0 - sum_c mu_c eps_c(t) in the eigenbasis
/// of H0 (atomic units, hbar = 1).
///
/// Every dipole must be Hermitian with a zero diagonal. The allowed
/// transitions are the union of the strict-upper-triangle sparsity patterns
/// of all dipoles, stored as 0-based pairs (i, j) with i < j in ascending
/// order.
class QuantumSystem {
 public:
  QuantumSystem(std::vector<double> energies, std::vector<CMatrix> dipoles);

  int dimension() const { return static_cast<int>(energies_.size()); }
  std::size_t dipole_count() const { return dipoles_.size(); }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<CMatrix>& dipoles() const { return dipoles_; }
  const std::vector<std::pair<int, int>>& transitions() const { return transitions_; }

 private:
  std::vector<double> energies_;
  std::vector<CMatrix> dipoles_;
  std::vector<std::pair<int, int>> transitions_;
};

QuantumSystem build_system(std::vector<double> energies, std::vector<CMatrix> dipoles);

/// Piecewise-constant control samples on a uniform grid. Channel c drives
/// dipole c; sample n holds on [n dt, (n + 1) dt).
class ControlField {
 public:
  ControlField(double dt, std::vector<std::vector<double>> samples);

  double dt() const { return dt_; }
  std::size_t channels() const { return samples_.size(); }
  std::size_t steps() const { return samples_.front().size(); }
  double horizon() const { return dt_ * static_cast<double>(steps()); }
  double sample(std::size_t channel, std::size_t step) const { return samples_[channel][step]; }
  const std::vector<std::vector<double>>& samples() const { return samples_; }

  ControlField scaled(double factor) const;
  // Splits every step into `factor` equal sub-steps holding the same value.
  ControlField refined(int factor) const;

  static ControlField zeros(double dt, std::size_t channels, std::size_t steps);

 private:
  double dt_;
  std::vector<std::vector<double>> samples_;
};

struct Propagator {
  CMatrix matrix;
  double s_value = 0.0;
};

// Optional replacement coupling matrices (e.g. modulated dipoles mu_c(s)).
// An empty span means "use the system's own dipoles".
using DipoleOverrides = std::span<const CMatrix>;

/// exp(-i V_I(n dt) dt) for step n with the field sampled at the left
/// endpoint t = n dt.
CMatrix step_propagator(const QuantumSystem& system, const ControlField& field,
                        std::size_t step, DipoleOverrides overrides = {});

/// Ordered product of all step propagators, latest step leftmost.
Propagator propagate_final(const QuantumSystem& system, const ControlField& field,
                           DipoleOverrides overrides = {}, double s_value = 0.0);

/// U(T) applied to the basis state `initial`; cheaper than the full
/// propagator when only one column is needed.
CVector propagate_state(const QuantumSystem& system, const ControlField& field, int initial,
                        DipoleOverrides overrides = {});

/// Populations |U_ia(n dt)|^2 for n = 0 .. steps (row 0 is the initial state).
std::vector<std::vector<double>> propagate_trajectory(const QuantumSystem& system,
                                                      const ControlField& field, int initial);

bool is_hermitian(const CMatrix& m, double tolerance = 1e-12);

}  // namespace pathenc
