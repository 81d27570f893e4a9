#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pathenc/quantum_system.hpp"

namespace pathenc {

struct SynthesisConfig {
  int initial = 0;  // a
  int target = 0;   // b
  double horizon = 0.0;  // T
  double dt = 0.0;
  int max_iterations = 500;
  double target_infidelity = 1e-3;
  std::uint64_t seed = 1;
  double amplitude_bound = 0.0;  // |eps| <= bound; also the range of the random start
};

struct ConvergenceReport {
  bool converged = false;
  int iterations = 0;
  double fidelity = 0.0;
  std::vector<double> history;  // fidelity after each accepted iteration, history[0] = start
  std::string stop_reason;
};

struct SynthesisResult {
  ControlField field;
  ConvergenceReport report;
};

double fidelity(const QuantumSystem& system, const ControlField& field, int a, int b);

// d|<b|U(T)|a>|^2 / d eps_c(n), indexed [channel][step].
std::vector<std::vector<double>> fidelity_gradient(const QuantumSystem& system, const ControlField& field,
                                                   int a, int b);

/// Gradient ascent on |<b|U(T)|a>|^2 with exact gradients, limited-memory
/// quasi-Newton directions and a bound-projected backtracking search that
/// only accepts improvements. Deterministic for a fixed seed. A run that
/// stops short of the target returns its best field with converged = false.
SynthesisResult grape_optimize(const QuantumSystem& system, const SynthesisConfig& config);

}  // namespace pathenc
