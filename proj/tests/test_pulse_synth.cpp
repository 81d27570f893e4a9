#include <doctest.h>

#include <random>

#include "pathenc/error.hpp"
#include "pathenc/pulse_synth.hpp"
#include "support.hpp"

using namespace pathenc;

namespace {

// Central differences on randomly chosen coordinates; returns the worst relative error.
double gradient_check(const QuantumSystem& sys, const ControlField& field, int a, int b, std::mt19937_64& rng,
                      int coordinates) {
  const auto g = fidelity_gradient(sys, field, a, b);
  double scale = 0.0;
  for (const auto& ch : field.samples()) {
    for (double v : ch) scale = std::max(scale, std::abs(v));
  }
  const double h = 1e-6 * scale;
  std::uniform_int_distribution<std::size_t> pick_c(0, field.channels() - 1), pick_n(0, field.steps() - 1);
  double worst = 0.0;
  for (int k = 0; k < coordinates; ++k) {
    const std::size_t c = pick_c(rng), n = pick_n(rng);
    auto plus = field.samples(), minus = field.samples();
    plus[c][n] += h;
    minus[c][n] -= h;
    const double fd = (fidelity(sys, ControlField(field.dt(), plus), a, b) -
                       fidelity(sys, ControlField(field.dt(), minus), a, b)) /
                      (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[c][n]) / std::max(std::abs(g[c][n]), 1e-300));
  }
  return worst;
}

}  // namespace

TEST_CASE("fidelity of the zero field") {
  const QuantumSystem sys = testing::three_level();
  const ControlField zero = ControlField::zeros(20.0, 1, 10);
  CHECK(fidelity(sys, zero, 0, 2) == 0.0);
  CHECK(fidelity(sys, zero, 1, 1) == 1.0);
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(123);
  const QuantumSystem sys = testing::three_level();
  const ControlField f = testing::random_field(rng, 20.0, 1, 200, 0.0035);
  CHECK(gradient_check(sys, f, 0, 2, rng, 5) < 1e-5);
  const QuantumSystem qubits = testing::three_qubit();
  const ControlField g = testing::random_field(rng, 1e-5, 2, 100, 12000.0);
  CHECK(gradient_check(qubits, g, 0, 1, rng, 5) < 1e-5);
}

TEST_CASE("a = b returns immediately") {
  SynthesisConfig cfg = testing::three_level_synthesis();
  cfg.target = cfg.initial;
  const auto res = grape_optimize(testing::three_level(), cfg);
  CHECK(res.report.converged);
  CHECK(res.report.iterations == 0);
  CHECK(res.report.fidelity == 1.0);
  for (double v : res.field.samples()[0]) CHECK(v == 0.0);
}

TEST_CASE("two-level transfer") {
  CMatrix mu(2, 2);
  mu << 0.0, 1.0, 1.0, 0.0;
  const QuantumSystem sys = build_system({0.0, 0.01}, {mu});
  SynthesisConfig cfg;
  cfg.initial = 0;
  cfg.target = 1;
  cfg.horizon = 3000.0;  // several periods of 2 pi / 0.01
  cfg.dt = 10.0;
  cfg.amplitude_bound = 0.01;
  cfg.target_infidelity = 1e-4;
  cfg.max_iterations = 300;
  const auto res = grape_optimize(sys, cfg);
  CHECK(res.report.fidelity >= 0.999);
  CHECK(res.field.steps() == 300);
}

TEST_CASE("three-level transfer, monotone and reproducible") {
  const QuantumSystem sys = testing::three_level();
  const auto cfg = testing::three_level_synthesis();
  const auto res = grape_optimize(sys, cfg);
  CHECK(res.report.converged);
  CHECK(res.report.fidelity >= 0.99);
  CHECK(res.report.fidelity == doctest::Approx(fidelity(sys, res.field, 0, 2)).epsilon(1e-12));
  for (std::size_t k = 1; k < res.report.history.size(); ++k) {
    CHECK(res.report.history[k] >= res.report.history[k - 1]);
  }
  for (double v : res.field.samples()[0]) CHECK(std::abs(v) <= cfg.amplitude_bound);
  const auto again = grape_optimize(sys, cfg);
  CHECK(again.field.samples() == res.field.samples());
  auto other = cfg;
  other.seed = 3;
  CHECK(grape_optimize(sys, other).field.samples() != res.field.samples());
}

TEST_CASE("iteration limit reports non-convergence with the best field") {
  const QuantumSystem sys = testing::three_level();
  auto cfg = testing::three_level_synthesis();
  cfg.max_iterations = 2;
  cfg.target_infidelity = 1e-9;
  const auto res = grape_optimize(sys, cfg);
  CHECK_FALSE(res.report.converged);
  CHECK(res.report.iterations <= 2);
  CHECK(res.report.fidelity == doctest::Approx(fidelity(sys, res.field, 0, 2)).epsilon(1e-12));
  CHECK(res.report.fidelity >= res.report.history.front());
}

TEST_CASE("synthesis configuration is validated") {
  const QuantumSystem sys = testing::three_level();
  auto cfg = testing::three_level_synthesis();
  cfg.dt = 30.0;  // 20000 / 30 is not integral
  CHECK_THROWS_AS(grape_optimize(sys, cfg), Error);
  cfg = testing::three_level_synthesis();
  cfg.amplitude_bound = 0.0;
  CHECK_THROWS_AS(grape_optimize(sys, cfg), Error);
  cfg = testing::three_level_synthesis();
  cfg.target = 5;
  CHECK_THROWS_AS(grape_optimize(sys, cfg), Error);
}
