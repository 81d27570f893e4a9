#pragma once

#include <vector>

#include <Eigen/Eigenvalues>

#include "pathenc/quantum_system.hpp"

namespace pathenc::detail {

// Computes interaction-picture step propagators for one coupling set.
//
// exp(-i V_I(t) dt) = R(t) exp(i dt M) R(t)^dagger with R(t) = exp(i H0 t)
// diagonal and M = sum_c eps_c mu_c. The inner exponential goes through an
// eigendecomposition when every coupling is Hermitian (once up front for a
// single coupling, per step otherwise) and through scaling and squaring
// otherwise.
class StepKernel {
 public:
  StepKernel(const QuantumSystem& system, const ControlField& field, DipoleOverrides overrides);

  bool hermitian() const { return hermitian_; }
  const std::vector<CMatrix>& couplings() const { return couplings_; }

  // exp(i dt M_n), without the interaction-picture rotation.
  CMatrix inner_exponential(std::size_t step) const;

  // Full step propagator P_n.
  CMatrix step(std::size_t step) const;

  // psi <- P_n psi.
  void apply(std::size_t step, CVector& psi) const;

  // e^{i E_j t_n} for the left endpoint of step n.
  CVector rotation(std::size_t step) const;

  bool field_is_zero(std::size_t step) const;

 private:
  CMatrix coupling_at(std::size_t step) const;

  const QuantumSystem& system_;
  const ControlField& field_;
  std::vector<CMatrix> couplings_;
  bool hermitian_ = true;
  bool single_diagonalized_ = false;
  CMatrix single_vectors_;
  Eigen::VectorXd single_values_;
};

}  // namespace pathenc::detail
