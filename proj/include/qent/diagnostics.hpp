#pragma once

// Purity, estimators of Tr(X rho^2), negativity and entanglement entropy.

#include <vector>

#include "qent/operators.hpp"
#include "qent/states.hpp"

namespace qent {

/// Tr(rho^2); exactly 1 for pure states.
double purity(StateRef state);

/// d^2 Hermitian matrices, orthonormal under Tr(M_k M_l).
struct ObservableBasis {
  Index dim = 0;
  std::vector<ComplexMatrix> elements;
};

/// I/sqrt(d), then symmetric and antisymmetric off-diagonal pairs, then
/// traceless diagonal elements.
ObservableBasis hermitian_operator_basis(Index d);

struct PurityFromBasis {
  double via_expectations = 0.0;  // sum_l <M_l>^2
  double via_variances = 0.0;     // d - sum_l d(M_l)^2
};

/// `state` is treated as a single system of dimension dim_total.
PurityFromBasis purity_from_basis(StateRef state, const ObservableBasis& basis);

enum class EstimatorKind { spectral, meanfield };

struct SpectralEstimate {
  double value = 0.0;
  /// X was positive semidefinite, so value <= Tr(X rho^2) holds.
  bool bounded = false;
};

/// sum_n P_n^2 X_n with P_n = <X_n|rho|X_n>. Inside degenerate eigenspaces
/// the value depends on the eigenbasis; the upper bound does not.
SpectralEstimate estimator_spectral(const ComplexMatrix& x, StateRef state);

/// Tr(X rho) Tr(rho^2).
double estimator_meanfield(const ComplexMatrix& x, StateRef state);

/// Meanfield underestimates Tr(X rho^2) for a dominant component p > 1/2
/// whose <X> is at least the noise component's.
bool meanfield_valid(double p, double x_target, double x_noise);

struct EstimatedWitness {
  double value = 0.0;
  /// spectral: the estimator is a guaranteed lower bound (always true for
  /// n_A n_B). meanfield: false; the caller must establish validity.
  bool unconditional = false;
};

/// <n_A><n_B> - E(n_A n_B, rho).
EstimatedWitness estimated_witness(const LocalOperator& a, const LocalOperator& b, StateRef state,
                                   EstimatorKind kind);

/// Eigenvalues of the partial transpose below this are negative.
inline constexpr double kNegativityThreshold = 1e-12;

double negativity(StateRef state);

/// Entanglement entropy in bits from the Schmidt values.
double entanglement_entropy(const PureState& psi);

}  // namespace qent
