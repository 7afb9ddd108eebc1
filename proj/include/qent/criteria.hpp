#pragma once

// Correlation-based separability criteria.
//
// The general family takes two operators per subsystem and four binary
// placement flags. For a separable state
//
//   s_term - e^{i phi} c - e^{-i phi} conj(c) >= 0
//
// where c = Tr(X rho Y rho) is the first trace bracket. The product form
// uses <n_A1><n_B1> + <n_A2><n_B2> as s_term; the joint form uses
// <n_A1 n_B1> + <n_A2 n_B2>.

#include <algorithm>
#include <cmath>
#include <optional>

#include "qent/operators.hpp"
#include "qent/states.hpp"

namespace qent {

inline constexpr double kVerdictTolerance = 1e-10;

/// Negative values below this count as a violation.
inline double verdict_tolerance(double scale) { return kVerdictTolerance * std::max(1.0, std::abs(scale)); }

enum class WitnessVariant { product_form, joint_form };

/// true = 1. The complementary flag (1 - sigma) is applied internally.
struct SigmaFlags {
  bool a1 = true;
  bool a2 = true;
  bool b1 = false;
  bool b2 = false;
};

struct WitnessSpec {
  LocalOperator a1;
  LocalOperator a2;
  LocalOperator b1;
  LocalOperator b2;
  SigmaFlags sigma;
  WitnessVariant variant = WitnessVariant::product_form;
  std::optional<double> phase;  // empty: optimal phase
};

struct WitnessResult {
  double s_term = 0.0;
  Complex trace_term;  // first trace bracket
  double phi_used = 0.0;
  double value = 0.0;
  bool entangled = false;
};

struct TraceBrackets {
  Complex first;
  Complex second;
};

/// Evaluates the general family. Pure states never materialise rho.
WitnessResult evaluate_general(const WitnessSpec& spec, StateRef state,
                               std::size_t memory_cap = kDefaultMemoryCap);

/// Both trace brackets, each computed from its own operator product. The
/// second must equal conj(first).
TraceBrackets trace_brackets(const WitnessSpec& spec, StateRef state,
                             std::size_t memory_cap = kDefaultMemoryCap);

/// <n_A><n_B> - Tr(n_A n_B rho^2). Equals half of evaluate_general with
/// A_i = A, B_i = B, sigma_A = 1, sigma_B = 0, phi = 0, product form.
double witness_product(const LocalOperator& a, const LocalOperator& b, StateRef state,
                       std::size_t memory_cap = kDefaultMemoryCap);

/// <n_A><n_B>, the scale of witness_product.
double number_product(const LocalOperator& a, const LocalOperator& b, StateRef state);

/// 2<n_A n_B> - e^{i phi} <A^dag B rho A^dag B> - c.c.; the joint form with
/// sigma_A1 = sigma_B2 = 1, sigma_A2 = sigma_B1 = 0.
WitnessResult witness_phase(const LocalOperator& a, const LocalOperator& b, StateRef state,
                            std::optional<double> phase = std::nullopt,
                            std::size_t memory_cap = kDefaultMemoryCap);

struct HzResult {
  double form1_margin = 0.0;  // |<AB>|^2 - <n_A><n_B>
  double form2_margin = 0.0;  // |<AB^dag>|^2 - <n_A n_B>
  bool entangled_1 = false;
  bool entangled_2 = false;
};

HzResult hz_test(const LocalOperator& a, const LocalOperator& b, StateRef state);

struct DgczResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double tau = 0.0;
  double tau_prime = 0.0;
  double margin = 0.0;
  bool entangled = false;
};

/// Cross-Kerr variance criterion
///   d(p_a + tau t alpha n_b)^2 + d(p_b + tau' t beta n_a)^2
///     >= |tau' t beta <x_a>| + |tau t alpha <x_b>|
/// minimised over (tau, tau') in closed form.
DgczResult dgcz_crosskerr(const PureState& state, double alpha, double beta, double t);

/// The same criterion at fixed (tau, tau').
DgczResult dgcz_crosskerr_at(const PureState& state, double alpha, double beta, double t, double tau,
                             double tau_prime);

struct KerrWitness {
  double value = 0.0;
  double theta = 0.0;
  double s_term = 0.0;  // <n_A><n_B> at the chosen theta
  bool entangled = false;
};

/// min over a uniform theta grid on [0, 2 pi) of
/// witness_product(quadrature(theta), b, state).
KerrWitness kerr_witness(const PureState& state, int theta_points = 64);

}  // namespace qent
