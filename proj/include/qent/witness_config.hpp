#pragma once

// Key-value description of one general-witness evaluation.
//
//   # comment
//   state = werner2        bell1 bell2 werner1 werner2 tmsv squeezed_thermal cross_kerr
//   p = 0.8
//   variant = product      product | joint
//   sigma_a1 = 1
//   op_a1 = sigma_minus    sigma_minus sigma_plus a adag n x p identity quadrature:<theta>
//   phase = optimal        optimal | <radians>
//
// Keys: state, p, r, alpha, beta, t, cutoff, variant, sigma_a1, sigma_a2,
// sigma_b1, sigma_b2, op_a1, op_a2, op_b1, op_b2, phase. Unknown keys and
// malformed values are invalid_argument errors.

#include <map>
#include <string>

#include "qent/criteria.hpp"

namespace qent {

struct WitnessConfig {
  std::map<std::string, std::string> values;
};

WitnessConfig parse_witness_config(const std::string& text);
WitnessConfig load_witness_config(const std::string& path);

/// Resolves an operator name against a subsystem of dimension `dim`.
LocalOperator named_operator(const std::string& name, Side side, Index dim);

struct WitnessJobResult {
  std::string state;
  WitnessVariant variant = WitnessVariant::product_form;
  WitnessResult result;
  TruncationReport truncation;
};

WitnessJobResult run_witness_config(const WitnessConfig& config,
                                    double tail_tolerance = kDefaultTailTolerance);

std::string to_csv(const WitnessJobResult& job);

}  // namespace qent
