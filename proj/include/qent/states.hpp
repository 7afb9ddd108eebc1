#pragma once

// State families used by the studies. Truncated Fock states are
// renormalised and carry the discarded probability weight.

#include <optional>

#include "qent/qcore.hpp"

namespace qent {

inline constexpr double kDefaultTailTolerance = 1e-10;

struct TruncationReport {
  int cutoff_a = 0;
  int cutoff_b = 0;
  double discarded_weight = 0.0;
};

/// Fixed cutoff, or the smallest cutoff meeting the tail tolerance when
/// `cutoff` is empty.
struct TruncationPolicy {
  std::optional<int> cutoff;
  double tail_tolerance = kDefaultTailTolerance;
};

class PureState {
 public:
  PureState(ComplexVector amplitudes, BipartiteSpace space, TruncationReport truncation = {});

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  const BipartiteSpace& space() const noexcept { return space_; }
  const TruncationReport& truncation() const noexcept { return truncation_; }

 private:
  ComplexVector amplitudes_;
  BipartiteSpace space_;
  TruncationReport truncation_;
};

class MixedState {
 public:
  MixedState(ComplexMatrix rho, BipartiteSpace space, TruncationReport truncation = {});

  static MixedState from_pure(const PureState& psi, std::size_t memory_cap = kDefaultMemoryCap);

  const ComplexMatrix& rho() const noexcept { return rho_; }
  const BipartiteSpace& space() const noexcept { return space_; }
  const TruncationReport& truncation() const noexcept { return truncation_; }

 private:
  ComplexMatrix rho_;
  BipartiteSpace space_;
  TruncationReport truncation_;
};

/// Non-owning view over either state kind.
class StateRef {
 public:
  StateRef(const PureState& s) noexcept : pure_(&s) {}    // NOLINT(google-explicit-constructor)
  StateRef(const MixedState& s) noexcept : mixed_(&s) {}  // NOLINT(google-explicit-constructor)

  bool is_pure() const noexcept { return pure_ != nullptr; }
  const PureState& pure() const;
  const MixedState& mixed() const;
  const BipartiteSpace& space() const noexcept { return pure_ ? pure_->space() : mixed_->space(); }
  const TruncationReport& truncation() const noexcept {
    return pure_ ? pure_->truncation() : mixed_->truncation();
  }

 private:
  const PureState* pure_ = nullptr;
  const MixedState* mixed_ = nullptr;
};

struct LocalPureState {
  ComplexVector amplitudes;
  int cutoff = 0;
  double discarded_weight = 0.0;
};

struct LocalMixedState {
  ComplexMatrix rho;
  int cutoff = 0;
  double discarded_weight = 0.0;
};

PureState bell(int which);
MixedState werner(int which, double p);

/// Probability weight beyond Fock level `cutoff` for a coherent state.
double coherent_tail(Complex alpha, int cutoff);
/// Same for the two-mode squeezed vacuum and the matching thermal state:
/// tanh(r)^(2(cutoff+1)).
double squeezed_tail(double r, int cutoff);

int coherent_cutoff(Complex alpha, double tail_tolerance);
int squeezed_cutoff(double r, double tail_tolerance);

LocalPureState coherent(Complex alpha, const TruncationPolicy& policy = {});
PureState tmsv(double r, const TruncationPolicy& policy = {});
LocalMixedState thermal(double r, const TruncationPolicy& policy = {});
MixedState squeezed_thermal(double p, double r, const TruncationPolicy& policy = {});

/// Exact evolution of |alpha>|beta> under H = n_a n_b for time t.
PureState cross_kerr_evolve(Complex alpha, Complex beta, double t, const TruncationPolicy& policy = {});

PureState product_state(const ComplexVector& psi_a, const ComplexVector& psi_b);
MixedState product_state(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b);

}  // namespace qent
