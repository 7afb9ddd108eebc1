#include "qent/states.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace qent {

PureState::PureState(ComplexVector amplitudes, BipartiteSpace space, TruncationReport truncation)
    : amplitudes_(std::move(amplitudes)), space_(space), truncation_(truncation) {
  if (amplitudes_.size() != space_.dim_total()) {
    fail(ErrorCode::dimension_mismatch, "PureState: amplitude count != dim_total");
  }
  if (!amplitudes_.allFinite()) fail(ErrorCode::numerical, "PureState: non-finite amplitude");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    fail(ErrorCode::invalid_argument, "PureState: norm " + std::to_string(norm) + " is not 1");
  }
}

MixedState::MixedState(ComplexMatrix rho, BipartiteSpace space, TruncationReport truncation)
    : rho_(std::move(rho)), space_(space), truncation_(truncation) {
  require_square(rho_, "MixedState");
  if (rho_.rows() != space_.dim_total()) {
    fail(ErrorCode::dimension_mismatch, "MixedState: matrix dimension != dim_total");
  }
  require_finite(rho_, "MixedState");
  const double defect = hermiticity_defect(rho_);
  if (defect > kHermitianTolerance) {
    fail(ErrorCode::not_hermitian, "MixedState: density matrix is not Hermitian");
  }
  const Complex tr = rho_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-9) {
    fail(ErrorCode::invalid_argument, "MixedState: trace " + std::to_string(tr.real()) + " is not 1");
  }
#ifndef NDEBUG
  if (eigvalsh(rho_).minCoeff() < -1e-9) {
    fail(ErrorCode::invalid_argument, "MixedState: density matrix is not positive semidefinite");
  }
#endif
}

MixedState MixedState::from_pure(const PureState& psi, std::size_t memory_cap) {
  const Index d = psi.space().dim_total();
  check_memory(d, d, memory_cap, "MixedState::from_pure");
  const ComplexVector& v = psi.amplitudes();
  return MixedState(v * v.adjoint(), psi.space(), psi.truncation());
}

const PureState& StateRef::pure() const {
  if (!pure_) fail(ErrorCode::invalid_argument, "expected a pure state");
  return *pure_;
}

const MixedState& StateRef::mixed() const {
  if (!mixed_) fail(ErrorCode::invalid_argument, "expected a mixed state");
  return *mixed_;
}

PureState bell(int which) {
  ComplexVector v = ComplexVector::Zero(4);
  const double h = 1.0 / std::sqrt(2.0);
  if (which == 1) {
    v[1] = h;  // |0>|1>
    v[2] = h;  // |1>|0>
  } else if (which == 2) {
    v[0] = h;
    v[3] = h;
  } else {
    fail(ErrorCode::invalid_argument, "bell: which must be 1 or 2");
  }
  return PureState(v, BipartiteSpace(2, 2), {1, 1, 0.0});
}

MixedState werner(int which, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::invalid_argument, "werner: p must lie in [0, 1]");
  const ComplexVector v = bell(which).amplitudes();
  ComplexMatrix rho = p * (v * v.adjoint()) + ComplexMatrix::Identity(4, 4) * ((1.0 - p) / 4.0);
  return MixedState(std::move(rho), BipartiteSpace(2, 2), {1, 1, 0.0});
}

namespace {

void require_tolerance(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) fail(ErrorCode::invalid_argument, "tail tolerance must lie in (0, 1)");
}

double log_poisson(double mu, int n) {
  if (mu == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return -mu + n * std::log(mu) - std::lgamma(n + 1.0);
}

void require_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) fail(ErrorCode::invalid_argument, "squeezing r must be finite and >= 0");
}

[[noreturn]] void truncation_failure(const char* what, int cutoff, double weight, double tol, int needed) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s: cutoff %d discards weight %.3e, tail tolerance is %.3e; required cutoff is %d",
                what, cutoff, weight, tol, needed);
  fail(ErrorCode::truncation, buf);
}

ComplexVector coherent_amplitudes(Complex alpha, int cutoff) {
  ComplexVector c(cutoff + 1);
  const double mag = std::abs(alpha);
  const double arg = std::arg(alpha);
  for (int n = 0; n <= cutoff; ++n) {
    if (mag == 0.0) {
      c[n] = n == 0 ? 1.0 : 0.0;
      continue;
    }
    const double log_mag = -0.5 * mag * mag + n * std::log(mag) - 0.5 * std::lgamma(n + 1.0);
    c[n] = std::polar(std::exp(log_mag), n * arg);
  }
  c /= c.norm();
  return c;
}

RealVector geometric_weights(double r, int cutoff) {
  const double lam2 = std::tanh(r) * std::tanh(r);
  RealVector w(cutoff + 1);
  double term = 1.0 - lam2;
  for (int n = 0; n <= cutoff; ++n) {
    w[n] = term;
    term *= lam2;
  }
  return w / w.sum();
}

double mixture_tail(double p, double w) { return p * w + (1.0 - p) * (1.0 - (1.0 - w) * (1.0 - w)); }

}  // namespace

double coherent_tail(Complex alpha, int cutoff) {
  const double mu = std::norm(alpha);
  double sum = 0.0;
  for (int n = cutoff + 1;; ++n) {
    const double term = std::exp(log_poisson(mu, n));
    sum += term;
    if (n > mu && (term < 1e-300 || term < 1e-18 * sum)) break;
  }
  return sum;
}

double squeezed_tail(double r, int cutoff) {
  const double lam2 = std::tanh(r) * std::tanh(r);
  return std::pow(lam2, cutoff + 1);
}

int coherent_cutoff(Complex alpha, double tail_tolerance) {
  require_tolerance(tail_tolerance);
  int n = 1;
  while (coherent_tail(alpha, n) >= tail_tolerance) ++n;
  return n;
}

int squeezed_cutoff(double r, double tail_tolerance) {
  require_r(r);
  require_tolerance(tail_tolerance);
  int n = 1;
  while (squeezed_tail(r, n) >= tail_tolerance) ++n;
  return n;
}

LocalPureState coherent(Complex alpha, const TruncationPolicy& policy) {
  require_tolerance(policy.tail_tolerance);
  const int needed = coherent_cutoff(alpha, policy.tail_tolerance);
  const int cutoff = policy.cutoff.value_or(needed);
  if (cutoff < 1) fail(ErrorCode::invalid_argument, "coherent: cutoff must be >= 1");
  const double tail = coherent_tail(alpha, cutoff);
  if (tail >= policy.tail_tolerance) truncation_failure("coherent", cutoff, tail, policy.tail_tolerance, needed);
  return {coherent_amplitudes(alpha, cutoff), cutoff, tail};
}

PureState tmsv(double r, const TruncationPolicy& policy) {
  const int needed = squeezed_cutoff(r, policy.tail_tolerance);
  const int cutoff = policy.cutoff.value_or(needed);
  if (cutoff < 1) fail(ErrorCode::invalid_argument, "tmsv: cutoff must be >= 1");
  const double tail = squeezed_tail(r, cutoff);
  if (tail >= policy.tail_tolerance) truncation_failure("tmsv", cutoff, tail, policy.tail_tolerance, needed);
  const BipartiteSpace space(cutoff + 1, cutoff + 1);
  const RealVector w = geometric_weights(r, cutoff);
  ComplexVector v = ComplexVector::Zero(space.dim_total());
  for (int n = 0; n <= cutoff; ++n) v[space.index(n, n)] = std::sqrt(w[n]);
  v /= v.norm();
  return PureState(std::move(v), space, {cutoff, cutoff, tail});
}

LocalMixedState thermal(double r, const TruncationPolicy& policy) {
  const int needed = squeezed_cutoff(r, policy.tail_tolerance);
  const int cutoff = policy.cutoff.value_or(needed);
  if (cutoff < 1) fail(ErrorCode::invalid_argument, "thermal: cutoff must be >= 1");
  const double tail = squeezed_tail(r, cutoff);
  if (tail >= policy.tail_tolerance) truncation_failure("thermal", cutoff, tail, policy.tail_tolerance, needed);
  ComplexMatrix rho = geometric_weights(r, cutoff).cast<Complex>().asDiagonal();
  return {std::move(rho), cutoff, tail};
}

MixedState squeezed_thermal(double p, double r, const TruncationPolicy& policy) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::invalid_argument, "squeezed_thermal: p must lie in [0, 1]");
  require_r(r);
  require_tolerance(policy.tail_tolerance);
  int needed = 1;
  while (mixture_tail(p, squeezed_tail(r, needed)) >= policy.tail_tolerance) ++needed;
  const int cutoff = policy.cutoff.value_or(needed);
  if (cutoff < 1) fail(ErrorCode::invalid_argument, "squeezed_thermal: cutoff must be >= 1");
  const double tail = mixture_tail(p, squeezed_tail(r, cutoff));
  if (tail >= policy.tail_tolerance) {
    truncation_failure("squeezed_thermal", cutoff, tail, policy.tail_tolerance, needed);
  }

  const BipartiteSpace space(cutoff + 1, cutoff + 1);
  check_memory(space.dim_total(), space.dim_total(), kDefaultMemoryCap, "squeezed_thermal");
  const RealVector w = geometric_weights(r, cutoff);
  ComplexMatrix rho = ComplexMatrix::Zero(space.dim_total(), space.dim_total());
  for (int i = 0; i <= cutoff; ++i)
    for (int j = 0; j <= cutoff; ++j) rho(space.index(i, j), space.index(i, j)) = (1.0 - p) * w[i] * w[j];
  for (int n = 0; n <= cutoff; ++n)
    for (int m = 0; m <= cutoff; ++m)
      rho(space.index(n, n), space.index(m, m)) += p * std::sqrt(w[n] * w[m]);
  return MixedState(std::move(rho), space, {cutoff, cutoff, tail});
}

PureState cross_kerr_evolve(Complex alpha, Complex beta, double t, const TruncationPolicy& policy) {
  if (!std::isfinite(t)) fail(ErrorCode::invalid_argument, "cross_kerr_evolve: t must be finite");
  require_tolerance(policy.tail_tolerance);
  // Auto cutoffs split the tolerance between the modes so the joint weight stays below it.
  const double half = policy.tail_tolerance / 2.0;
  const int cutoff_a = policy.cutoff.value_or(coherent_cutoff(alpha, half));
  const int cutoff_b = policy.cutoff.value_or(coherent_cutoff(beta, half));
  if (std::min(cutoff_a, cutoff_b) < 1) fail(ErrorCode::invalid_argument, "cross_kerr_evolve: cutoff must be >= 1");
  const LocalPureState ca{coherent_amplitudes(alpha, cutoff_a), cutoff_a, coherent_tail(alpha, cutoff_a)};
  const LocalPureState cb{coherent_amplitudes(beta, cutoff_b), cutoff_b, coherent_tail(beta, cutoff_b)};
  const double discarded = 1.0 - (1.0 - ca.discarded_weight) * (1.0 - cb.discarded_weight);
  if (discarded >= policy.tail_tolerance) {
    truncation_failure("cross_kerr", std::min(cutoff_a, cutoff_b), discarded, policy.tail_tolerance,
                       std::max(coherent_cutoff(alpha, half), coherent_cutoff(beta, half)));
  }
  const BipartiteSpace space(ca.cutoff + 1, cb.cutoff + 1);
  ComplexVector v(space.dim_total());
  for (int n = 0; n <= ca.cutoff; ++n) {
    for (int m = 0; m <= cb.cutoff; ++m) {
      const double angle = t * static_cast<double>(n * m);
      v[space.index(n, m)] = ca.amplitudes[n] * cb.amplitudes[m] * std::polar(1.0, -angle);
    }
  }
  return PureState(std::move(v), space, {ca.cutoff, cb.cutoff, discarded});
}

PureState product_state(const ComplexVector& psi_a, const ComplexVector& psi_b) {
  const BipartiteSpace space(psi_a.size(), psi_b.size());
  ComplexVector v(space.dim_total());
  for (Index i = 0; i < psi_a.size(); ++i) v.segment(i * psi_b.size(), psi_b.size()) = psi_a[i] * psi_b;
  return PureState(std::move(v), space);
}

MixedState product_state(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b) {
  require_square(rho_a, "product_state");
  require_square(rho_b, "product_state");
  return MixedState(kron(rho_a, rho_b), BipartiteSpace(rho_a.rows(), rho_b.rows()));
}

}  // namespace qent
