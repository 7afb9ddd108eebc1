#include "qent/diagnostics.hpp"

#include <cmath>
#include <string>

namespace qent {

namespace {

Complex expect(const ComplexMatrix& x, StateRef state) {
  if (state.is_pure()) {
    const ComplexVector& psi = state.pure().amplitudes();
    return psi.dot(x * psi);
  }
  return (x.array() * state.mixed().rho().transpose().array()).sum();
}

void require_composite_operator(const ComplexMatrix& x, StateRef state, const char* what) {
  require_square(x, what);
  if (x.rows() != state.space().dim_total()) {
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": operator dimension != dim_total");
  }
  if (hermiticity_defect(x) > kHermitianTolerance) {
    fail(ErrorCode::not_hermitian, std::string(what) + ": X must be Hermitian");
  }
}

}  // namespace

double purity(StateRef state) {
  if (state.is_pure()) return 1.0;
  return state.mixed().rho().squaredNorm();
}

ObservableBasis hermitian_operator_basis(Index d) {
  if (d < 2) fail(ErrorCode::invalid_argument, "hermitian_operator_basis: d must be >= 2");
  ObservableBasis basis;
  basis.dim = d;
  basis.elements.reserve(static_cast<std::size_t>(d * d));
  basis.elements.push_back(ComplexMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  const double h = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(j, k) = h;
      sym(k, j) = h;
      basis.elements.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(d, d);
      anti(j, k) = Complex(0.0, -h);
      anti(k, j) = Complex(0.0, h);
      basis.elements.push_back(std::move(anti));
    }
  }
  for (Index l = 1; l < d; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Index m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    basis.elements.push_back(std::move(diag));
  }
  return basis;
}

PurityFromBasis purity_from_basis(StateRef state, const ObservableBasis& basis) {
  const Index d = state.space().dim_total();
  if (basis.dim != d) {
    fail(ErrorCode::dimension_mismatch, "purity_from_basis: basis dimension != state dimension");
  }
  PurityFromBasis out;
  double variance_sum = 0.0;
  for (const ComplexMatrix& m : basis.elements) {
    const double mean = expect(m, state).real();
    const double second = expect(m * m, state).real();
    out.via_expectations += mean * mean;
    variance_sum += second - mean * mean;
  }
  out.via_variances = static_cast<double>(d) - variance_sum;
  return out;
}

SpectralEstimate estimator_spectral(const ComplexMatrix& x, StateRef state) {
  require_composite_operator(x, state, "estimator_spectral");
  const HermitianEigensystem eig = eigh(x);
  SpectralEstimate out;
  out.bounded = eig.eigenvalues.minCoeff() >= -kHermitianTolerance;
  const ComplexMatrix& v = eig.eigenvectors;
  RealVector probs;
  if (state.is_pure()) {
    probs = (v.adjoint() * state.pure().amplitudes()).cwiseAbs2();
  } else {
    probs = (v.adjoint() * state.mixed().rho() * v).diagonal().real();
  }
  out.value = (probs.array().square() * eig.eigenvalues.array()).sum();
  return out;
}

double estimator_meanfield(const ComplexMatrix& x, StateRef state) {
  require_composite_operator(x, state, "estimator_meanfield");
  return expect(x, state).real() * purity(state);
}

bool meanfield_valid(double p, double x_target, double x_noise) { return p > 0.5 && x_target >= x_noise; }

EstimatedWitness estimated_witness(const LocalOperator& a, const LocalOperator& b, StateRef state,
                                   EstimatorKind kind) {
  const BipartiteSpace& space = state.space();
  if (a.side != Side::a || b.side != Side::b) {
    fail(ErrorCode::invalid_argument, "estimated_witness: A must act on a and B on b");
  }
  if (a.dim() != space.dim_a() || b.dim() != space.dim_b()) {
    fail(ErrorCode::dimension_mismatch, "estimated_witness: operator dimensions do not match the state");
  }
  const ComplexMatrix na = number_of(a.matrix);
  const ComplexMatrix nb = number_of(b.matrix);

  // Expectations of the local number operators and their lifted product,
  // evaluated structurally.
  auto expect_local = [&](const ComplexMatrix* opa, const ComplexMatrix* opb) {
    if (state.is_pure()) {
      const ComplexVector& psi = state.pure().amplitudes();
      ComplexVector v = psi;
      if (opb) v = apply_local(*opb, Side::b, space, v);
      if (opa) v = apply_local(*opa, Side::a, space, v);
      return psi.dot(v).real();
    }
    return local_expectation(state.mixed().rho(), space, opa, opb).real();
  };
  const double ea = expect_local(&na, nullptr);
  const double eb = expect_local(nullptr, &nb);

  EstimatedWitness out;
  if (kind == EstimatorKind::meanfield) {
    out.value = ea * eb - expect_local(&na, &nb) * purity(state);
    out.unconditional = false;
    return out;
  }

  // The eigenbasis of n_A (x) n_B is the product of the local eigenbases.
  const HermitianEigensystem ea_sys = eigh(na);
  const HermitianEigensystem eb_sys = eigh(nb);
  const ComplexMatrix ua_dag = ea_sys.eigenvectors.adjoint();
  const ComplexMatrix ub_dag = eb_sys.eigenvectors.adjoint();
  RealVector probs;
  if (state.is_pure()) {
    const ComplexVector w = apply_local(ua_dag, Side::a, space,
                                        apply_local(ub_dag, Side::b, space, state.pure().amplitudes()));
    probs = w.cwiseAbs2();
  } else {
    // W^dag rho W with W = U_a (x) U_b, using rho W = (W^dag rho)^dag.
    const ComplexMatrix t = apply_local(ua_dag, Side::a, space,
                                        apply_local(ub_dag, Side::b, space, state.mixed().rho()));
    const ComplexMatrix t_dag = t.adjoint();
    probs = apply_local(ua_dag, Side::a, space, apply_local(ub_dag, Side::b, space, t_dag))
                .diagonal()
                .real();
  }
  double estimate = 0.0;
  for (Index i = 0; i < space.dim_a(); ++i)
    for (Index j = 0; j < space.dim_b(); ++j) {
      const double pn = probs[space.index(i, j)];
      estimate += pn * pn * ea_sys.eigenvalues[i] * eb_sys.eigenvalues[j];
    }
  out.value = ea * eb - estimate;
  out.unconditional = true;
  return out;
}

double negativity(StateRef state) {
  if (state.is_pure()) {
    const RealVector s = schmidt_values(state.pure().amplitudes(), state.space());
    const double sum = s.sum();
    return std::max(0.0, (sum * sum - 1.0) / 2.0);
  }
  const RealVector ev = eigvalsh(partial_transpose_b(state.mixed().rho(), state.space()));
  double neg = 0.0;
  for (const double lambda : ev)
    if (lambda < -kNegativityThreshold) neg -= lambda;
  return neg;
}

double entanglement_entropy(const PureState& psi) {
  const RealVector s = schmidt_values(psi.amplitudes(), psi.space());
  return shannon_entropy_bits(s.array().square().matrix());
}

}  // namespace qent
