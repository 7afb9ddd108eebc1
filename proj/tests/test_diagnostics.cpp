#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "qent/criteria.hpp"
#include "qent/diagnostics.hpp"

using namespace qent;

namespace {

using oracle::M;

M random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  M m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

M random_density(Eigen::Index d, std::mt19937_64& rng) {
  const M g = random_matrix(d, d, rng);
  M rho = g * g.adjoint();
  rho /= rho.trace();
  return (rho + rho.adjoint()) / 2.0;
}

double brute_negativity(const M& rho, Eigen::Index da, Eigen::Index db) {
  M pt(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k)
        for (Eigen::Index l = 0; l < db; ++l) pt(i * db + k, j * db + l) = rho(i * db + l, j * db + k);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<M>(pt).eigenvalues();
  double n = 0.0;
  for (const double x : ev)
    if (x < 0) n -= x;
  return n;
}

const LocalOperator sa = on_a(pauli_lower());
const LocalOperator sb = on_b(pauli_lower());

}  // namespace

TEST_CASE("purity") {
  CHECK(purity(bell(1)) == 1.0);
  const MixedState flat(M::Identity(6, 6) / 6.0, BipartiteSpace(2, 3));
  CHECK(purity(flat) == doctest::Approx(1.0 / 6.0));
  for (const double p : {0.0, 0.4, 1.0}) CHECK(purity(werner(2, p)) == doctest::Approx((1 + 3 * p * p) / 4));
}

TEST_CASE("hermitian observable basis") {
  const ObservableBasis q = hermitian_operator_basis(2);
  REQUIRE(q.elements.size() == 4);
  // Qubit case: Pauli matrices over sqrt 2, up to order and sign.
  M sx = M::Zero(2, 2), sy = M::Zero(2, 2), sz = M::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  sy(0, 1) = Complex(0, -1);
  sy(1, 0) = Complex(0, 1);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  for (const M& pauli : {M(M::Identity(2, 2)), sx, sy, sz}) {
    bool found = false;
    for (const M& e : q.elements)
      found = found || (e - pauli / std::sqrt(2.0)).cwiseAbs().maxCoeff() < 1e-15 ||
              (e + pauli / std::sqrt(2.0)).cwiseAbs().maxCoeff() < 1e-15;
    CHECK(found);
  }

  const ObservableBasis b4 = hermitian_operator_basis(4);
  REQUIRE(b4.elements.size() == 16);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK((b4.elements[k] - b4.elements[k].adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    for (std::size_t l = 0; l < 16; ++l)
      CHECK(std::abs((b4.elements[k] * b4.elements[l]).trace() - (k == l ? 1.0 : 0.0)) < 1e-10);
  }

  std::mt19937_64 rng(21);
  const M rho = random_density(3, rng);
  M rebuilt = M::Zero(3, 3);
  for (const M& e : hermitian_operator_basis(3).elements) rebuilt += (e * rho).trace() * e;
  CHECK((rebuilt - rho).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(hermitian_operator_basis(1), Error);
}

TEST_CASE("purity from the observable basis") {
  oracle::V v(2);
  v << Complex(0.6, 0.0), Complex(0.0, 0.8);
  const PurityFromBasis pure = purity_from_basis(MixedState(oracle::projector(v), BipartiteSpace(2, 1)),
                                                 hermitian_operator_basis(2));
  CHECK(pure.via_expectations == doctest::Approx(1.0));
  CHECK(pure.via_variances == doctest::Approx(1.0));
  const PurityFromBasis half =
      purity_from_basis(MixedState(M::Identity(2, 2) / 2.0, BipartiteSpace(2, 1)), hermitian_operator_basis(2));
  CHECK(half.via_expectations == doctest::Approx(0.5));
  CHECK(half.via_variances == doctest::Approx(0.5));

  std::mt19937_64 rng(22);
  const M rho = random_density(4, rng);
  const PurityFromBasis two_qubit = purity_from_basis(MixedState(rho, BipartiteSpace(2, 2)), hermitian_operator_basis(4));
  const double direct = (rho * rho).trace().real();
  CHECK(std::abs(two_qubit.via_expectations - direct) < 1e-10);
  CHECK(std::abs(two_qubit.via_variances - direct) < 1e-10);
  CHECK_THROWS_AS(purity_from_basis(bell(1), hermitian_operator_basis(3)), Error);
}

TEST_CASE("spectral estimator") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const M g = random_matrix(4, 4, rng);
    const M x = g * g.adjoint();
    const M rho = random_density(4, rng);
    const MixedState state(rho, BipartiteSpace(2, 2));
    const SpectralEstimate e = estimator_spectral((x + x.adjoint()) / 2.0, state);
    CHECK(e.bounded);
    CHECK(e.value <= (x * rho * rho).trace().real() + 1e-9);
  }
  const M g = random_matrix(4, 4, rng);
  const M x = (g * g.adjoint() + (g * g.adjoint()).adjoint()) / 2.0;
  const MixedState flat(M::Identity(4, 4) / 4.0, BipartiteSpace(2, 2));
  CHECK(estimator_spectral(x, flat).value == doctest::Approx(x.trace().real() / 16.0).epsilon(1e-12));
  const Eigen::SelfAdjointEigenSolver<M> es(x);
  const oracle::V x0 = es.eigenvectors().col(0);
  const MixedState eig(oracle::projector(x0), BipartiteSpace(2, 2));
  CHECK(estimator_spectral(x, eig).value == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-9));
  CHECK_THROWS_AS(estimator_spectral(g, flat), Error);
}

TEST_CASE("meanfield estimator") {
  std::mt19937_64 rng(24);
  const M h = random_matrix(4, 4, rng);
  const M x = (h + h.adjoint()) / 2.0;
  oracle::V psi = random_matrix(4, 1, rng);
  psi /= psi.norm();
  CHECK(estimator_meanfield(x, PureState(psi, BipartiteSpace(2, 2))) == doctest::Approx(psi.dot(x * psi).real()));

  // Two orthogonal components: the gap to Tr(X rho^2) is (1-p) p (2p-1) (<X>_0 - <X>_1).
  oracle::V psi1 = random_matrix(4, 1, rng);
  psi1 -= psi * psi.dot(psi1);
  psi1 /= psi1.norm();
  const double x0 = psi.dot(x * psi).real(), x1 = psi1.dot(x * psi1).real();
  for (const double p : {0.3, 0.5, 0.7, 0.9}) {
    const M rho = p * oracle::projector(psi) + (1 - p) * oracle::projector(psi1);
    const double gap = (x * rho * rho).trace().real() - estimator_meanfield(x, MixedState(rho, BipartiteSpace(2, 2)));
    CHECK(gap == doctest::Approx((1 - p) * p * (2 * p - 1) * (x0 - x1)).epsilon(1e-10));
    if (p == 0.5) CHECK(std::abs(gap) < 1e-12);
  }
  CHECK(meanfield_valid(0.6, 2.0, 1.0));
  CHECK_FALSE(meanfield_valid(0.5, 2.0, 1.0));
  CHECK_FALSE(meanfield_valid(0.9, 0.5, 1.0));
}

TEST_CASE("estimated witness") {
  const PureState psi = tmsv(0.5);
  const int N = psi.truncation().cutoff_a;
  const LocalOperator a = on_a(boson_annihilation(N)), b = on_b(boson_annihilation(N));
  const EstimatedWitness mf = estimated_witness(a, b, psi, EstimatorKind::meanfield);
  CHECK(mf.value == doctest::Approx(witness_product(a, b, psi)).epsilon(1e-12));
  CHECK_FALSE(mf.unconditional);

  const MixedState flat(M::Identity(4, 4) / 4.0, BipartiteSpace(2, 2));
  const EstimatedWitness sp = estimated_witness(sa, sb, flat, EstimatorKind::spectral);
  CHECK(sp.value == doctest::Approx(witness_product(sa, sb, flat)).epsilon(1e-12));
  CHECK(sp.unconditional);

  const MixedState mix = squeezed_thermal(0.9, 0.8, {25, 1e-2});
  const LocalOperator a25 = on_a(boson_annihilation(25)), b25 = on_b(boson_annihilation(25));
  const double tw = witness_product(a25, b25, mix);
  CHECK(estimated_witness(a25, b25, mix, EstimatorKind::meanfield).value >= tw);
  // The spectral route is a lower bound on Tr(n_A n_B rho^2), so it never detects more.
  CHECK(estimated_witness(a25, b25, mix, EstimatorKind::spectral).value >= tw - 1e-9);

  // Against a dense evaluation of the spectral sum.
  std::mt19937_64 rng(25);
  const M rho = random_density(6, rng);
  const MixedState st(rho, BipartiteSpace(2, 3));
  const LocalOperator ra = on_a(random_matrix(2, 2, rng)), rb = on_b(random_matrix(3, 3, rng));
  const M nab = oracle::kron(ra.matrix.adjoint() * ra.matrix, rb.matrix.adjoint() * rb.matrix);
  const double want = oracle::ev(oracle::kron(ra.matrix.adjoint() * ra.matrix, oracle::eye(3)), rho) *
                          oracle::ev(oracle::kron(oracle::eye(2), rb.matrix.adjoint() * rb.matrix), rho) -
                      estimator_spectral((nab + nab.adjoint()) / 2.0, st).value;
  CHECK(estimated_witness(ra, rb, st, EstimatorKind::spectral).value == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("negativity") {
  CHECK(negativity(bell(2)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(negativity(MixedState::from_pure(bell(2))) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(negativity(product_state(ComplexVector(oracle::basis(2, 0)), ComplexVector(oracle::basis(3, 1)))) < 1e-12);
  for (const double p : {0.2, 1.0 / 3.0}) CHECK(negativity(werner(1, p)) <= 1e-12);
  CHECK(negativity(werner(1, 0.5)) == doctest::Approx(0.125));
  for (double p = 0.05; p <= 1.0; p += 0.05) CHECK(negativity(squeezed_thermal(p, 0.8, {30, 1e-3})) > 0.0);

  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    M rho = M::Zero(6, 6);
    for (int k = 0; k < 3; ++k) rho += oracle::kron(random_density(2, rng), random_density(3, rng)) / 3.0;
    CHECK(negativity(MixedState((rho + rho.adjoint()) / 2.0, BipartiteSpace(2, 3))) <= 1e-9);

    const M ent = random_density(6, rng);
    const Eigen::HouseholderQR<M> qa(random_matrix(2, 2, rng)), qb(random_matrix(3, 3, rng));
    const M u = oracle::kron(qa.householderQ(), qb.householderQ());
    const M rotated = u * ent * u.adjoint();
    const double n0 = negativity(MixedState(ent, BipartiteSpace(2, 3)));
    CHECK(n0 == doctest::Approx(brute_negativity(ent, 2, 3)).epsilon(1e-9));
    CHECK(std::abs(negativity(MixedState((rotated + rotated.adjoint()) / 2.0, BipartiteSpace(2, 3))) - n0) < 1e-9);
  }
}

TEST_CASE("entanglement entropy") {
  CHECK(entanglement_entropy(bell(1)) == doctest::Approx(1.0));
  CHECK(entanglement_entropy(product_state(ComplexVector(oracle::basis(2, 1)), ComplexVector(oracle::basis(2, 0)))) ==
        doctest::Approx(0.0));
  std::mt19937_64 rng(27);
  oracle::V psi = random_matrix(12, 1, rng);
  psi /= psi.norm();
  const PureState st(psi, BipartiteSpace(3, 4));
  const M ra = partial_trace(oracle::projector(psi), st.space(), Side::a);
  CHECK(entanglement_entropy(st) == doctest::Approx(von_neumann_entropy(ra)).epsilon(1e-8));
}
