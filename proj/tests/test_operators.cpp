#include <doctest.h>

#include <numbers>

#include "oracle.hpp"
#include "qent/operators.hpp"
#include "qent/states.hpp"

using namespace qent;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

const Complex I(0.0, 1.0);

}  // namespace

TEST_CASE("pauli lowering") {
  const ComplexMatrix s = pauli_lower();
  CHECK(max_abs(s * oracle::basis(2, 1) - oracle::basis(2, 0)) == 0.0);
  CHECK(max_abs(s * s) == 0.0);
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  n(1, 1) = 1.0;
  CHECK(max_abs(number_of(s) - n) == 0.0);
  CHECK(max_abs(pauli_raise() - s.adjoint()) == 0.0);
  CHECK(on_a(s).side == Side::a);
  CHECK(on_b(s).side == Side::b);
}

TEST_CASE("bosonic ladder operators") {
  const ComplexMatrix a = boson_annihilation(5);
  CHECK(a(0, 1).real() == 1.0);
  CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(max_abs(a * oracle::basis(6, 0)) == 0.0);
  CHECK(max_abs(a - oracle::annihilation(5)) == 0.0);
  CHECK(max_abs(boson_creation(5) - a.adjoint()) == 0.0);
  CHECK_THROWS_AS(boson_annihilation(0), Error);

  // [a, a^dag] = I except the truncation corner, which is -N.
  const ComplexMatrix comm = a * a.adjoint() - a.adjoint() * a;
  CHECK(max_abs(comm.topLeftCorner(5, 5) - ComplexMatrix::Identity(5, 5)) < 1e-12);
  CHECK(comm(5, 5).real() == doctest::Approx(-5.0));

  // Truncation consistency.
  for (int n = 1; n <= 5; ++n) CHECK(max_abs(a.topLeftCorner(n + 1, n + 1) - boson_annihilation(n)) == 0.0);

  const ComplexMatrix na = number_of(a);
  for (int n = 0; n <= 5; ++n) CHECK(na(n, n).real() == doctest::Approx(n));
  CHECK(max_abs(na - ComplexMatrix(na.diagonal().asDiagonal())) < 1e-15);
}

TEST_CASE("quadratures") {
  const int N = 8;
  const ComplexMatrix a = oracle::annihilation(N);
  const ComplexMatrix x = (a + a.adjoint()) / 2.0;
  const ComplexMatrix p = (a - a.adjoint()) / (2.0 * I);
  CHECK(max_abs(position(N) - x) < 1e-15);
  CHECK(max_abs(momentum(N) - p) < 1e-15);
  CHECK(max_abs(quadrature(0.0, N) - x) < 1e-15);
  CHECK(max_abs(quadrature(std::numbers::pi / 2, N) + p) < 1e-15);
  for (const double th : {0.0, std::numbers::pi / 4, std::numbers::pi / 2, std::numbers::pi}) {
    const ComplexMatrix q = quadrature(th, N);
    CHECK(max_abs(q - q.adjoint()) == 0.0);
    const ComplexMatrix want = std::cos(th) * x + std::sin(th) * (a * I - a.adjoint() * I) / 2.0;
    CHECK(max_abs(q - want) < 1e-12);
  }
  const ComplexMatrix nx = number_of(quadrature(0.0, N));
  CHECK(max_abs(nx - x * x) < 1e-12);
  CHECK(eigvalsh(nx).minCoeff() > -1e-12);

  const ComplexMatrix comm = x * p - p * x;
  CHECK(max_abs(comm.topLeftCorner(N, N) - (I / 2.0) * ComplexMatrix::Identity(N, N)) < 1e-12);
}

TEST_CASE("coherent-state quadrature moments") {
  const double alpha = 1.5;
  const LocalPureState c = coherent(alpha, {});
  const ComplexVector& v = c.amplitudes;
  const ComplexMatrix x = position(c.cutoff), p = momentum(c.cutoff);
  const double mx = v.dot(x * v).real(), mp = v.dot(p * v).real();
  CHECK(mx == doctest::Approx(alpha).epsilon(1e-8));
  CHECK(std::abs(mp) < 1e-12);
  CHECK(v.dot(x * x * v).real() - mx * mx == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(v.dot(p * p * v).real() - mp * mp == doctest::Approx(0.25).epsilon(1e-6));
}
