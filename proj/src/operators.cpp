#include "qent/operators.hpp"

#include <cmath>
#include <string>

namespace qent {

namespace {

void require_cutoff(int cutoff) {
  if (cutoff < 1) fail(ErrorCode::invalid_argument, "Fock cutoff must be >= 1, got " + std::to_string(cutoff));
}

}  // namespace

LocalOperator on_a(ComplexMatrix m) {
  require_square(m, "on_a");
  return {std::move(m), Side::a};
}

LocalOperator on_b(ComplexMatrix m) {
  require_square(m, "on_b");
  return {std::move(m), Side::b};
}

ComplexMatrix pauli_lower() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix pauli_raise() { return pauli_lower().adjoint(); }

ComplexMatrix boson_annihilation(int cutoff) {
  require_cutoff(cutoff);
  ComplexMatrix a = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix boson_creation(int cutoff) { return boson_annihilation(cutoff).adjoint(); }

ComplexMatrix number_of(const ComplexMatrix& a) {
  require_square(a, "number_of");
  return a.adjoint() * a;
}

ComplexMatrix quadrature(double theta, int cutoff) {
  const ComplexMatrix a = boson_annihilation(cutoff);
  const Complex phase = std::polar(1.0, theta);
  ComplexMatrix q = (std::conj(phase) * a.adjoint() + phase * a) * 0.5;
  // Force exact Hermiticity; the two terms round independently.
  return (q + q.adjoint()) * 0.5;
}

ComplexMatrix position(int cutoff) {
  const ComplexMatrix a = boson_annihilation(cutoff);
  return (a + a.adjoint()) * 0.5;
}

ComplexMatrix momentum(int cutoff) {
  const ComplexMatrix a = boson_annihilation(cutoff);
  return (a - a.adjoint()) / Complex(0.0, 2.0);
}

}  // namespace qent
