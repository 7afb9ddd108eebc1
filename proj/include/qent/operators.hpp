#pragma once

// Local operators. Qubit basis order is |0>, |1> with sigma^- |1> = |0>;
// bosonic modes use the Fock basis |0>..|N> for cutoff N.

#include "qent/qcore.hpp"

namespace qent {

/// A square matrix tagged with the subsystem it acts on.
struct LocalOperator {
  ComplexMatrix matrix;
  Side side = Side::a;

  Index dim() const noexcept { return matrix.rows(); }
};

LocalOperator on_a(ComplexMatrix m);
LocalOperator on_b(ComplexMatrix m);

ComplexMatrix pauli_lower();
ComplexMatrix pauli_raise();

ComplexMatrix boson_annihilation(int cutoff);
ComplexMatrix boson_creation(int cutoff);

/// A^dagger A.
ComplexMatrix number_of(const ComplexMatrix& a);

/// (e^{-i theta} a^dagger + e^{i theta} a) / 2.
ComplexMatrix quadrature(double theta, int cutoff);

/// x = (a + a^dagger)/2, so that [x, p] = i/2 away from the truncation corner.
ComplexMatrix position(int cutoff);
/// p = (a - a^dagger)/(2i).
ComplexMatrix momentum(int cutoff);

}  // namespace qent
