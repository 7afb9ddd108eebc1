#pragma once

// Dense complex linear algebra and the bipartite index structure shared by
// every other module.
//
// Composite index convention: |i_a> (x) |i_b> has index i_a * dim_b + i_b.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "qent/error.hpp"

namespace qent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr std::size_t kDefaultMemoryCap = std::size_t{4} << 30;  // 4 GiB

enum class Side { a, b };

class BipartiteSpace {
 public:
  BipartiteSpace(Index dim_a, Index dim_b);

  Index dim_a() const noexcept { return dim_a_; }
  Index dim_b() const noexcept { return dim_b_; }
  Index dim_total() const noexcept { return dim_a_ * dim_b_; }
  Index dim(Side side) const noexcept { return side == Side::a ? dim_a_ : dim_b_; }
  Index index(Index i_a, Index i_b) const noexcept { return i_a * dim_b_ + i_b; }

  friend bool operator==(const BipartiteSpace&, const BipartiteSpace&) = default;

 private:
  Index dim_a_;
  Index dim_b_;
};

struct HermitianEigensystem {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns
};

/// Throws memory_cap if a rows x cols complex matrix (times `copies`)
/// would exceed `cap` bytes.
void check_memory(Index rows, Index cols, std::size_t cap, const char* what, int copies = 1);

void require_square(const ComplexMatrix& m, const char* what);
void require_finite(const ComplexMatrix& m, const char* what);

/// Largest entry of |H - H^dagger|.
double hermiticity_defect(const ComplexMatrix& h);

ComplexMatrix kron(const ComplexMatrix& left, const ComplexMatrix& right,
                   std::size_t memory_cap = kDefaultMemoryCap);

ComplexMatrix lift(const ComplexMatrix& op, Side side, const BipartiteSpace& space);

/// (op lifted to `side`) * m without materialising the lifted operator.
/// `m` has dim_total rows and any number of columns.
ComplexMatrix apply_local(const ComplexMatrix& op, Side side, const BipartiteSpace& space,
                          const ComplexMatrix& m);
ComplexVector apply_local(const ComplexMatrix& op, Side side, const BipartiteSpace& space,
                          const ComplexVector& v);

/// Tr((op_a (x) op_b) rho) from the blocks of rho; a null operator is the identity.
Complex local_expectation(const ComplexMatrix& rho, const BipartiteSpace& space, const ComplexMatrix* op_a,
                          const ComplexMatrix* op_b);

ComplexMatrix partial_trace(const ComplexMatrix& rho, const BipartiteSpace& space, Side keep);
ComplexMatrix partial_transpose_b(const ComplexMatrix& rho, const BipartiteSpace& space);

/// Symmetrises (H + H^dagger)/2 and diagonalises. Exact-zero block structure
/// is detected and each block is solved independently.
HermitianEigensystem eigh(const ComplexMatrix& h);
RealVector eigvalsh(const ComplexMatrix& h);

/// Singular values (descending) of the dim_a x dim_b coefficient matrix.
RealVector schmidt_values(const ComplexVector& psi, const BipartiteSpace& space);

/// Coefficient matrix C(i_a, i_b) = psi[i_a * dim_b + i_b].
ComplexMatrix coefficient_matrix(const ComplexVector& psi, const BipartiteSpace& space);

/// Von Neumann entropy in bits of a density matrix.
double von_neumann_entropy(const ComplexMatrix& rho);

/// -sum q log2 q over a probability vector, with 0 log 0 = 0.
double shannon_entropy_bits(const RealVector& probabilities);

}  // namespace qent
