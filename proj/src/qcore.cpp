#include "qent/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace qent {

BipartiteSpace::BipartiteSpace(Index dim_a, Index dim_b) : dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a < 1 || dim_b < 1) {
    fail(ErrorCode::invalid_argument, "subsystem dimensions must be positive");
  }
}

void check_memory(Index rows, Index cols, std::size_t cap, const char* what, int copies) {
  const long double bytes = static_cast<long double>(rows) * static_cast<long double>(cols) *
                            sizeof(Complex) * copies;
  if (bytes > static_cast<long double>(cap)) {
    fail(ErrorCode::memory_cap, std::string(what) + ": " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + " exceeds the memory cap of " +
                                    std::to_string(cap) + " bytes");
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorCode::numerical, std::string(what) + ": non-finite entry");
}

double hermiticity_defect(const ComplexMatrix& h) {
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& left, const ComplexMatrix& right, std::size_t memory_cap) {
  const Index rows = left.rows() * right.rows();
  const Index cols = left.cols() * right.cols();
  check_memory(rows, cols, memory_cap, "kron");
  ComplexMatrix out(rows, cols);
  for (Index i = 0; i < left.rows(); ++i) {
    for (Index j = 0; j < left.cols(); ++j) {
      out.block(i * right.rows(), j * right.cols(), right.rows(), right.cols()) = left(i, j) * right;
    }
  }
  return out;
}

namespace {

void require_local(const ComplexMatrix& op, Side side, const BipartiteSpace& space, const char* what) {
  require_square(op, what);
  if (op.rows() != space.dim(side)) {
    fail(ErrorCode::dimension_mismatch,
         std::string(what) + ": operator dimension " + std::to_string(op.rows()) +
             " does not match subsystem " + (side == Side::a ? "a" : "b") + " dimension " +
             std::to_string(space.dim(side)));
  }
}

void require_composite(const ComplexMatrix& rho, const BipartiteSpace& space, const char* what) {
  require_square(rho, what);
  if (rho.rows() != space.dim_total()) {
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": matrix dimension " +
                                            std::to_string(rho.rows()) + " != dim_total " +
                                            std::to_string(space.dim_total()));
  }
}

}  // namespace

ComplexMatrix lift(const ComplexMatrix& op, Side side, const BipartiteSpace& space) {
  require_local(op, side, space, "lift");
  if (side == Side::a) return kron(op, ComplexMatrix::Identity(space.dim_b(), space.dim_b()));
  return kron(ComplexMatrix::Identity(space.dim_a(), space.dim_a()), op);
}

ComplexMatrix apply_local(const ComplexMatrix& op, Side side, const BipartiteSpace& space,
                          const ComplexMatrix& m) {
  require_local(op, side, space, "apply_local");
  if (m.rows() != space.dim_total()) {
    fail(ErrorCode::dimension_mismatch, "apply_local: operand row count != dim_total");
  }
  const Index da = space.dim_a();
  const Index db = space.dim_b();
  const Index k = op.rows();
  std::vector<std::pair<Index, Index>> nonzeros;
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < k; ++i)
      if (op(i, j) != Complex(0.0, 0.0)) nonzeros.emplace_back(i, j);
  if (static_cast<Index>(nonzeros.size()) * 4 <= k * k) {
    // Ladder, number and quadrature operators have a few entries per row.
    // Plain real arithmetic: std::complex multiplication carries NaN recovery.
    auto fma = [](Complex& acc, Complex v, Complex x) {
      acc = Complex(acc.real() + v.real() * x.real() - v.imag() * x.imag(),
                    acc.imag() + v.real() * x.imag() + v.imag() * x.real());
    };
    ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
    for (Index c = 0; c < m.cols(); ++c) {
      const Complex* in = m.col(c).data();
      Complex* res = out.col(c).data();
      if (side == Side::b) {
        for (Index block = 0; block < da * db; block += db)
          for (const auto& [i, j] : nonzeros) fma(res[block + i], op(i, j), in[block + j]);
      } else {
        for (const auto& [i, j] : nonzeros) {
          const Complex v = op(i, j);
          for (Index l = 0; l < db; ++l) fma(res[i * db + l], v, in[j * db + l]);
        }
      }
    }
    return out;
  }
  ComplexMatrix out(m.rows(), m.cols());
  if (side == Side::b) {
    // Column-major storage makes i_b the fastest index, so the whole operand
    // is a db x (da * cols) matrix.
    Eigen::Map<const ComplexMatrix> in(m.data(), db, da * m.cols());
    Eigen::Map<ComplexMatrix> res(out.data(), db, da * m.cols());
    res.noalias() = op * in;
  } else {
    const ComplexMatrix op_t = op.transpose();
    for (Index c = 0; c < m.cols(); ++c) {
      Eigen::Map<const ComplexMatrix> in(m.col(c).data(), db, da);
      Eigen::Map<ComplexMatrix> res(out.col(c).data(), db, da);
      res.noalias() = in * op_t;
    }
  }
  return out;
}

ComplexVector apply_local(const ComplexMatrix& op, Side side, const BipartiteSpace& space,
                          const ComplexVector& v) {
  const ComplexMatrix m = v;
  return apply_local(op, side, space, m).col(0);
}

Complex local_expectation(const ComplexMatrix& rho, const BipartiteSpace& space, const ComplexMatrix* op_a,
                          const ComplexMatrix* op_b) {
  require_composite(rho, space, "local_expectation");
  if (op_a) require_local(*op_a, Side::a, space, "local_expectation");
  if (op_b) require_local(*op_b, Side::b, space, "local_expectation");
  const Index da = space.dim_a();
  const Index db = space.dim_b();
  // Block (j, i) of rho pairs with op_a(i, j).
  auto block_term = [&](Index i, Index j) -> Complex {
    const auto block = rho.block(j * db, i * db, db, db);
    if (!op_b) return block.trace();
    return (op_b->array() * block.transpose().array()).sum();
  };
  Complex sum(0.0, 0.0);
  if (!op_a) {
    for (Index i = 0; i < da; ++i) sum += block_term(i, i);
    return sum;
  }
  for (Index j = 0; j < da; ++j)
    for (Index i = 0; i < da; ++i)
      if ((*op_a)(i, j) != Complex(0.0, 0.0)) sum += (*op_a)(i, j) * block_term(i, j);
  return sum;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const BipartiteSpace& space, Side keep) {
  require_composite(rho, space, "partial_trace");
  const Index da = space.dim_a();
  const Index db = space.dim_b();
  if (keep == Side::a) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Index i = 0; i < da; ++i)
      for (Index j = 0; j < da; ++j)
        out(i, j) = rho.block(i * db, j * db, db, db).trace();
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Index k = 0; k < da; ++k) out += rho.block(k * db, k * db, db, db);
  return out;
}

ComplexMatrix partial_transpose_b(const ComplexMatrix& rho, const BipartiteSpace& space) {
  require_composite(rho, space, "partial_transpose_b");
  const Index da = space.dim_a();
  const Index db = space.dim_b();
  ComplexMatrix out(rho.rows(), rho.cols());
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = rho.block(i * db, j * db, db, db).transpose();
  return out;
}

namespace {

// Connected components of the nonzero pattern of a Hermitian matrix.
std::vector<std::vector<Index>> hermitian_blocks(const ComplexMatrix& h) {
  const Index n = h.rows();
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      if (h(i, j) != Complex(0.0, 0.0)) {
        const Index ri = find(i);
        const Index rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<Index> label(n, -1);
  std::vector<std::vector<Index>> blocks;
  for (Index i = 0; i < n; ++i) {
    const Index root = find(i);
    if (label[root] < 0) {
      label[root] = static_cast<Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[label[root]].push_back(i);
  }
  return blocks;
}

ComplexMatrix symmetrized(const ComplexMatrix& h) {
  require_square(h, "eigh");
  require_finite(h, "eigh");
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTolerance) {
    fail(ErrorCode::not_hermitian,
         "eigh: matrix is not Hermitian (max |H - H^dagger| = " + std::to_string(defect) + ")");
  }
  return (h + h.adjoint()) * 0.5;
}

HermitianEigensystem solve(const ComplexMatrix& h, bool vectors) {
  const ComplexMatrix sym = symmetrized(h);
  const Index n = sym.rows();
  const auto blocks = hermitian_blocks(sym);

  RealVector values(n);
  ComplexMatrix vecs;
  if (vectors) vecs = ComplexMatrix::Zero(n, n);

  Index col = 0;
  for (const auto& idx : blocks) {
    const Index m = static_cast<Index>(idx.size());
    ComplexMatrix sub(m, m);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) sub(i, j) = sym(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
        sub, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      fail(ErrorCode::numerical, "eigh: eigendecomposition did not converge");
    }
    values.segment(col, m) = solver.eigenvalues();
    if (vectors) {
      for (Index k = 0; k < m; ++k)
        for (Index i = 0; i < m; ++i) vecs(idx[i], col + k) = solver.eigenvectors()(i, k);
    }
    col += m;
  }

  if (blocks.size() == 1) return {values, vecs};

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return values[x] < values[y]; });
  HermitianEigensystem out{RealVector(n), vectors ? ComplexMatrix(n, n) : ComplexMatrix()};
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[order[k]];
    if (vectors) out.eigenvectors.col(k) = vecs.col(order[k]);
  }
  return out;
}

}  // namespace

HermitianEigensystem eigh(const ComplexMatrix& h) { return solve(h, true); }

RealVector eigvalsh(const ComplexMatrix& h) { return solve(h, false).eigenvalues; }

ComplexMatrix coefficient_matrix(const ComplexVector& psi, const BipartiteSpace& space) {
  if (psi.size() != space.dim_total()) {
    fail(ErrorCode::dimension_mismatch, "coefficient_matrix: vector length != dim_total");
  }
  // psi is i_b-fastest, so the column-major db x da view is C^T.
  Eigen::Map<const ComplexMatrix> ct(psi.data(), space.dim_b(), space.dim_a());
  return ct.transpose();
}

RealVector schmidt_values(const ComplexVector& psi, const BipartiteSpace& space) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    fail(ErrorCode::invalid_argument, "schmidt_values: state is not normalised (norm " +
                                          std::to_string(norm) + ")");
  }
  const ComplexMatrix c = coefficient_matrix(psi, space);
  Eigen::BDCSVD<ComplexMatrix> svd(c);
  return svd.singularValues();
}

double shannon_entropy_bits(const RealVector& probabilities) {
  double s = 0.0;
  for (const double q : probabilities) {
    if (q > 0.0) s -= q * std::log2(q);
  }
  return s;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  return shannon_entropy_bits(eigvalsh(rho));
}

}  // namespace qent
