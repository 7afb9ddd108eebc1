#pragma once

// Brute-force references for the tests: every operator is materialised on
// the full space with a hand-written Kronecker product and every trace is a
// plain dense product.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline M kron(const M& x, const M& y) {
  M out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index k = 0; k < y.rows(); ++k)
        for (Eigen::Index l = 0; l < y.cols(); ++l) out(i * y.rows() + k, j * y.cols() + l) = x(i, j) * y(k, l);
  return out;
}

inline M eye(Eigen::Index d) { return M::Identity(d, d); }

inline M lower() {
  M s = M::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

inline M annihilation(int cutoff) {
  M a = M::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline M projector(const V& v) { return v * v.adjoint(); }

inline C tr(const M& m) { return m.trace(); }

inline double ev(const M& x, const M& rho) { return (x * rho).trace().real(); }

// <n_A><n_B> - Tr(n_A n_B rho^2) with full matrices.
inline double witness_product(const M& a, const M& b, const M& rho) {
  const M na = kron(a.adjoint() * a, eye(b.rows()));
  const M nb = kron(eye(a.rows()), b.adjoint() * b);
  return ev(na, rho) * ev(nb, rho) - (na * nb * rho * rho).trace().real();
}

inline V basis(Eigen::Index d, Eigen::Index k) {
  V v = V::Zero(d);
  v[k] = 1.0;
  return v;
}

}  // namespace oracle
