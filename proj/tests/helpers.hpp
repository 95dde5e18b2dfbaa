#pragma once

#include "anonmet/qmat.hpp"

// Shared fixtures for the test suites.

namespace anonmet::testing {

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Projector |level><level| on a d-dimensional space.
inline Matrix projector(int level, int d) {
  Matrix m = Matrix::Zero(d, d);
  m(level, level) = 1.0;
  return m;
}

inline HermitianOperator proj_op(int level, int d) { return HermitianOperator(projector(level, d)); }

// H_A = |1><1|, G_B = |1><1| (the aligned pair; witnesses |psi+>).
inline HamiltonianPair proj1_pair() { return {proj_op(1, 2), proj_op(1, 2)}; }

// H_A = |1><1|, G_B = |0><0| (the anti-aligned pair; witnesses the Werner family).
inline HamiltonianPair werner_pair() { return {proj_op(1, 2), proj_op(0, 2)}; }

inline HamiltonianPair diag_pair(const std::vector<double>& h, const std::vector<double>& g) {
  Matrix mh = Matrix::Zero(h.size(), h.size());
  for (std::size_t k = 0; k < h.size(); ++k) mh(k, k) = h[k];
  Matrix mg = Matrix::Zero(g.size(), g.size());
  for (std::size_t k = 0; k < g.size(); ++k) mg(k, k) = g[k];
  return {HermitianOperator(mh), HermitianOperator(mg)};
}

// Independent Kronecker product used as an oracle against tensor().
inline Matrix kron_oracle(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace anonmet::testing
