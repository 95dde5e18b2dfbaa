#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "anonmet/tolerances.hpp"

// Dense complex linear algebra and quantum-state primitives. Everything here
// is a pure function over immutable value types; all of it is safe to call
// concurrently.
//
// Composite-basis convention: subsystem 0 is most significant. For dims
// (d0, d1, ..., dk) the flat index of multi-index (i0, ..., ik) is
// ((i0*d1 + i1)*d2 + i2)*... , i.e. mixed-radix with subsystem 0 leading.
// tensor(a, b) therefore places `a` on the leading subsystem.

namespace anonmet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Dims = std::vector<int>;

enum class Side { A, B };

//---------------------------------------------------------------------------
// Index bookkeeping and small helpers
//---------------------------------------------------------------------------

int total_dim(const Dims& dims);
int composite_index(const std::vector<int>& multi, const Dims& dims);
std::vector<int> multi_index(int index, const Dims& dims);

bool is_finite(const Matrix& m);
bool is_hermitian(const Matrix& m, double tolerance);
double max_abs(const Matrix& m);

//---------------------------------------------------------------------------
// Domain types
//---------------------------------------------------------------------------

// Hermitian generator of a unitary family e^{-i theta H}. Validates
// Hermiticity and finiteness on construction.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m);
  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }

 private:
  Matrix mat_;
};

// A pair of local generators (H_A, G_B) defining the encoding families
// U_A(theta) = e^{-i theta H_A} and V_B(theta) = e^{-i theta G_B}.
struct HamiltonianPair {
  HermitianOperator h_a;
  HermitianOperator g_b;
};

// Trace-one PSD Hermitian matrix with a subsystem dimension list.
// Construction validates all three invariants within the global tolerances
// and throws std::invalid_argument with the offending residual otherwise.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, Matrix m);

  const Dims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  int subsystems() const { return static_cast<int>(dims_.size()); }
  const Matrix& mat() const { return mat_; }

  double purity() const { return (mat_ * mat_).trace().real(); }

  // Unitary conjugation u rho u^dag. Skips re-validation: conjugation by a
  // unitary preserves every DensityMatrix invariant.
  DensityMatrix evolved(const Matrix& u) const;

 private:
  struct Unchecked {};
  DensityMatrix(Dims dims, Matrix m, Unchecked) : dims_(std::move(dims)), mat_(std::move(m)) {}

  Dims dims_;
  Matrix mat_;
};

// Normalized pure-state vector with a subsystem dimension list.
class Ket {
 public:
  Ket(Dims dims, Vector amplitudes);

  const Dims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amps() const { return amps_; }

  Matrix projector() const { return amps_ * amps_.adjoint(); }
  DensityMatrix to_density_matrix() const;

 private:
  Dims dims_;
  Vector amps_;
};

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns, vectors.col(k) <-> values[k]
};

//---------------------------------------------------------------------------
// Operations
//---------------------------------------------------------------------------

// Kronecker product; `a` occupies the leading (most significant) factor.
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);

// Reduced state on the kept subsystems (indices into dims, strictly
// ascending). Trace is preserved.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
Matrix partial_trace_raw(const Matrix& m, const Dims& dims, const std::vector<int>& keep);

// Transpose on one tensor factor. The result is Hermitian but generally not
// PSD, hence a plain Matrix.
Matrix partial_transpose(const DensityMatrix& rho, int sys);
Matrix partial_transpose_raw(const Matrix& m, const Dims& dims, int sys);

// Eigendecomposition of a Hermitian matrix (ascending eigenvalues).
// Throws std::invalid_argument if the input is not Hermitian within
// tol().herm.
EigenSystem hermitian_eig(const Matrix& m);

// e^{-i theta h} computed through the eigendecomposition (h is Hermitian by
// construction, so this is exact up to the eigensolver).
Matrix unitary_of(const HermitianOperator& h, double theta);

// Embed a single-subsystem operator at position sys of a composite space.
Matrix embed(const Matrix& op, int sys, const Dims& dims);
Matrix embed(const HermitianOperator& h, Side side, const Dims& dims);

// T(rho, sigma) = (1/2) sum |eigenvalues(rho - sigma)|, in [0, 1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Uhlmann fidelity with the square-root convention: F = sum of singular
// values of sqrt(rho) sqrt(sigma). Reduces to |<psi|phi>| on pure states and
// satisfies F(rho^(x)n, sigma^(x)n) = F(rho, sigma)^n.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Principal square root of a PSD matrix (negative eigenvalues clamped to 0).
Matrix sqrt_psd(const Matrix& m);

// Purification: |psi> = sum_j sqrt(lambda_j) |phi_j> (x) |j>_anc with the
// ancilla appended as the last subsystem and dimension = rank(rho)
// (eigenvalues below tol().psd dropped, descending order).
Ket purify(const DensityMatrix& rho);

}  // namespace anonmet
