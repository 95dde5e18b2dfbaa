#include "anonmet/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace anonmet {

Tolerances& tol() {
  static Tolerances t;
  return t;
}

//---------------------------------------------------------------------------
// Index bookkeeping
//---------------------------------------------------------------------------

int total_dim(const Dims& dims) {
  if (dims.empty()) throw std::invalid_argument("empty dimension list");
  int d = 1;
  for (int k : dims) {
    if (k < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
    d *= k;
  }
  return d;
}

int composite_index(const std::vector<int>& multi, const Dims& dims) {
  if (multi.size() != dims.size()) throw std::invalid_argument("multi-index rank mismatch");
  int idx = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (multi[s] < 0 || multi[s] >= dims[s]) throw std::invalid_argument("multi-index out of range");
    idx = idx * dims[s] + multi[s];
  }
  return idx;
}

std::vector<int> multi_index(int index, const Dims& dims) {
  std::vector<int> multi(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    multi[s] = index % dims[s];
    index /= dims[s];
  }
  return multi;
}

bool is_finite(const Matrix& m) {
  return m.allFinite();
}

bool is_hermitian(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tolerance;
}

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

//---------------------------------------------------------------------------
// Domain types
//---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols()) throw std::invalid_argument("Hermitian operator must be square");
  if (!is_finite(mat_)) throw std::invalid_argument("Hermitian operator has non-finite entries");
  const double r = max_abs(mat_ - mat_.adjoint());
  if (r > tol().herm) {
    std::ostringstream os;
    os << "operator not Hermitian: residual " << r << " > " << tol().herm;
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix::DensityMatrix(Dims dims, Matrix m) : dims_(std::move(dims)), mat_(std::move(m)) {
  const int d = total_dim(dims_);
  if (mat_.rows() != d || mat_.cols() != d) {
    throw std::invalid_argument("density matrix size does not match dims product");
  }
  if (!is_finite(mat_)) throw std::invalid_argument("density matrix has non-finite entries");
  const double herm = max_abs(mat_ - mat_.adjoint());
  if (herm > tol().herm) {
    std::ostringstream os;
    os << "density matrix not Hermitian: residual " << herm;
    throw std::invalid_argument(os.str());
  }
  const double tr = std::abs(mat_.trace() - Complex(1.0, 0.0));
  if (tr > tol().trace) {
    std::ostringstream os;
    os << "density matrix trace differs from 1 by " << tr;
    throw std::invalid_argument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol().psd) {
    std::ostringstream os;
    os << "density matrix not PSD: min eigenvalue " << min_eig;
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix DensityMatrix::evolved(const Matrix& u) const {
  if (u.rows() != mat_.rows() || u.cols() != mat_.cols()) {
    throw std::invalid_argument("evolution operator size mismatch");
  }
  return DensityMatrix(dims_, u * mat_ * u.adjoint(), Unchecked{});
}

Ket::Ket(Dims dims, Vector amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  const int d = total_dim(dims_);
  if (amps_.size() != d) throw std::invalid_argument("ket length does not match dims product");
  if (!amps_.allFinite()) throw std::invalid_argument("ket has non-finite entries");
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > tol().norm) {
    std::ostringstream os;
    os << "ket not normalized: |norm - 1| = " << std::abs(n - 1.0);
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix Ket::to_density_matrix() const {
  return DensityMatrix(dims_, projector());
}

//---------------------------------------------------------------------------
// Operations
//---------------------------------------------------------------------------

Matrix tensor(const Matrix& a, const Matrix& b) {
  if (!is_finite(a) || !is_finite(b)) throw std::invalid_argument("tensor: non-finite input");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

namespace {

void check_keep_set(const std::vector<int>& keep, int subsystems) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= subsystems) throw std::invalid_argument("partial_trace: subsystem index out of range");
    if (i > 0 && keep[i] <= keep[i - 1]) throw std::invalid_argument("partial_trace: keep set must be strictly ascending");
  }
}

}  // namespace

Matrix partial_trace_raw(const Matrix& m, const Dims& dims, const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  check_keep_set(keep, n);

  std::vector<int> traced;
  for (int s = 0; s < n; ++s) {
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);
  }
  Dims kept_dims, traced_dims;
  for (int s : keep) kept_dims.push_back(dims[s]);
  for (int s : traced) traced_dims.push_back(dims[s]);

  const int dk = total_dim(kept_dims);
  const int dt = traced.empty() ? 1 : total_dim(traced_dims);

  Matrix out = Matrix::Zero(dk, dk);
  std::vector<int> full_row(n), full_col(n);
  for (int r = 0; r < dk; ++r) {
    const std::vector<int> rm = multi_index(r, kept_dims);
    for (int c = 0; c < dk; ++c) {
      const std::vector<int> cm = multi_index(c, kept_dims);
      Complex acc(0.0, 0.0);
      for (int t = 0; t < dt; ++t) {
        const std::vector<int> tm = traced.empty() ? std::vector<int>{} : multi_index(t, traced_dims);
        for (std::size_t i = 0; i < keep.size(); ++i) {
          full_row[keep[i]] = rm[i];
          full_col[keep[i]] = cm[i];
        }
        for (std::size_t i = 0; i < traced.size(); ++i) {
          full_row[traced[i]] = tm[i];
          full_col[traced[i]] = tm[i];
        }
        acc += m(composite_index(full_row, dims), composite_index(full_col, dims));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  Dims kept_dims;
  check_keep_set(keep, rho.subsystems());
  for (int s : keep) kept_dims.push_back(rho.dims()[s]);
  return DensityMatrix(kept_dims, partial_trace_raw(rho.mat(), rho.dims(), keep));
}

Matrix partial_transpose_raw(const Matrix& m, const Dims& dims, int sys) {
  const int n = static_cast<int>(dims.size());
  if (sys < 0 || sys >= n) throw std::invalid_argument("partial_transpose: subsystem index out of range");
  const int d = total_dim(dims);
  Matrix out(d, d);
  for (int r = 0; r < d; ++r) {
    std::vector<int> rm = multi_index(r, dims);
    for (int c = 0; c < d; ++c) {
      std::vector<int> cm = multi_index(c, dims);
      std::swap(rm[sys], cm[sys]);
      out(composite_index(rm, dims), composite_index(cm, dims)) = m(r, c);
      std::swap(rm[sys], cm[sys]);
    }
  }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, int sys) {
  return partial_transpose_raw(rho.mat(), rho.dims(), sys);
}

EigenSystem hermitian_eig(const Matrix& m) {
  if (!is_hermitian(m, tol().herm)) {
    throw std::invalid_argument("hermitian_eig: input not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: eigensolver failed");
  return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

Matrix unitary_of(const HermitianOperator& h, double theta) {
  const EigenSystem es = hermitian_eig(h.mat());
  Vector phases(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    phases(k) = std::exp(Complex(0.0, -theta * es.values(k)));
  }
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

Matrix embed(const Matrix& op, int sys, const Dims& dims) {
  const int n = static_cast<int>(dims.size());
  if (sys < 0 || sys >= n) throw std::invalid_argument("embed: subsystem index out of range");
  if (op.rows() != dims[sys] || op.cols() != dims[sys]) {
    throw std::invalid_argument("embed: operator size does not match subsystem dimension");
  }
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) {
    out = tensor(out, s == sys ? op : Matrix(Matrix::Identity(dims[s], dims[s])));
  }
  return out;
}

Matrix embed(const HermitianOperator& h, Side side, const Dims& dims) {
  if (dims.size() != 2) throw std::invalid_argument("embed: A|B embedding needs a bipartite space");
  return embed(h.mat(), side == Side::A ? 0 : 1, dims);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat() - sigma.mat(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix sqrt_psd(const Matrix& m) {
  const EigenSystem es = hermitian_eig(m);
  // Eigenvalues at solver-noise level are exact zeros of the input; taking
  // their square root would inflate the noise from 1e-16 to 1e-8.
  const double floor = 1e-14 * std::max(1.0, es.values.cwiseAbs().maxCoeff());
  RealVector roots(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    roots(k) = es.values(k) > floor ? std::sqrt(es.values(k)) : 0.0;
  }
  return es.vectors * roots.asDiagonal() * es.vectors.adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Matrix prod = sqrt_psd(rho.mat()) * sqrt_psd(sigma.mat());
  Eigen::JacobiSVD<Matrix> svd(prod);
  const double f = svd.singularValues().sum();
  return std::min(f, 1.0);
}

Ket purify(const DensityMatrix& rho) {
  const EigenSystem es = hermitian_eig(rho.mat());
  // Keep eigenvalues at or above the PSD tolerance, largest first.
  std::vector<int> kept;
  for (Eigen::Index k = es.values.size(); k-- > 0;) {
    if (es.values(k) >= tol().psd) kept.push_back(static_cast<int>(k));
  }
  if (kept.empty()) throw std::runtime_error("purify: state has no spectral weight above tolerance");
  const int rank = static_cast<int>(kept.size());
  const int d = rho.dim();

  Vector amps = Vector::Zero(d * rank);
  double norm2 = 0.0;
  for (int j = 0; j < rank; ++j) {
    const double lambda = es.values(kept[j]);
    norm2 += lambda;
    for (int x = 0; x < d; ++x) {
      amps(x * rank + j) = std::sqrt(lambda) * es.vectors(x, kept[j]);
    }
  }
  amps /= std::sqrt(norm2);  // renormalize the weight lost to dropped eigenvalues

  Dims dims = rho.dims();
  dims.push_back(rank);
  return Ket(dims, amps);
}

}  // namespace anonmet
