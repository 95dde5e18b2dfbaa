#include "anonmet/states.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "anonmet/rng.hpp"

namespace anonmet {

namespace {

const double kInvSqrt2 = 0.70710678118654752440;

Ket two_qubit_ket(Complex c00, Complex c01, Complex c10, Complex c11) {
  Vector v(4);
  v << c00, c01, c10, c11;
  return Ket({2, 2}, v);
}

}  // namespace

DensityMatrix bell_psi_plus() {
  return two_qubit_ket(kInvSqrt2, 0, 0, kInvSqrt2).to_density_matrix();
}

DensityMatrix bell_psi_minus() {
  return two_qubit_ket(0, kInvSqrt2, -kInvSqrt2, 0).to_density_matrix();
}

DensityMatrix werner(double a) {
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("werner: a must be in [0,1]");
  const Matrix singlet = bell_psi_minus().mat();
  Matrix m = a * singlet + (1.0 - a) / 4.0 * Matrix::Identity(4, 4);
  return DensityMatrix({2, 2}, std::move(m));
}

DensityMatrix maximally_correlated(const Matrix& coeffs) {
  return multipartite_correlated(coeffs, 2);
}

DensityMatrix multipartite_correlated(const Matrix& coeffs, int parties) {
  if (parties < 2) throw std::invalid_argument("multipartite_correlated: need at least 2 parties");
  const int d = static_cast<int>(coeffs.rows());
  DensityMatrix check({d}, coeffs);  // validates coeffs as a state
  const Dims dims(parties, d);
  const int big = total_dim(dims);
  Matrix m = Matrix::Zero(big, big);
  std::vector<int> row(parties), col(parties);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      std::fill(row.begin(), row.end(), i);
      std::fill(col.begin(), col.end(), j);
      m(composite_index(row, dims), composite_index(col, dims)) = check.mat()(i, j);
    }
  }
  return DensityMatrix(dims, std::move(m));
}

DensityMatrix block_correlated(const Matrix& coeffs, const std::vector<int>& degeneracies) {
  if (degeneracies.empty()) throw std::invalid_argument("block_correlated: empty degeneracy list");
  int support = 0;  // dimension of span{|i lambda, i lambda'>}
  int local = 0;
  for (int g : degeneracies) {
    if (g < 1) throw std::invalid_argument("block_correlated: degeneracies must be >= 1");
    support += g * g;
    local += g;
  }
  DensityMatrix check({support}, coeffs);  // validates coeffs as a state

  // Offsets of each block in the local space and in the coefficient index.
  std::vector<int> local_offset(degeneracies.size()), coeff_offset(degeneracies.size());
  for (std::size_t i = 1; i < degeneracies.size(); ++i) {
    local_offset[i] = local_offset[i - 1] + degeneracies[i - 1];
    coeff_offset[i] = coeff_offset[i - 1] + degeneracies[i - 1] * degeneracies[i - 1];
  }

  const Dims dims{local, local};
  Matrix m = Matrix::Zero(local * local, local * local);
  for (std::size_t i = 0; i < degeneracies.size(); ++i) {
    for (int la = 0; la < degeneracies[i]; ++la) {
      for (int lb = 0; lb < degeneracies[i]; ++lb) {
        const int r_coeff = coeff_offset[i] + la * degeneracies[i] + lb;
        const int r_full = (local_offset[i] + la) * local + (local_offset[i] + lb);
        for (std::size_t j = 0; j < degeneracies.size(); ++j) {
          for (int ma = 0; ma < degeneracies[j]; ++ma) {
            for (int mb = 0; mb < degeneracies[j]; ++mb) {
              const int c_coeff = coeff_offset[j] + ma * degeneracies[j] + mb;
              const int c_full = (local_offset[j] + ma) * local + (local_offset[j] + mb);
              m(r_full, c_full) = check.mat()(r_coeff, c_coeff);
            }
          }
        }
      }
    }
  }
  return DensityMatrix(dims, std::move(m));
}

DensityMatrix parity_mixture(double a, double b, double m) {
  if (a < 0 || a > 1 || b < 0 || b > 1 || m < 0 || m > 1) {
    throw std::invalid_argument("parity_mixture: parameters must be in [0,1]");
  }
  const Matrix even = two_qubit_ket(std::sqrt(a), 0, 0, std::sqrt(1 - a)).projector();
  const Matrix odd = two_qubit_ket(0, std::sqrt(b), std::sqrt(1 - b), 0).projector();
  return DensityMatrix({2, 2}, m * even + (1.0 - m) * odd);
}

DensityMatrix discordant_separable() {
  const Matrix zz = two_qubit_ket(1, 0, 0, 0).projector();
  const Matrix pp = two_qubit_ket(0.5, 0.5, 0.5, 0.5).projector();
  return DensityMatrix({2, 2}, 0.5 * zz + 0.5 * pp);
}

DensityMatrix cc_pair() {
  const Matrix m00 = two_qubit_ket(1, 0, 0, 0).projector();
  const Matrix m11 = two_qubit_ket(0, 0, 0, 1).projector();
  return DensityMatrix({2, 2}, 0.5 * m00 + 0.5 * m11);
}

DensityMatrix ghz(int parties) {
  Matrix coeffs(2, 2);
  coeffs << 0.5, 0.5, 0.5, 0.5;
  return multipartite_correlated(coeffs, parties);
}

namespace {

void check_basis(const Matrix& basis, const char* what) {
  const Eigen::Index d = basis.rows();
  if (basis.cols() != d) throw std::invalid_argument(std::string(what) + ": basis must be square");
  if (max_abs(basis.adjoint() * basis - Matrix::Identity(d, d)) > 1e-9) {
    throw std::invalid_argument(std::string(what) + ": basis columns not orthonormal");
  }
}

void check_probabilities(const RealVector& p) {
  if (p.minCoeff() < -1e-12) throw std::invalid_argument("negative probability");
  if (std::abs(p.sum() - 1.0) > 1e-10) throw std::invalid_argument("probabilities must sum to 1");
}

}  // namespace

DensityMatrix classical_cc(const RealMatrix& p, const Matrix& basis_a, const Matrix& basis_b) {
  check_basis(basis_a, "classical_cc");
  check_basis(basis_b, "classical_cc");
  if (p.rows() != basis_a.rows() || p.cols() != basis_b.rows()) {
    throw std::invalid_argument("classical_cc: probability table shape mismatch");
  }
  RealVector flat = Eigen::Map<const RealVector>(p.data(), p.size());
  check_probabilities(flat);
  const int da = static_cast<int>(basis_a.rows()), db = static_cast<int>(basis_b.rows());
  Matrix m = Matrix::Zero(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < db; ++j) {
      const Matrix pa = basis_a.col(i) * basis_a.col(i).adjoint();
      const Matrix pb = basis_b.col(j) * basis_b.col(j).adjoint();
      m += p(i, j) * tensor(pa, pb);
    }
  }
  return DensityMatrix({da, db}, std::move(m));
}

DensityMatrix classical_cq(const RealVector& p, const Matrix& basis_a, const std::vector<DensityMatrix>& cond_b) {
  check_basis(basis_a, "classical_cq");
  check_probabilities(p);
  if (static_cast<int>(cond_b.size()) != basis_a.rows()) {
    throw std::invalid_argument("classical_cq: need one conditional state per basis vector");
  }
  const int da = static_cast<int>(basis_a.rows());
  const int db = cond_b.front().dim();
  Matrix m = Matrix::Zero(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    if (cond_b[i].dim() != db) throw std::invalid_argument("classical_cq: conditional dimension mismatch");
    const Matrix pa = basis_a.col(i) * basis_a.col(i).adjoint();
    m += p(i) * tensor(pa, cond_b[i].mat());
  }
  return DensityMatrix({da, db}, std::move(m));
}

DensityMatrix classical_qc(const RealVector& p, const std::vector<DensityMatrix>& cond_a, const Matrix& basis_b) {
  check_basis(basis_b, "classical_qc");
  check_probabilities(p);
  if (static_cast<int>(cond_a.size()) != basis_b.rows()) {
    throw std::invalid_argument("classical_qc: need one conditional state per basis vector");
  }
  const int db = static_cast<int>(basis_b.rows());
  const int da = cond_a.front().dim();
  Matrix m = Matrix::Zero(da * db, da * db);
  for (int j = 0; j < db; ++j) {
    if (cond_a[j].dim() != da) throw std::invalid_argument("classical_qc: conditional dimension mismatch");
    const Matrix pb = basis_b.col(j) * basis_b.col(j).adjoint();
    m += p(j) * tensor(cond_a[j].mat(), pb);
  }
  return DensityMatrix({da, db}, std::move(m));
}

//---------------------------------------------------------------------------
// Random generators
//---------------------------------------------------------------------------

Ket random_pure(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  const int d = total_dim(dims);
  Vector v(d);
  for (int k = 0; k < d; ++k) v(k) = Complex(rng.gaussian(), rng.gaussian());
  v /= v.norm();
  return Ket(dims, std::move(v));
}

DensityMatrix random_state(const Dims& dims, int rank, std::uint64_t seed) {
  const int d = total_dim(dims);
  if (rank < 1 || rank > d) throw std::invalid_argument("random_state: rank must be in [1, dim]");
  Rng rng(seed);
  // Partial trace of a random pure state on system x rank-dimensional ancilla.
  Matrix g(d, rank);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < rank; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  }
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(dims, std::move(m));
}

HermitianOperator random_hermitian(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  }
  return HermitianOperator(0.5 * (g + Matrix(g.adjoint())));
}

Matrix random_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix column phases so the decomposition is unique (Haar up to convention).
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex rkk = r(k, k);
    if (std::abs(rkk) > 0) q.col(k) *= rkk / std::abs(rkk);
  }
  return q;
}

DensityMatrix random_separable(int da, int db, int components, std::uint64_t seed) {
  if (components < 1) throw std::invalid_argument("random_separable: need at least one component");
  Rng rng(seed);
  RealVector p(components);
  for (int k = 0; k < components; ++k) {
    const double g = rng.gaussian();
    p(k) = g * g;
  }
  p /= p.sum();
  Matrix m = Matrix::Zero(da * db, da * db);
  for (int k = 0; k < components; ++k) {
    const DensityMatrix ra = random_state({da}, da, rng.next_u64());
    const DensityMatrix rb = random_state({db}, db, rng.next_u64());
    m += p(k) * tensor(ra.mat(), rb.mat());
  }
  return DensityMatrix({da, db}, std::move(m));
}

//---------------------------------------------------------------------------
// Catalog
//---------------------------------------------------------------------------

namespace {

double param_or(const StateSpec& spec, const std::string& key, double fallback) {
  auto it = spec.parameters.find(key);
  return it == spec.parameters.end() ? fallback : it->second;
}

double required_param(const StateSpec& spec, const std::string& key) {
  auto it = spec.parameters.find(key);
  if (it == spec.parameters.end()) {
    throw std::invalid_argument("catalog state '" + spec.name + "' needs parameter '" + key + "'");
  }
  return it->second;
}

}  // namespace

DensityMatrix make_state(const StateSpec& spec) {
  if (spec.name == "bell-psi-plus") return bell_psi_plus();
  if (spec.name == "bell-psi-minus") return bell_psi_minus();
  if (spec.name == "werner") return werner(required_param(spec, "a"));
  if (spec.name == "parity-mixture") {
    return parity_mixture(required_param(spec, "a"), required_param(spec, "b"), required_param(spec, "m"));
  }
  if (spec.name == "discordant-separable") return discordant_separable();
  if (spec.name == "cc-pair") return cc_pair();
  if (spec.name == "ghz") return ghz(static_cast<int>(param_or(spec, "parties", 3)));
  if (spec.name == "max-correlated-plus") {
    // Pure maximally correlated state built from |+><+| coefficients.
    Matrix c(2, 2);
    c << 0.5, 0.5, 0.5, 0.5;
    return maximally_correlated(c);
  }
  if (spec.name == "perturbed-bell") {
    // (1-eps)|psi+><psi+| + eps|01><01|. The diagonal perturbation lives in
    // the matched zero mode, so this stays perfectly anonymous for the
    // |1><1| pair while its QFI drops below 1.
    const double eps = param_or(spec, "eps", 0.05);
    if (eps < 0 || eps > 1) throw std::invalid_argument("perturbed-bell: eps must be in [0,1]");
    Matrix m = (1.0 - eps) * bell_psi_plus().mat();
    m(1, 1) += eps;
    return DensityMatrix({2, 2}, std::move(m));
  }
  if (spec.name == "noisy-bell") {
    // (1-eps)|psi+><psi+| + eps|psi-><psi-|: the singlet admixture carries a
    // mismatched coherence, so anonymity degrades and the merit is finite.
    const double eps = param_or(spec, "eps", 0.05);
    if (eps < 0 || eps > 1) throw std::invalid_argument("noisy-bell: eps must be in [0,1]");
    return DensityMatrix({2, 2}, (1.0 - eps) * bell_psi_plus().mat() + eps * bell_psi_minus().mat());
  }
  throw std::invalid_argument("unknown catalog state '" + spec.name + "'");
}

std::vector<std::string> catalog_names() {
  return {"bell-psi-plus",       "bell-psi-minus", "werner",     "parity-mixture",
          "discordant-separable", "cc-pair",        "ghz",        "max-correlated-plus",
          "perturbed-bell",      "noisy-bell"};
}

}  // namespace anonmet
