#include "anonmet/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace anonmet {

namespace {

// Per-entry mode frequency of subsystem sys in the transformed (generator
// eigenbasis) picture: omega(r, c) = E[c_sys] - E[r_sys].
struct SubsystemFrequencies {
  EigenSystem eig;
  std::vector<int> row_level;  // composite index -> local eigenlevel
};

SubsystemFrequencies subsystem_frequencies(const Dims& dims, const HermitianOperator& h, int sys) {
  if (sys < 0 || sys >= static_cast<int>(dims.size())) {
    throw std::invalid_argument("generator subsystem index out of range");
  }
  if (h.dim() != dims[sys]) throw std::invalid_argument("generator does not match subsystem dimension");
  SubsystemFrequencies out{hermitian_eig(h.mat()), {}};
  const int d = total_dim(dims);
  out.row_level.resize(d);
  for (int i = 0; i < d; ++i) out.row_level[i] = multi_index(i, dims)[sys];
  return out;
}

Matrix to_eigenbasis(const Matrix& rho, const Dims& dims, const Matrix& vectors, int sys) {
  const Matrix w = embed(vectors, sys, dims);
  return w.adjoint() * rho * w;
}

Matrix from_eigenbasis(const Matrix& masked, const Dims& dims, const Matrix& vectors, int sys) {
  const Matrix w = embed(vectors, sys, dims);
  return w * masked * w.adjoint();
}

bool close(double x, double y) { return std::abs(x - y) <= tol().freq; }

}  // namespace

std::vector<double> bohr_frequencies(const RealVector& eigenvalues) {
  std::vector<double> diffs;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
      diffs.push_back(eigenvalues(j) - eigenvalues(i));
    }
  }
  std::sort(diffs.begin(), diffs.end());
  std::vector<double> grouped;
  for (double w : diffs) {
    if (grouped.empty() || w - grouped.back() > tol().freq) grouped.push_back(w);
  }
  return grouped;
}

Matrix mode_project_at(const Matrix& rho, const Dims& dims, const HermitianOperator& h, int sys, double omega) {
  const SubsystemFrequencies f = subsystem_frequencies(dims, h, sys);
  Matrix t = to_eigenbasis(rho, dims, f.eig.vectors, sys);
  const int d = static_cast<int>(t.rows());
  for (int r = 0; r < d; ++r) {
    const double er = f.eig.values(f.row_level[r]);
    for (int c = 0; c < d; ++c) {
      const double ec = f.eig.values(f.row_level[c]);
      if (!close(ec - er, omega)) t(r, c) = Complex(0, 0);
    }
  }
  return from_eigenbasis(t, dims, f.eig.vectors, sys);
}

Matrix mode_project(const DensityMatrix& rho, const HermitianOperator& h, Side side, double omega) {
  if (rho.subsystems() != 2) throw std::invalid_argument("mode_project: bipartite state required");
  return mode_project_at(rho.mat(), rho.dims(), h, side == Side::A ? 0 : 1, omega);
}

ModeDecomposition mode_decompose(const DensityMatrix& rho, const HermitianOperator& h, Side side) {
  const SubsystemFrequencies f = subsystem_frequencies(rho.dims(), h, side == Side::A ? 0 : 1);
  ModeDecomposition out;
  out.generator_spectrum = f.eig.values;
  for (double w : bohr_frequencies(f.eig.values)) {
    out.modes.emplace_back(w, mode_project(rho, h, side, w));
  }
  return out;
}

WaModeCheck check_wa_modes(const DensityMatrix& rho, const HamiltonianPair& pair) {
  if (rho.subsystems() != 2) throw std::invalid_argument("check_wa_modes: bipartite state required");
  const Dims& dims = rho.dims();
  const SubsystemFrequencies fa = subsystem_frequencies(dims, pair.h_a, 0);
  const SubsystemFrequencies fb = subsystem_frequencies(dims, pair.g_b, 1);

  // One joint transform; an entry sits in A-mode (E_c - E_r) and B-mode
  // (G_c - G_r). P_A^w rho = P_B^w rho for every w exactly when all entries
  // with mismatched A/B frequencies vanish.
  const Matrix w = tensor(fa.eig.vectors, fb.eig.vectors);
  const Matrix t = w.adjoint() * rho.mat() * w;
  const int d = rho.dim();

  double residual = 0.0;
  double max_nonzero = 0.0;
  for (int r = 0; r < d; ++r) {
    const std::vector<int> rm = multi_index(r, dims);
    for (int c = 0; c < d; ++c) {
      const std::vector<int> cm = multi_index(c, dims);
      const double wa = fa.eig.values(cm[0]) - fa.eig.values(rm[0]);
      const double wb = fb.eig.values(cm[1]) - fb.eig.values(rm[1]);
      const double mag = std::abs(t(r, c));
      if (!close(wa, wb)) residual = std::max(residual, mag);
      if (!close(wa, 0.0)) max_nonzero = std::max(max_nonzero, mag);
    }
  }
  const bool has_mode = max_nonzero >= tol().fail;
  return WaModeCheck{residual <= tol().hold && has_mode, residual, has_mode, max_nonzero};
}

Matrix split_twirl(const DensityMatrix& rho, const HamiltonianPair& pair, double omega) {
  if (rho.subsystems() != 2) throw std::invalid_argument("split_twirl: bipartite state required");
  const Dims& dims = rho.dims();
  const SubsystemFrequencies fa = subsystem_frequencies(dims, pair.h_a, 0);
  const SubsystemFrequencies fb = subsystem_frequencies(dims, pair.g_b, 1);
  const Matrix w = tensor(fa.eig.vectors, fb.eig.vectors);
  Matrix t = w.adjoint() * rho.mat() * w;
  const int d = rho.dim();
  for (int r = 0; r < d; ++r) {
    const std::vector<int> rm = multi_index(r, dims);
    for (int c = 0; c < d; ++c) {
      const std::vector<int> cm = multi_index(c, dims);
      const double ws = fb.eig.values(cm[1]) - fa.eig.values(rm[0]);
      if (!close(ws, omega)) t(r, c) = Complex(0, 0);
    }
  }
  return w * t * w.adjoint();
}

Matrix g_twirl(const DensityMatrix& rho, const HamiltonianPair& pair) {
  if (rho.subsystems() != 2) throw std::invalid_argument("g_twirl: bipartite state required");
  const Dims& dims = rho.dims();
  const SubsystemFrequencies fa = subsystem_frequencies(dims, pair.h_a, 0);
  const SubsystemFrequencies fb = subsystem_frequencies(dims, pair.g_b, 1);
  const Matrix w = tensor(fa.eig.vectors, fb.eig.vectors);
  Matrix t = w.adjoint() * rho.mat() * w;
  const int d = rho.dim();
  for (int r = 0; r < d; ++r) {
    const std::vector<int> rm = multi_index(r, dims);
    for (int c = 0; c < d; ++c) {
      const std::vector<int> cm = multi_index(c, dims);
      const double wa = fa.eig.values(cm[0]) - fa.eig.values(rm[0]);
      const double wb = fb.eig.values(cm[1]) - fb.eig.values(rm[1]);
      if (!close(wa, wb)) t(r, c) = Complex(0, 0);
    }
  }
  return w * t * w.adjoint();
}

SaTwirlCheck check_sa_split_twirl(const DensityMatrix& rho, const HamiltonianPair& pair) {
  if (rho.subsystems() != 2) throw std::invalid_argument("check_sa_split_twirl: bipartite state required");
  const Dims& dims = rho.dims();
  const SubsystemFrequencies fa = subsystem_frequencies(dims, pair.h_a, 0);
  const SubsystemFrequencies fb = subsystem_frequencies(dims, pair.g_b, 1);
  const Matrix w = tensor(fa.eig.vectors, fb.eig.vectors);
  const Matrix t = w.adjoint() * rho.mat() * w;
  const int d = rho.dim();

  // Split-mode vs B-mode frequency of each entry; the SA condition holds
  // when one common shift aligns them on the support of rho.
  Eigen::MatrixXd split_freq(d, d), b_freq(d, d);
  double encoding = 0.0;
  std::vector<double> shifts{0.0};
  for (int r = 0; r < d; ++r) {
    const std::vector<int> rm = multi_index(r, dims);
    for (int c = 0; c < d; ++c) {
      const std::vector<int> cm = multi_index(c, dims);
      split_freq(r, c) = fb.eig.values(cm[1]) - fa.eig.values(rm[0]);
      b_freq(r, c) = fb.eig.values(cm[1]) - fb.eig.values(rm[1]);
      shifts.push_back(split_freq(r, c) - b_freq(r, c));
      const double wa = fa.eig.values(cm[0]) - fa.eig.values(rm[0]);
      if (!close(wa, 0.0)) encoding = std::max(encoding, std::abs(t(r, c)));
    }
  }
  std::sort(shifts.begin(), shifts.end());
  shifts.erase(std::unique(shifts.begin(), shifts.end(),
                           [](double x, double y) { return std::abs(x - y) <= tol().freq; }),
               shifts.end());

  double best = std::numeric_limits<double>::infinity();
  double best_shift = 0.0;
  for (double shift : shifts) {
    double mismatch = 0.0;
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        if (!close(split_freq(r, c) - shift, b_freq(r, c))) {
          mismatch = std::max(mismatch, std::abs(t(r, c)));
        }
      }
    }
    if (mismatch < best) {
      best = mismatch;
      best_shift = shift;
    }
  }
  const bool has_mode = encoding >= tol().fail;
  return SaTwirlCheck{best <= tol().hold && has_mode, best, encoding, best_shift};
}

MultiWaCheck multipartite_wa_check(const DensityMatrix& rho, const std::vector<HermitianOperator>& generators) {
  const int n = rho.subsystems();
  if (n < 2) throw std::invalid_argument("multipartite_wa_check: need at least two parties");
  if (static_cast<int>(generators.size()) != n) {
    throw std::invalid_argument("multipartite_wa_check: one generator per party required");
  }
  const Dims& dims = rho.dims();
  std::vector<SubsystemFrequencies> fs;
  Matrix w = Matrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) {
    fs.push_back(subsystem_frequencies(dims, generators[s], s));
    w = tensor(w, fs.back().eig.vectors);
  }
  const Matrix t = w.adjoint() * rho.mat() * w;
  const int d = rho.dim();

  double residual = 0.0;
  double max_nonzero = 0.0;
  std::vector<double> freq(n);
  for (int r = 0; r < d; ++r) {
    const std::vector<int> rm = multi_index(r, dims);
    for (int c = 0; c < d; ++c) {
      const std::vector<int> cm = multi_index(c, dims);
      for (int s = 0; s < n; ++s) freq[s] = fs[s].eig.values(cm[s]) - fs[s].eig.values(rm[s]);
      const double mag = std::abs(t(r, c));
      for (int s = 1; s < n; ++s) {
        if (!close(freq[s], freq[0])) {
          residual = std::max(residual, mag);
          break;
        }
      }
      if (!close(freq[0], 0.0)) max_nonzero = std::max(max_nonzero, mag);
    }
  }
  const bool has_mode = max_nonzero >= tol().fail;
  return MultiWaCheck{residual <= tol().hold && has_mode, residual, has_mode};
}

}  // namespace anonmet
