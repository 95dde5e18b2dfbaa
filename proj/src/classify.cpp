#include "anonmet/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anonmet/rng.hpp"
#include "anonmet/states.hpp"

namespace anonmet {

namespace {

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// Shared verdict logic: anonymity residual must clear the hold band while
// the encoding residual clears the fail band.
void apply_verdict(double anonymity, double encoding, bool* holds, bool* inconclusive) {
  *holds = false;
  *inconclusive = false;
  if (anonymity >= tol().fail) return;
  if (encoding <= tol().hold) return;
  if (anonymity <= tol().hold && encoding >= tol().fail) {
    *holds = true;
    return;
  }
  *inconclusive = true;
}

}  // namespace

WaCheck is_wa(const DensityMatrix& rho, const HamiltonianPair& pair) {
  if (rho.subsystems() != 2) throw std::invalid_argument("is_wa: bipartite state required");
  const Matrix ha = embed(pair.h_a, Side::A, rho.dims());
  const Matrix gb = embed(pair.g_b, Side::B, rho.dims());
  const double anonymity = max_abs(commutator(ha - gb, rho.mat()));
  const double encoding = max_abs(commutator(ha, rho.mat()));
  WaCheck out{false, false, anonymity, encoding};
  apply_verdict(anonymity, encoding, &out.holds, &out.inconclusive);
  return out;
}

SaCheck is_sa(const DensityMatrix& rho, const HamiltonianPair& pair) {
  if (rho.subsystems() != 2) throw std::invalid_argument("is_sa: bipartite state required");
  const Matrix ha = embed(pair.h_a, Side::A, rho.dims());
  const Matrix gb = embed(pair.g_b, Side::B, rho.dims());
  const Matrix x = ha * rho.mat() - gb * rho.mat();
  // Global-phase freedom: minimize |x - c rho|_F over a real spectrum shift c.
  const double denom = rho.mat().squaredNorm();
  const double c = (rho.mat().conjugate().cwiseProduct(x)).sum().real() / denom;
  const double residual = max_abs(x - c * rho.mat());
  const double encoding = max_abs(commutator(ha, rho.mat()));
  SaCheck out{false, false, residual, encoding, c};
  apply_verdict(residual, encoding, &out.holds, &out.inconclusive);
  return out;
}

//---------------------------------------------------------------------------
// Marginal eigenbases
//---------------------------------------------------------------------------

namespace {

bool nearly_diagonal(const Matrix& m) {
  double offdiag = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (r != c) offdiag = std::max(offdiag, std::abs(m(r, c)));
    }
  }
  return offdiag < 1e-12;
}

bool has_degeneracy(const RealVector& values) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] - v[i - 1] < 1e-8) return true;
  }
  return false;
}

// Greedy permutation putting each eigenvector on the computational index it
// overlaps most, then a phase fix (largest-magnitude entry real positive).
// Deterministic, and the identity on already-diagonal marginals.
MarginalBasis align_to_identity(const EigenSystem& es) {
  const int d = static_cast<int>(es.values.size());
  std::vector<int> col_of_row(d, -1);
  std::vector<bool> row_used(d, false), col_used(d, false);
  for (int pick = 0; pick < d; ++pick) {
    int best_r = -1, best_c = -1;
    double best = -1.0;
    for (int r = 0; r < d; ++r) {
      if (row_used[r]) continue;
      for (int c = 0; c < d; ++c) {
        if (col_used[c]) continue;
        const double mag = std::abs(es.vectors(r, c));
        if (mag > best) {
          best = mag;
          best_r = r;
          best_c = c;
        }
      }
    }
    row_used[best_r] = true;
    col_used[best_c] = true;
    col_of_row[best_r] = best_c;
  }

  MarginalBasis out;
  out.vectors = Matrix(d, d);
  out.values = RealVector(d);
  for (int r = 0; r < d; ++r) {
    Vector col = es.vectors.col(col_of_row[r]);
    Eigen::Index peak = 0;
    col.cwiseAbs().maxCoeff(&peak);
    const Complex ph = col(peak) / std::abs(col(peak));
    out.vectors.col(r) = col / ph;
    out.values(r) = es.values(col_of_row[r]);
  }
  out.degenerate = has_degeneracy(es.values);
  return out;
}

}  // namespace

MarginalBasis marginal_eigenbasis(const DensityMatrix& rho, Side side) {
  const DensityMatrix marg = partial_trace(rho, {side == Side::A ? 0 : 1});
  if (nearly_diagonal(marg.mat())) {
    MarginalBasis out;
    const int d = marg.dim();
    out.vectors = Matrix::Identity(d, d);
    out.values = marg.mat().diagonal().real();
    out.degenerate = has_degeneracy(out.values);
    return out;
  }
  return align_to_identity(hermitian_eig(marg.mat()));
}

Matrix local_eigenbasis_matrix(const DensityMatrix& rho) {
  if (rho.subsystems() != 2) throw std::invalid_argument("local_eigenbasis_matrix: bipartite state required");
  const MarginalBasis ba = marginal_eigenbasis(rho, Side::A);
  const MarginalBasis bb = marginal_eigenbasis(rho, Side::B);
  const Matrix w = tensor(ba.vectors, bb.vectors);
  return w.adjoint() * rho.mat() * w;
}

//---------------------------------------------------------------------------
// Witness searches
//---------------------------------------------------------------------------

namespace {

// Integer spectra in [0, bound]^dim with min entry 0, constants excluded,
// lexicographic order.
std::vector<std::vector<int>> integer_spectra(int dim, int bound) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(dim, 0);
  while (true) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    if (*mn == 0 && *mx != *mn) out.push_back(v);
    int k = dim - 1;
    while (k >= 0 && v[k] == bound) v[k--] = 0;
    if (k < 0) break;
    ++v[k];
  }
  return out;
}

HermitianOperator spectrum_operator(const Matrix& basis, const std::vector<int>& spectrum) {
  RealVector d(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) d(k) = spectrum[k];
  Matrix m = basis * d.asDiagonal() * basis.adjoint();
  return HermitianOperator(0.5 * (m + Matrix(m.adjoint())));
}

// Eigenvalue clusters (indices grouped by value within 1e-8).
std::vector<std::vector<int>> degeneracy_clusters(const RealVector& values) {
  const int d = static_cast<int>(values.size());
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return values(a) < values(b); });
  std::vector<std::vector<int>> clusters;
  for (int idx : order) {
    if (!clusters.empty() && values(idx) - values(clusters.back().front()) < 1e-8) {
      clusters.back().push_back(idx);
    } else {
      clusters.push_back({idx});
    }
  }
  return clusters;
}

Matrix rotate_degenerate_subspaces(const Matrix& basis, const RealVector& values, Rng& rng) {
  Matrix out = basis;
  for (const auto& cluster : degeneracy_clusters(values)) {
    const int g = static_cast<int>(cluster.size());
    if (g < 2) continue;
    const Matrix u = random_unitary(g, rng.next_u64());
    Matrix block(basis.rows(), g);
    for (int k = 0; k < g; ++k) block.col(k) = basis.col(cluster[k]);
    block = block * u;
    for (int k = 0; k < g; ++k) out.col(cluster[k]) = block.col(k);
  }
  return out;
}

bool wa_accept(const DensityMatrix& rho, const HamiltonianPair& pair) {
  const WaCheck c = is_wa(rho, pair);
  return c.holds && !c.inconclusive;
}

bool sa_accept(const DensityMatrix& rho, const HamiltonianPair& pair) {
  const SaCheck c = is_sa(rho, pair);
  return c.holds && !c.inconclusive;
}

// Fast screen in the candidate eigenbasis: with H, G diagonal there the
// commutators reduce to entrywise frequency weights, so candidates can be
// rejected without building any operator. Survivors are confirmed with the
// full check before being returned.
SearchResult search_pairs(const DensityMatrix& rho, const SearchOptions& opts, bool strong) {
  if (rho.subsystems() != 2) throw std::invalid_argument("witness search: bipartite state required");
  const Dims& dims = rho.dims();
  const int da = dims[0], db = dims[1];
  const MarginalBasis base_a = marginal_eigenbasis(rho, Side::A);
  const MarginalBasis base_b = marginal_eigenbasis(rho, Side::B);

  SearchResult result;
  result.degenerate_marginal = base_a.degenerate || base_b.degenerate;

  const auto spectra_a = integer_spectra(da, opts.spectrum_bound);
  const auto spectra_b = integer_spectra(db, opts.spectrum_bound);

  const auto scan = [&](const Matrix& va, const Matrix& vb) -> std::optional<HamiltonianPair> {
    const Matrix w = tensor(va, vb);
    const Matrix t = w.adjoint() * rho.mat() * w;
    const int d = da * db;
    std::vector<int> ra(d), rb(d);
    for (int i = 0; i < d; ++i) {
      ra[i] = i / db;
      rb[i] = i % db;
    }
    for (const auto& sa : spectra_a) {
      for (const auto& sb : spectra_b) {
        ++result.pairs_tried;
        double anonymity = 0.0, encoding = 0.0;
        if (!strong) {
          for (int r = 0; r < d && anonymity <= tol().hold; ++r) {
            for (int c = 0; c < d; ++c) {
              const double mag = std::abs(t(r, c));
              if (mag == 0.0) continue;
              const double wdiff = (sa[ra[r]] - sb[rb[r]]) - (sa[ra[c]] - sb[rb[c]]);
              anonymity = std::max(anonymity, std::abs(wdiff) * mag);
              encoding = std::max(encoding, std::abs(double(sa[ra[r]] - sa[ra[c]])) * mag);
            }
          }
        } else {
          // Row weights w_r = h[rA] - g[rB]; optimal shift by least squares.
          double num = 0.0, den = 0.0;
          for (int r = 0; r < d; ++r) {
            const double wr = sa[ra[r]] - sb[rb[r]];
            const double n2 = t.row(r).squaredNorm();
            num += wr * n2;
            den += n2;
          }
          const double shift = den > 0 ? num / den : 0.0;
          for (int r = 0; r < d && anonymity <= tol().hold; ++r) {
            const double wr = sa[ra[r]] - sb[rb[r]] - shift;
            for (int c = 0; c < d; ++c) {
              const double mag = std::abs(t(r, c));
              if (mag == 0.0) continue;
              anonymity = std::max(anonymity, std::abs(wr) * mag);
              encoding = std::max(encoding, std::abs(double(sa[ra[r]] - sa[ra[c]])) * mag);
            }
          }
        }
        if (anonymity <= tol().hold && encoding >= tol().fail) {
          HamiltonianPair cand{spectrum_operator(va, sa), spectrum_operator(vb, sb)};
          if ((strong ? sa_accept : wa_accept)(rho, cand)) return cand;
        }
      }
    }
    return std::nullopt;
  };

  result.witness = scan(base_a.vectors, base_b.vectors);
  if (!result.witness && result.degenerate_marginal && opts.random_basis_draws > 0) {
    Rng rng(opts.seed);
    for (int draw = 0; draw < opts.random_basis_draws && !result.witness; ++draw) {
      const Matrix va = rotate_degenerate_subspaces(base_a.vectors, base_a.values, rng);
      const Matrix vb = rotate_degenerate_subspaces(base_b.vectors, base_b.values, rng);
      result.witness = scan(va, vb);
    }
  }
  return result;
}

}  // namespace

SearchResult find_wa_pair(const DensityMatrix& rho, const SearchOptions& opts) {
  return search_pairs(rho, opts, false);
}

SearchResult find_sa_pair(const DensityMatrix& rho, const SearchOptions& opts) {
  return search_pairs(rho, opts, true);
}

//---------------------------------------------------------------------------
// Correlation checks
//---------------------------------------------------------------------------

PptCheck is_entangled_ppt(const DensityMatrix& rho) {
  if (rho.subsystems() != 2) throw std::invalid_argument("is_entangled_ppt: bipartite state required");
  const Matrix pt = partial_transpose(rho, 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  const bool npt = min_eig < -tol().psd;
  const bool small = rho.dims()[0] * rho.dims()[1] <= 6;
  return PptCheck{npt, min_eig, npt || small};
}

namespace {

enum class FormVerdict { Yes, No, Unknown };

// Largest block-off-diagonal element of rho with blocks defined by the
// pointer basis on the given side.
double block_offdiag(const DensityMatrix& rho, const Matrix& basis, Side side) {
  const Dims& dims = rho.dims();
  const Matrix w = embed(basis, side == Side::A ? 0 : 1, dims);
  const Matrix t = w.adjoint() * rho.mat() * w;
  const int d = rho.dim();
  const int sys = side == Side::A ? 0 : 1;
  double out = 0.0;
  for (int r = 0; r < d; ++r) {
    const int rl = multi_index(r, dims)[sys];
    for (int c = 0; c < d; ++c) {
      if (multi_index(c, dims)[sys] != rl) out = std::max(out, std::abs(t(r, c)));
    }
  }
  return out;
}

std::vector<Matrix> conditional_blocks(const DensityMatrix& rho, const Matrix& basis, Side side) {
  const Dims& dims = rho.dims();
  const int sys = side == Side::A ? 0 : 1;
  const int other = 1 - sys;
  const Matrix w = embed(basis, sys, dims);
  const Matrix t = w.adjoint() * rho.mat() * w;
  std::vector<Matrix> blocks(dims[sys], Matrix::Zero(dims[other], dims[other]));
  for (int i = 0; i < dims[sys]; ++i) {
    for (int x = 0; x < dims[other]; ++x) {
      for (int y = 0; y < dims[other]; ++y) {
        std::vector<int> rm(2), cm(2);
        rm[sys] = i;
        cm[sys] = i;
        rm[other] = x;
        cm[other] = y;
        blocks[i](x, y) = t(composite_index(rm, dims), composite_index(cm, dims));
      }
    }
  }
  return blocks;
}

struct PointerSearch {
  FormVerdict verdict = FormVerdict::Unknown;
  Matrix basis;       // witnessing basis when verdict == Yes
  bool unique = true;  // false when degeneracy leaves the basis choice open
};

// Candidate pointer bases from randomized operator probes: for a state of
// pointer form, Tr_other[rho (1 (x) M)] is diagonal in the pointer basis
// for every M, and a random Hermitian M generically breaks the marginal's
// degeneracy, recovering that basis in one diagonalization.
Matrix probe_basis(const DensityMatrix& rho, Side side, std::uint64_t seed) {
  const Dims& dims = rho.dims();
  const int sys = side == Side::A ? 0 : 1;
  const int other = 1 - sys;
  const Matrix m = random_hermitian(dims[other], seed).mat();
  const Matrix weighted = rho.mat() * embed(m, other, dims);
  Matrix probe = partial_trace_raw(weighted, dims, {sys});
  probe = 0.5 * (probe + Matrix(probe.adjoint()));
  return align_to_identity(hermitian_eig(probe)).vectors;
}

PointerSearch find_pointer_basis(const DensityMatrix& rho, Side side, int draws, std::uint64_t seed) {
  const MarginalBasis mb = marginal_eigenbasis(rho, side);
  PointerSearch out;
  out.unique = !mb.degenerate;
  const double base = block_offdiag(rho, mb.vectors, side);
  if (base <= tol().hold) {
    out.verdict = FormVerdict::Yes;
    out.basis = mb.vectors;
    return out;
  }
  if (!mb.degenerate) {
    out.verdict = base >= tol().fail ? FormVerdict::No : FormVerdict::Unknown;
    return out;
  }
  Rng rng(seed);
  for (int k = 0; k < draws; ++k) {
    const Matrix v = k % 2 == 0 ? probe_basis(rho, side, rng.next_u64())
                                : rotate_degenerate_subspaces(mb.vectors, mb.values, rng);
    if (block_offdiag(rho, v, side) <= tol().hold) {
      out.verdict = FormVerdict::Yes;
      out.basis = v;
      return out;
    }
  }
  return out;  // Unknown: degeneracy leaves the basis choice open
}

}  // namespace

ClassicalCheck is_classical(const DensityMatrix& rho, int basis_draws, std::uint64_t seed) {
  if (rho.subsystems() != 2) throw std::invalid_argument("is_classical: bipartite state required");

  // Pure states: classical iff product (Schmidt rank one).
  if (rho.purity() >= 1.0 - 1e-10) {
    const Ket psi = purify(rho);  // rank-1 purification recovers the vector
    const bool product = schmidt_rank(psi) == 1;
    return ClassicalCheck{product, product, product, true};
  }

  const PointerSearch pa = find_pointer_basis(rho, Side::A, basis_draws, seed);
  const PointerSearch pb = find_pointer_basis(rho, Side::B, basis_draws, seed + 1);

  FormVerdict cc = FormVerdict::Unknown;
  if (pa.verdict == FormVerdict::Yes) {
    const std::vector<Matrix> blocks = conditional_blocks(rho, pa.basis, Side::A);
    double comm = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        comm = std::max(comm, max_abs(blocks[i] * blocks[j] - blocks[j] * blocks[i]));
      }
    }
    if (comm <= tol().hold) {
      cc = FormVerdict::Yes;
    } else if (comm >= tol().fail && pa.unique) {
      cc = FormVerdict::No;  // the pointer basis was forced, so the blocks are too
    }
  } else if (pa.verdict == FormVerdict::No) {
    cc = FormVerdict::No;  // CC requires the CQ form
  }

  const bool conclusive = pa.verdict != FormVerdict::Unknown && pb.verdict != FormVerdict::Unknown &&
                          cc != FormVerdict::Unknown;
  return ClassicalCheck{cc == FormVerdict::Yes, pa.verdict == FormVerdict::Yes,
                        pb.verdict == FormVerdict::Yes, conclusive};
}

//---------------------------------------------------------------------------
// Combined report
//---------------------------------------------------------------------------

ClassificationReport classify(const DensityMatrix& rho, const SearchOptions& opts) {
  ClassificationReport report;
  const SearchResult wa = find_wa_pair(rho, opts);
  const SearchResult sa = find_sa_pair(rho, opts);
  report.ppt = is_entangled_ppt(rho);
  report.classical = is_classical(rho);

  report.wa.found = wa.witness.has_value();
  report.wa.witness = wa.witness;
  if (wa.witness) {
    report.wa.reason = VerdictReason::WitnessFound;
  } else if (report.classical.conclusive &&
             (report.classical.cc || report.classical.cq || report.classical.qc)) {
    report.wa.reason = VerdictReason::ClassicalExcluded;  // discord is necessary
  } else {
    report.wa.reason = VerdictReason::SearchExhausted;
    report.wa.degenerate_caveat = wa.degenerate_marginal;
  }

  report.sa.found = sa.witness.has_value();
  report.sa.witness = sa.witness;
  if (sa.witness) {
    report.sa.reason = VerdictReason::WitnessFound;
  } else if (!report.ppt.npt && report.ppt.conclusive) {
    report.sa.reason = VerdictReason::SeparableExcluded;  // entanglement is necessary
  } else {
    report.sa.reason = VerdictReason::SearchExhausted;
    report.sa.degenerate_caveat = sa.degenerate_marginal;
  }

  report.aligned_discord = report.wa.found;
  report.aligned_entanglement = report.sa.found;

  if (report.wa.degenerate_caveat || report.sa.degenerate_caveat) {
    report.notes.push_back("degenerate marginal: a negative search result is not a proof of absence");
  }
  if (!report.classical.conclusive) {
    report.notes.push_back("classical-form check inconclusive (degenerate marginal)");
  }
  return report;
}

//---------------------------------------------------------------------------
// Multipartite strong anonymity
//---------------------------------------------------------------------------

MultiSaCheck multipartite_sa_check(const DensityMatrix& rho, const std::vector<HermitianOperator>& generators) {
  const int n = rho.subsystems();
  if (n < 2) throw std::invalid_argument("multipartite_sa_check: need at least two parties");
  if (static_cast<int>(generators.size()) != n) {
    throw std::invalid_argument("multipartite_sa_check: one generator per party required");
  }
  std::vector<Matrix> embedded;
  for (int s = 0; s < n; ++s) embedded.push_back(embed(generators[s].mat(), s, rho.dims()));

  const double denom = rho.mat().squaredNorm();
  double residual = 0.0;
  for (int alpha = 0; alpha < n; ++alpha) {
    for (int beta = alpha + 1; beta < n; ++beta) {
      const Matrix x = embedded[alpha] * rho.mat() - embedded[beta] * rho.mat();
      const double c = (rho.mat().conjugate().cwiseProduct(x)).sum().real() / denom;
      residual = std::max(residual, max_abs(x - c * rho.mat()));
    }
  }
  const double encoding = max_abs(embedded[0] * rho.mat() - rho.mat() * embedded[0]);
  return MultiSaCheck{residual <= tol().hold && encoding >= tol().fail, residual, encoding};
}

int schmidt_rank(const Ket& psi) {
  if (psi.dims().size() < 2) throw std::invalid_argument("schmidt_rank: need at least two subsystems");
  const int da = psi.dims()[0];
  const int db = psi.dim() / da;
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi.amps().data(), da, db);
  Eigen::JacobiSVD<Matrix> svd(m);
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) * svd.singularValues()(k) > tol().psd) ++rank;
  }
  return rank;
}

}  // namespace anonmet
