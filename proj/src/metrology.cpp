#include "anonmet/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anonmet/classify.hpp"
#include "anonmet/rng.hpp"

namespace anonmet {

namespace {

const double kTwoPi = 6.283185307179586476925286766559;
const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double qfi(const DensityMatrix& rho, const HermitianOperator& h, Side side) {
  const Matrix hfull = embed(h, side, rho.dims());
  const EigenSystem es = hermitian_eig(rho.mat());
  const Matrix hh = es.vectors.adjoint() * hfull * es.vectors;
  const int d = rho.dim();
  double out = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double li = es.values(i), lj = es.values(j);
      if (li + lj <= 1e-12) continue;
      const double diff = li - lj;
      out += 2.0 * diff * diff / (li + lj) * std::norm(hh(i, j));
    }
  }
  return out;
}

MinFidelity min_fidelity_over_theta(const DensityMatrix& rho, const HamiltonianPair& pair,
                                    const ThetaGrid& grid) {
  if (grid.points < 1) throw std::invalid_argument("min_fidelity_over_theta: empty grid");
  const EigenSystem ea = hermitian_eig(pair.h_a.mat());
  const EigenSystem eb = hermitian_eig(pair.g_b.mat());
  const Dims& dims = rho.dims();

  const auto evolve_pairwise = [&](double theta) {
    Vector pa(ea.values.size()), pb(eb.values.size());
    for (Eigen::Index k = 0; k < ea.values.size(); ++k) pa(k) = std::exp(Complex(0, -theta * ea.values(k)));
    for (Eigen::Index k = 0; k < eb.values.size(); ++k) pb(k) = std::exp(Complex(0, -theta * eb.values(k)));
    const Matrix ua = ea.vectors * pa.asDiagonal() * ea.vectors.adjoint();
    const Matrix vb = eb.vectors * pb.asDiagonal() * eb.vectors.adjoint();
    return fidelity(rho.evolved(embed(ua, 0, dims)), rho.evolved(embed(vb, 1, dims)));
  };

  double best = kInf, best_theta = 0.0;
  const double step = kTwoPi / grid.points;
  for (int k = 0; k < grid.points; ++k) {
    const double theta = k * step;
    const double f = evolve_pairwise(theta);
    if (f < best) {
      best = f;
      best_theta = theta;
    }
  }
  // Refine around the coarse argmin.
  const double fine = step / std::max(grid.refine_factor, 1);
  for (double theta = best_theta - step; theta <= best_theta + step + 1e-15; theta += fine) {
    double t = std::fmod(theta + kTwoPi, kTwoPi);
    const double f = evolve_pairwise(t);
    if (f < best) {
      best = f;
      best_theta = t;
    }
  }
  return MinFidelity{std::min(best, 1.0), best_theta};
}

namespace {

// Fidelities within 1e-12 of one are treated as exact anonymity so that
// solver noise cannot turn a perfect +inf into a large finite number.
bool effectively_one(double f) { return f >= 1.0 - 1e-12; }

}  // namespace

double n_delta(const DensityMatrix& rho, const HamiltonianPair& pair, double delta, const ThetaGrid& grid) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("n_delta: delta must be in (0, 1/2)");
  const double f = min_fidelity_over_theta(rho, pair, grid).value;
  if (effectively_one(f)) return kInf;
  if (f <= 0.0) return 0.0;
  return std::log(1.0 - 4.0 * delta * delta) / (2.0 * std::log(f));
}

MeritReport figure_of_merit(const DensityMatrix& rho, const HamiltonianPair& pair, double delta,
                            const ThetaGrid& grid) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("figure_of_merit: delta must be in (0, 1/2)");
  MeritReport r;
  r.qfi_a = qfi(rho, pair.h_a, Side::A);
  r.qfi_b = qfi(rho, pair.g_b, Side::B);
  r.avg_qfi = 0.5 * (r.qfi_a + r.qfi_b);
  const MinFidelity mf = min_fidelity_over_theta(rho, pair, grid);
  r.min_fidelity = mf.value;
  r.argmin_theta = mf.argmin;
  r.delta = delta;

  if (effectively_one(mf.value)) {
    r.copy_budget = kInf;
  } else if (mf.value <= 0.0) {
    r.copy_budget = 0.0;
  } else {
    r.copy_budget = std::log(1.0 - 4.0 * delta * delta) / (2.0 * std::log(mf.value));
  }

  if (r.avg_qfi <= 1e-12) {
    r.merit = 0.0;  // no encoding, no information transferred
  } else if (effectively_one(mf.value)) {
    r.merit = kInf;
  } else if (mf.value <= 0.0) {
    r.merit = 0.0;
  } else {
    r.merit = r.avg_qfi / (-std::log(mf.value));
  }
  return r;
}

//---------------------------------------------------------------------------
// State-level merit optimizer
//---------------------------------------------------------------------------

namespace {

// Real parameterization of a Hermitian matrix: diagonal then (re, im) of
// the upper triangle.
int hermitian_params(int d) { return d * d; }

Matrix hermitian_from_params(const std::vector<double>& p, int offset, int d) {
  Matrix m = Matrix::Zero(d, d);
  int k = offset;
  for (int i = 0; i < d; ++i) m(i, i) = p[k++];
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      m(i, j) = Complex(p[k], p[k + 1]);
      m(j, i) = std::conj(m(i, j));
      k += 2;
    }
  }
  return m;
}

void hermitian_to_params(const Matrix& m, std::vector<double>* p, int offset) {
  const int d = static_cast<int>(m.rows());
  int k = offset;
  for (int i = 0; i < d; ++i) (*p)[k++] = m(i, i).real();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      (*p)[k] = m(i, j).real();
      (*p)[k + 1] = m(i, j).imag();
      k += 2;
    }
  }
}

// Scale to unit operator norm; returns false for a numerically zero matrix.
bool normalize_operator_norm(Matrix* m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(*m, Eigen::EigenvaluesOnly);
  const double n = es.eigenvalues().cwiseAbs().maxCoeff();
  if (n < 1e-12) return false;
  *m /= n;
  return true;
}

}  // namespace

StateMerit state_merit(const DensityMatrix& rho, const MeritOptimizerOptions& opts) {
  if (rho.subsystems() != 2) throw std::invalid_argument("state_merit: bipartite state required");
  const int da = rho.dims()[0], db = rho.dims()[1];
  const int na = hermitian_params(da), nb = hermitian_params(db);
  const bool maximize = opts.direction == MeritDirection::Maximize;

  const auto evaluate = [&](const std::vector<double>& p) -> std::pair<double, bool> {
    Matrix h = hermitian_from_params(p, 0, da);
    Matrix g = hermitian_from_params(p, na, db);
    if (!normalize_operator_norm(&h) || !normalize_operator_norm(&g)) return {maximize ? -kInf : kInf, false};
    const HamiltonianPair pair{HermitianOperator(0.5 * (h + Matrix(h.adjoint()))),
                               HermitianOperator(0.5 * (g + Matrix(g.adjoint())))};
    return {figure_of_merit(rho, pair, opts.delta, opts.grid).merit, true};
  };
  const auto better = [&](double x, double y) { return maximize ? x > y : x < y; };

  Rng rng(opts.seed);
  double best = maximize ? -kInf : kInf;
  std::vector<double> best_params(na + nb, 0.0);
  bool have_best = false;

  // Warm start from the witness search: a state with an exact anonymity
  // pair then scores it directly instead of only approaching it by random
  // steps.
  std::vector<std::vector<double>> starts;
  if (const SearchResult wa = find_wa_pair(rho); wa.witness) {
    std::vector<double> p(na + nb, 0.0);
    hermitian_to_params(wa.witness->h_a.mat(), &p, 0);
    hermitian_to_params(wa.witness->g_b.mat(), &p, na);
    starts.push_back(std::move(p));
  }
  for (int restart = static_cast<int>(starts.size()); restart < opts.restarts; ++restart) {
    std::vector<double> p(na + nb);
    for (double& x : p) x = rng.gaussian();
    starts.push_back(std::move(p));
  }

  for (std::vector<double>& p : starts) {
    auto [current, ok] = evaluate(p);
    if (!ok) continue;
    double scale = 0.3;
    for (int step = 0; step < opts.steps; ++step) {
      const int k = step % (na + nb);
      const double delta = scale * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      std::vector<double> q = p;
      q[k] += delta;
      auto [cand, qok] = evaluate(q);
      if (qok && better(cand, current)) {
        p = std::move(q);
        current = cand;
      }
      scale *= 0.985;
    }
    if (!have_best || better(current, best)) {
      best = current;
      best_params = p;
      have_best = true;
    }
    if (maximize && std::isinf(best) && best > 0) break;  // nothing can beat exact anonymity
  }

  StateMerit out{best, opts.direction, {}};
  Matrix h = hermitian_from_params(best_params, 0, da);
  Matrix g = hermitian_from_params(best_params, na, db);
  normalize_operator_norm(&h);
  normalize_operator_norm(&g);
  out.best_pair = {h, g};
  return out;
}

//---------------------------------------------------------------------------
// Robustness bounds
//---------------------------------------------------------------------------

RobustnessReport robustness_bounds(double epsilon, const std::vector<int>& copies) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("robustness_bounds: epsilon must be in [0,1]");
  RobustnessReport r;
  r.epsilon = epsilon;
  r.wa_guess_bound = std::min(1.0, 0.5 + epsilon);
  r.sa_guess_bound = 0.5 + std::sqrt(std::max(0.0, epsilon - epsilon * epsilon));
  const double t1 = std::min(1.0, 2.0 * epsilon);
  for (int n : copies) {
    if (n < 1) throw std::invalid_argument("robustness_bounds: copy counts must be >= 1");
    const double bound = std::sqrt(std::max(0.0, 1.0 - std::pow(1.0 - t1, 2.0 * n)));
    r.multicopy_bounds.emplace_back(n, std::min(1.0, bound));
  }
  return r;
}

}  // namespace anonmet
