#include "anonmet/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anonmet/rng.hpp"

namespace anonmet {

namespace {

const double kTwoPi = 6.283185307179586476925286766559;
const double kInf = std::numeric_limits<double>::infinity();

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace

std::vector<Matrix> sic_povm(int d) {
  std::vector<Matrix> povm;
  if (d == 2) {
    // Tetrahedral POVM: (1 + s.sigma)/4 over the four tetrahedron directions.
    const double s = 1.0 / std::sqrt(3.0);
    const double dirs[4][3] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    for (const auto& v : dirs) {
      Matrix e(2, 2);
      e(0, 0) = Complex(1.0 + v[2], 0.0);
      e(0, 1) = Complex(v[0], -v[1]);
      e(1, 0) = Complex(v[0], v[1]);
      e(1, 1) = Complex(1.0 - v[2], 0.0);
      povm.push_back(0.25 * e);
    }
    return povm;
  }
  if (d == 3) {
    // Weyl-Heisenberg orbit of the fiducial (0, 1, -1)/sqrt(2).
    Vector fid(3);
    fid << Complex(0, 0), Complex(1.0 / std::sqrt(2.0), 0), Complex(-1.0 / std::sqrt(2.0), 0);
    const Complex w = std::exp(Complex(0, kTwoPi / 3.0));
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        Vector v(3);
        for (int j = 0; j < 3; ++j) v((j + a) % 3) = std::pow(w, b * j) * fid(j);
        povm.push_back((1.0 / 3.0) * (v * v.adjoint()));
      }
    }
    return povm;
  }
  throw std::invalid_argument("sic_povm: only dimensions 2 and 3 are provided");
}

namespace {

// Product POVM over all subsystems (row-major outcome index, subsystem 0
// most significant, matching the composite-basis convention).
std::vector<Matrix> product_povm(const Dims& dims) {
  std::vector<Matrix> joint{Matrix::Identity(1, 1)};
  for (int d : dims) {
    const std::vector<Matrix> local = sic_povm(d);
    std::vector<Matrix> next;
    next.reserve(joint.size() * local.size());
    for (const Matrix& j : joint) {
      for (const Matrix& l : local) next.push_back(tensor(j, l));
    }
    joint = std::move(next);
  }
  return joint;
}

std::vector<double> outcome_probabilities(const Matrix& rho, const std::vector<Matrix>& povm) {
  std::vector<double> p(povm.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < povm.size(); ++k) {
    p[k] = std::max(0.0, (rho * povm[k]).trace().real());
    sum += p[k];
  }
  for (double& x : p) x /= sum;
  return p;
}

int sample_outcome(const std::vector<double>& p, double u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(p.size()) - 1;
}

}  // namespace

ProtocolTranscript run_protocol(const DensityMatrix& rho, const HamiltonianPair& pair, Encoder encoder,
                                double theta_true, int n_copies, std::uint64_t seed, int estimator_grid) {
  if (rho.subsystems() != 2) throw std::invalid_argument("run_protocol: bipartite state required");
  if (theta_true < 0.0 || theta_true >= kTwoPi) {
    throw std::invalid_argument("run_protocol: theta must lie in [0, 2pi)");
  }
  if (n_copies < 1) throw std::invalid_argument("run_protocol: need at least one copy");
  if (estimator_grid < 8) throw std::invalid_argument("run_protocol: estimator grid too small");

  const Dims& dims = rho.dims();
  const std::vector<Matrix> povm = product_povm(dims);

  const auto encoded = [&](Encoder who, double theta) {
    const Matrix u = who == Encoder::A ? embed(unitary_of(pair.h_a, theta), 0, dims)
                                       : embed(unitary_of(pair.g_b, theta), 1, dims);
    return rho.evolved(u);
  };

  // Sample the outcome record from the true encoding.
  const std::vector<double> p_true = outcome_probabilities(encoded(encoder, theta_true).mat(), povm);
  std::vector<int> outcomes(n_copies);
  for (int c = 0; c < n_copies; ++c) {
    Rng copy_rng(Rng::key(seed, static_cast<std::uint64_t>(c)));
    outcomes[c] = sample_outcome(p_true, copy_rng.uniform());
  }
  std::vector<int> counts(povm.size(), 0);
  for (int k : outcomes) ++counts[k];

  // Profile likelihood over the theta grid for both encoder hypotheses.
  const auto log_likelihood = [&](Encoder who, std::vector<double>* curve) {
    curve->resize(estimator_grid);
    for (int g = 0; g < estimator_grid; ++g) {
      const double theta = kTwoPi * g / estimator_grid;
      const std::vector<double> p = outcome_probabilities(encoded(who, theta).mat(), povm);
      double ll = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (counts[k] > 0) ll += counts[k] * std::log(std::max(p[k], 1e-300));
      }
      (*curve)[g] = ll;
    }
  };

  std::vector<double> ll_a, ll_b;
  log_likelihood(Encoder::A, &ll_a);
  log_likelihood(Encoder::B, &ll_b);

  const auto argmax = [](const std::vector<double>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  };
  const int ga = argmax(ll_a), gb = argmax(ll_b);
  const Encoder guess = ll_a[ga] >= ll_b[gb] ? Encoder::A : Encoder::B;
  const std::vector<double>& ll = guess == Encoder::A ? ll_a : ll_b;
  const int gm = guess == Encoder::A ? ga : gb;

  ProtocolTranscript t{};
  t.encoder = encoder;
  t.theta_true = theta_true;
  t.n_copies = n_copies;
  t.seed = seed;
  t.charlie_guess = guess;
  t.theta_estimate = kTwoPi * gm / estimator_grid;
  t.flat_likelihood =
      *std::max_element(ll.begin(), ll.end()) - *std::min_element(ll.begin(), ll.end()) < 1e-9;

  if (t.flat_likelihood) {
    t.estimate_stderr = kInf;
  } else {
    const double h = kTwoPi / estimator_grid;
    const double prev = ll[(gm + estimator_grid - 1) % estimator_grid];
    const double next = ll[(gm + 1) % estimator_grid];
    const double curvature = -(next - 2.0 * ll[gm] + prev) / (h * h);
    t.estimate_stderr = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : kInf;
  }

  const DensityMatrix rho_a = encoded(Encoder::A, theta_true);
  const DensityMatrix rho_b = encoded(Encoder::B, theta_true);
  t.helstrom_optimal_prob = 0.5 * (1.0 + trace_distance(rho_a, rho_b));
  t.charlie_guess_prob_bound = helstrom_guess_probability(rho_a, rho_b, n_copies).value;
  return t;
}

AttackResult purification_attack(const DensityMatrix& rho, const HamiltonianPair& pair, double theta,
                                 const ThetaGrid& grid) {
  if (rho.subsystems() != 2) throw std::invalid_argument("purification_attack: bipartite state required");
  AttackResult out{};
  const Matrix ha = embed(pair.h_a, Side::A, rho.dims());
  out.applicable = max_abs(commutator(ha, rho.mat())) >= tol().fail;

  const Ket psi = purify(rho);
  const Dims& kd = psi.dims();
  const auto leak_at = [&](double th) {
    const Matrix ua = embed(unitary_of(pair.h_a, th), 0, kd);
    const Matrix vb = embed(unitary_of(pair.g_b, th), 1, kd);
    const Vector left = ua * psi.amps();
    const Vector right = vb * psi.amps();
    const Complex overlap = left.dot(right);
    // T = sqrt((1-|o|)(1+|o|)) computed from the phase-aligned difference:
    // with w = (conj(o)/|o|) right, <left|w> = |o| and |left - w|^2 =
    // 2(1-|o|). This avoids the noise blow-up of sqrt(1-|o|^2) when the
    // states coincide.
    const Complex phase =
        std::abs(overlap) > 0 ? std::conj(overlap) / std::abs(overlap) : Complex(1, 0);
    const double half_gap = 0.5 * (left - phase * right).squaredNorm();  // 1 - |o|
    return std::sqrt(std::max(0.0, half_gap * (2.0 - half_gap)));
  };

  out.leak = leak_at(theta);
  out.max_leak = 0.0;
  for (int k = 0; k < grid.points; ++k) {
    out.max_leak = std::max(out.max_leak, leak_at(kTwoPi * k / grid.points));
  }
  out.sa_safe = out.max_leak <= tol().hold;
  return out;
}

PathInterference delocalised_measurement(const DensityMatrix& rho, const HamiltonianPair& pair, Complex a,
                                         Complex b, double theta) {
  if (rho.subsystems() != 2) throw std::invalid_argument("delocalised_measurement: bipartite state required");
  const double n2 = std::norm(a) + std::norm(b);
  if (std::abs(n2 - 1.0) > tol().norm) {
    throw std::invalid_argument("delocalised_measurement: |a|^2 + |b|^2 must be 1");
  }
  const int da = rho.dims()[0], db = rho.dims()[1];
  const Dims full{2, da, db};

  Matrix path_l = Matrix::Zero(2, 2), path_r = Matrix::Zero(2, 2);
  path_l(0, 0) = 1;
  path_r(1, 1) = 1;
  const Matrix ua = unitary_of(pair.h_a, theta);
  const Matrix vb = unitary_of(pair.g_b, theta);
  const Matrix w = tensor(tensor(path_l, ua), Matrix(Matrix::Identity(db, db))) +
                   tensor(tensor(path_r, Matrix(Matrix::Identity(da, da))), vb);

  Vector path(2);
  path << a, b;
  const Matrix rho_in = tensor(Matrix(path * path.adjoint()), rho.mat());
  const Matrix rho_out = w * rho_in * w.adjoint();
  const Matrix path_out = partial_trace_raw(rho_out, full, {0});

  PathInterference out{};
  out.coherence_in = std::abs(a * std::conj(b));
  out.coherence_out = std::abs(path_out(0, 1));
  out.factorized = std::abs(out.coherence_out - out.coherence_in) <= tol().hold;
  return out;
}

GuessProbability helstrom_guess_probability(const DensityMatrix& rho1, const DensityMatrix& rho2, int n) {
  if (rho1.dims() != rho2.dims()) throw std::invalid_argument("helstrom: dimension mismatch");
  if (n < 1) throw std::invalid_argument("helstrom: need at least one copy");
  const double t1 = trace_distance(rho1, rho2);
  if (n == 1) return GuessProbability{0.5 * (1.0 + t1), true};

  double size = 1.0;
  for (int k = 0; k < n; ++k) size *= rho1.dim();
  if (size <= 4096.0) {
    Matrix p1 = rho1.mat(), p2 = rho2.mat();
    for (int k = 1; k < n; ++k) {
      p1 = tensor(p1, rho1.mat());
      p2 = tensor(p2, rho2.mat());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(p1 - p2, Eigen::EigenvaluesOnly);
    const double tn = 0.5 * es.eigenvalues().cwiseAbs().sum();
    return GuessProbability{0.5 * (1.0 + tn), true};
  }
  const double bound = std::sqrt(std::max(0.0, 1.0 - std::pow(1.0 - t1, 2.0 * n)));
  return GuessProbability{0.5 * (1.0 + std::min(1.0, bound)), false};
}

}  // namespace anonmet
