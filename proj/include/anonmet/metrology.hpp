#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "anonmet/qmat.hpp"

// Quantum Fisher information, the anonymity-constrained copy budget n_delta,
// the figure of merit M(rho; H, G), and the robustness bounds. Infinite
// values (perfect anonymity) are carried as the IEEE infinity and rendered
// as a distinct "inf" token by the serializers, never as an overflow.

namespace anonmet {

// SLD quantum Fisher information of the unitary family generated by h on
// the given side: 2 sum_{i,j} (l_i - l_j)^2 / (l_i + l_j) |<i|H|j>|^2 with
// eigenvalue pairs of combined weight below 1e-12 excluded.
double qfi(const DensityMatrix& rho, const HermitianOperator& h, Side side);

struct ThetaGrid {
  int points = 256;        // uniform samples of [0, 2pi)
  int refine_factor = 4;   // extra resolution around the coarse argmin
};

struct MinFidelity {
  double value;
  double argmin;
};

// min over theta of F(U_A(t) rho U_A(t)^dag, V_B(t) rho V_B(t)^dag).
MinFidelity min_fidelity_over_theta(const DensityMatrix& rho, const HamiltonianPair& pair,
                                    const ThetaGrid& grid = {});

// Copy budget keeping the adversary's guessing advantage below delta:
// log(1 - (2 delta)^2) / (2 log min_theta F). +inf for perfect anonymity.
double n_delta(const DensityMatrix& rho, const HamiltonianPair& pair, double delta,
               const ThetaGrid& grid = {});

struct MeritReport {
  double qfi_a = 0;
  double qfi_b = 0;
  double avg_qfi = 0;
  double min_fidelity = 1;
  double argmin_theta = 0;
  double copy_budget = 0;  // n_delta at the report's delta
  double delta = 0;
  double merit = 0;        // avg_qfi / (-log min_fidelity); 0 without encoding; +inf if exactly anonymous
};

MeritReport figure_of_merit(const DensityMatrix& rho, const HamiltonianPair& pair, double delta = 0.1,
                            const ThetaGrid& grid = {});

enum class MeritDirection { Maximize, Minimize };

struct MeritOptimizerOptions {
  MeritDirection direction = MeritDirection::Maximize;
  int restarts = 20;
  int steps = 200;  // coordinate steps per restart
  std::uint64_t seed = 17;
  double delta = 0.1;
  ThetaGrid grid{64, 4};
};

struct StateMerit {
  double value;
  MeritDirection direction;
  std::vector<Matrix> best_pair;  // {H_A, G_B}, unit operator norm
};

// Optimizes M(rho; H, G) over unit-operator-norm Hermitian pairs by
// random-restart coordinate search. Deterministic for a fixed seed.
StateMerit state_merit(const DensityMatrix& rho, const MeritOptimizerOptions& opts = {});

struct RobustnessReport {
  double epsilon;
  double wa_guess_bound;  // 1/2 + eps (capped at 1)
  double sa_guess_bound;  // 1/2 + sqrt(eps - eps^2)
  std::vector<std::pair<int, double>> multicopy_bounds;  // (n, trace-distance bound)
};

// Evaluates the closeness-to-ideal robustness bounds for a verified trace
// distance epsilon and the requested copy counts.
RobustnessReport robustness_bounds(double epsilon, const std::vector<int>& copies);

}  // namespace anonmet
