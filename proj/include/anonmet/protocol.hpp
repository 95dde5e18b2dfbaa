#pragma once

#include <cstdint>
#include <vector>

#include "anonmet/metrology.hpp"
#include "anonmet/qmat.hpp"

// End-to-end simulation of the three-party task: one of A/B encodes theta
// into the shared state, both halves go to Charlie, who estimates theta and
// tries to guess the encoder. Also the purification attack and the
// delocalised (path-superposed) measurement experiment.

namespace anonmet {

enum class Encoder { A, B };

struct ProtocolTranscript {
  Encoder encoder;
  double theta_true;
  int n_copies;
  std::uint64_t seed;

  double theta_estimate;        // grid maximum likelihood, in [0, 2pi)
  double estimate_stderr;       // observed-information curvature; +inf when flat
  bool flat_likelihood;         // no theta dependence in the outcome law
  Encoder charlie_guess;        // higher profile likelihood
  double charlie_guess_prob_bound;  // optimal multi-copy guessing bound
  double helstrom_optimal_prob;     // single-copy optimal guess (1 + T)/2
};

// Symmetric informationally complete POVM (d^2 rank-one elements), d = 2, 3.
std::vector<Matrix> sic_povm(int d);

// Simulate the protocol: encode, measure every copy with a product SIC
// POVM, estimate theta by grid maximum likelihood, guess the encoder by a
// likelihood-ratio test. Copies are sampled with a counter-based generator,
// so a (seed, inputs) pair fixes the transcript bit for bit.
ProtocolTranscript run_protocol(const DensityMatrix& rho, const HamiltonianPair& pair, Encoder encoder,
                                double theta_true, int n_copies, std::uint64_t seed,
                                int estimator_grid = 1024);

struct AttackResult {
  bool applicable;   // false when the pair does not encode on this state
  double leak;       // T(U_A |psi>, V_B |psi>) at the requested theta
  double max_leak;   // max over the theta grid
  bool sa_safe;      // max_leak within tolerance: purification reveals nothing
};

// Charlie holds a purification of rho and compares the two encodings.
AttackResult purification_attack(const DensityMatrix& rho, const HamiltonianPair& pair, double theta,
                                 const ThetaGrid& grid = {});

struct PathInterference {
  double coherence_in;
  double coherence_out;
  bool factorized;  // path coherence preserved: the probe factors out
};

// Probe a path-superposed system: W = |L><L| (x) U_A (x) 1 + |R><R| (x) 1 (x) V_B
// applied to (a|L> + b|R>)(...) (x) rho; reports the path qubit's coherence
// before and after.
PathInterference delocalised_measurement(const DensityMatrix& rho, const HamiltonianPair& pair, Complex a,
                                         Complex b, double theta);

struct GuessProbability {
  double value;
  bool exact;  // exact n-copy Helstrom value vs. the multi-copy upper bound
};

// Optimal probability of discriminating n copies of two equiprobable
// states; exact when the n-copy dimension stays within 4096.
GuessProbability helstrom_guess_probability(const DensityMatrix& rho1, const DensityMatrix& rho2, int n);

}  // namespace anonmet
