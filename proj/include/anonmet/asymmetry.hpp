#pragma once

#include <utility>
#include <vector>

#include "anonmet/qmat.hpp"

// Modes-of-asymmetry decomposition and the twirling superoperators (local
// twirl, split twirl, joint G-twirl). The infinite-time phase averages are
// evaluated exactly as eigenvalue-difference masks in the generator
// eigenbasis: for finite spectra the average projects onto matching Bohr
// frequencies, so no numerical integration is involved.
//
// Frequency convention: a mode of frequency omega picks up the phase
// e^{i omega theta} under conjugation by U(theta) = e^{-i theta H}, i.e.
// omega = E_col - E_row in the generator eigenbasis. The split twirl
// W_theta(X) = U(theta) X V(theta)^dag likewise satisfies
// W_theta(P^omega rho) = e^{i omega theta} P^omega rho with
// omega = G_col - E_row.

namespace anonmet {

struct ModeDecomposition {
  RealVector generator_spectrum;
  // (frequency, mode component) sorted by frequency; components sum to rho.
  std::vector<std::pair<double, Matrix>> modes;
};

// Distinct eigenvalue differences of a spectrum, grouped within tol().freq.
std::vector<double> bohr_frequencies(const RealVector& eigenvalues);

// Component of rho at mode frequency omega of generator h acting on the
// given subsystem. Frequencies with no matching eigenvalue pair give zero.
Matrix mode_project(const DensityMatrix& rho, const HermitianOperator& h, Side side, double omega);
Matrix mode_project_at(const Matrix& rho, const Dims& dims, const HermitianOperator& h, int sys, double omega);

ModeDecomposition mode_decompose(const DensityMatrix& rho, const HermitianOperator& h, Side side);

struct WaModeCheck {
  bool holds;                 // mode equality and a nonzero encoding mode
  double residual;            // max over omega of |P_A^w rho - P_B^w rho|
  bool has_nonzero_mode;      // some omega != 0 with P_A^w rho != 0
  double max_nonzero_mode;    // largest entry of any omega != 0 mode
};

// Mode-equality form of the weak anonymity condition, checked exactly in
// the joint generator eigenbasis.
WaModeCheck check_wa_modes(const DensityMatrix& rho, const HamiltonianPair& pair);

// Split twirl component at frequency omega (see convention above).
Matrix split_twirl(const DensityMatrix& rho, const HamiltonianPair& pair, double omega);

// Joint G-twirl: average of U_A(theta) (.) U_A(theta)^dag composed with the
// inverse conjugation on B; fixed points are exactly the states whose A and
// B Bohr frequencies agree entrywise.
Matrix g_twirl(const DensityMatrix& rho, const HamiltonianPair& pair);

struct SaTwirlCheck {
  bool holds;             // split-mode equality (up to shift) and encoding
  double residual;        // best mismatch over candidate frequency shifts
  double encoding_norm;   // largest omega != 0 mode entry on side A
  double frequency_shift; // shift realizing the residual
};

// Strong anonymity via split twirling: P_AB^(w+c) rho = P_B^w rho for all w
// and a single absorbable frequency shift c (the global-phase freedom).
SaTwirlCheck check_sa_split_twirl(const DensityMatrix& rho, const HamiltonianPair& pair);

struct MultiWaCheck {
  bool holds;
  double residual;
  bool has_nonzero_mode;
};

// Pairwise mode equality across all parties plus a nonzero encoding mode.
MultiWaCheck multipartite_wa_check(const DensityMatrix& rho, const std::vector<HermitianOperator>& generators);

}  // namespace anonmet
