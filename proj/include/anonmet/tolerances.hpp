#pragma once

namespace anonmet {

// Global numeric tolerances, sized for dense double-precision eigensolvers
// at dimension <= 64. Mutable through tol() so the CLI can override them.
struct Tolerances {
  double herm = 1e-10;   // Hermiticity residual of operators
  double trace = 1e-10;  // |Tr(rho) - 1|
  double norm = 1e-10;   // ket normalization residual
  double psd = 1e-9;     // allowed negative-eigenvalue magnitude
  double eig = 1e-10;    // eigendecomposition reconstruction residual
  double freq = 1e-8;    // Bohr-frequency grouping width

  // Verdict hysteresis: a residual <= hold counts as "condition holds",
  // >= fail counts as "condition fails", anything between is inconclusive.
  double hold = 1e-9;
  double fail = 1e-6;
};

Tolerances& tol();

}  // namespace anonmet
