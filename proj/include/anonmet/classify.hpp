#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anonmet/qmat.hpp"

// WA/SA decision procedures, witness-Hamiltonian searches, and the
// correlation hierarchy (classical / discordant / entangled / aligned
// discordant / aligned entangled).

namespace anonmet {

//---------------------------------------------------------------------------
// Condition checks for a given Hamiltonian pair
//---------------------------------------------------------------------------

// Verdicts use a hysteresis band: residual <= tol().hold counts as holding,
// >= tol().fail as failing, in between sets `inconclusive`.
struct WaCheck {
  bool holds;
  bool inconclusive;
  double anonymity_residual;  // |[H_A - G_B, rho]|_max
  double encoding_residual;   // |[H_A, rho]|_max
};

WaCheck is_wa(const DensityMatrix& rho, const HamiltonianPair& pair);

struct SaCheck {
  bool holds;
  bool inconclusive;
  double residual;            // |((H_A - c) (x) 1) rho - (1 (x) G_B) rho|_max, best real c
  double encoding_residual;   // |[H_A, rho]|_max
  double generator_shift;     // the absorbed spectrum shift c
};

// Strong anonymity through the algebraic form (H_A (x) 1) rho = (1 (x) G_B) rho,
// with the global-phase freedom realized as a real shift of H_A's spectrum.
SaCheck is_sa(const DensityMatrix& rho, const HamiltonianPair& pair);

//---------------------------------------------------------------------------
// Witness searches
//---------------------------------------------------------------------------

// Marginal eigenbasis with deterministic presentation: identity-aligned
// column order (greedy maximal overlap with the computational basis) and
// phases fixed so each column's largest-magnitude entry is real positive.
// Exactly diagonal marginals keep the computational basis unchanged.
struct MarginalBasis {
  Matrix vectors;
  RealVector values;  // matching vectors' column order
  bool degenerate;    // some eigenvalue pair closer than 1e-8
};

MarginalBasis marginal_eigenbasis(const DensityMatrix& rho, Side side);

// rho expressed in the product of its marginal eigenbases.
Matrix local_eigenbasis_matrix(const DensityMatrix& rho);

struct SearchOptions {
  int spectrum_bound = 3;       // integer spectra in [0, bound]^d, min entry 0
  int random_basis_draws = 0;   // extra basis draws inside degenerate eigenspaces
  std::uint64_t seed = 1;
};

struct SearchResult {
  std::optional<HamiltonianPair> witness;
  bool degenerate_marginal = false;  // a "none" result is then inconclusive
  long pairs_tried = 0;
};

// Brute-force witness searches over marginal eigenbases x integer spectra.
// A found witness is conclusive; "none" is conclusive only up to the search
// space (and flagged when a degenerate marginal blurs the eigenbasis).
SearchResult find_wa_pair(const DensityMatrix& rho, const SearchOptions& opts = {});
SearchResult find_sa_pair(const DensityMatrix& rho, const SearchOptions& opts = {});

//---------------------------------------------------------------------------
// Correlation checks
//---------------------------------------------------------------------------

struct PptCheck {
  bool npt;                   // negative partial transpose => entangled
  double min_pt_eigenvalue;
  bool conclusive;            // NPT always is; PPT only decides 2x2 and 2x3
};

PptCheck is_entangled_ppt(const DensityMatrix& rho);

struct ClassicalCheck {
  bool cc, cq, qc;
  bool conclusive;  // false when degenerate marginals block a definite "no"
};

// CC/CQ/QC form detection in the marginal eigenbases, with a purity
// shortcut for pure states and a sampled basis search inside degenerate
// eigenspaces.
ClassicalCheck is_classical(const DensityMatrix& rho, int basis_draws = 200, std::uint64_t seed = 11);

//---------------------------------------------------------------------------
// Combined report
//---------------------------------------------------------------------------

enum class VerdictReason { WitnessFound, ClassicalExcluded, SeparableExcluded, SearchExhausted };

struct SearchVerdict {
  bool found = false;
  std::optional<HamiltonianPair> witness;
  VerdictReason reason = VerdictReason::SearchExhausted;
  bool degenerate_caveat = false;
};

struct ClassificationReport {
  SearchVerdict wa;
  SearchVerdict sa;
  PptCheck ppt{};
  ClassicalCheck classical{};
  bool aligned_discord = false;       // == wa.found
  bool aligned_entanglement = false;  // == sa.found
  std::vector<std::string> notes;
};

ClassificationReport classify(const DensityMatrix& rho, const SearchOptions& opts = {});

//---------------------------------------------------------------------------
// Multipartite strong anonymity and small helpers
//---------------------------------------------------------------------------

struct MultiSaCheck {
  bool holds;
  double residual;
  double encoding_residual;
};

// Pairwise (H_a (x) 1) rho = (H_b (x) 1) rho across all party pairs, each
// with its own absorbable spectrum shift.
MultiSaCheck multipartite_sa_check(const DensityMatrix& rho, const std::vector<HermitianOperator>& generators);

int schmidt_rank(const Ket& psi);

}  // namespace anonmet
