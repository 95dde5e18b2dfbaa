#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "anonmet/qmat.hpp"

// Constructors for the named states and state families used throughout the
// library, plus seeded random-state generators for property tests.

namespace anonmet {

DensityMatrix bell_psi_plus();
DensityMatrix bell_psi_minus();

// rho_W = a |psi-><psi-| + (1-a)/4 * I, a in [0,1].
DensityMatrix werner(double a);

// Maximally correlated state sum_ij c_ij |ii><jj| on a d x d bipartite
// space; coeffs must itself be a valid d-dimensional density matrix.
DensityMatrix maximally_correlated(const Matrix& coeffs);

// n-party generalization: sum_ij c_ij |ii...i><jj...j|.
DensityMatrix multipartite_correlated(const Matrix& coeffs, int parties);

// Block-correlated state: each level i carries degeneracies[i] sublevels;
// both parties share the block structure and the state is supported on the
// same-block subspace spanned by |i lambda, i lambda'>. coeffs is a valid
// density matrix on that subspace, indexed (i, lambda, lambda') row-major
// with i outermost. degeneracies all 1 reduces to maximally_correlated.
DensityMatrix block_correlated(const Matrix& coeffs, const std::vector<int>& degeneracies);

// Two-qubit mixture m*rho1 + (1-m)*rho2 of an even-parity superposition
// rho1 = (sqrt(a)|00> + sqrt(1-a)|11>) and an odd-parity superposition
// rho2 = (sqrt(b)|01> + sqrt(1-b)|10>); entangled for generic parameters
// yet carries coherence in both parity sectors at once.
DensityMatrix parity_mixture(double a, double b, double m);

// (1/2)(|00><00| + |++><++|): separable but discordant.
DensityMatrix discordant_separable();

// (1/2)(|00><00| + |11><11|): classically correlated pair.
DensityMatrix cc_pair();

// |GHZ_n> = (|0...0> + |1...1>)/sqrt(2) as a density matrix.
DensityMatrix ghz(int parties);

// Classical states. Bases are given as unitary matrices whose columns are
// the pointer basis; conditional states must match the other side's
// dimension.
DensityMatrix classical_cc(const RealMatrix& p, const Matrix& basis_a, const Matrix& basis_b);
DensityMatrix classical_cq(const RealVector& p, const Matrix& basis_a, const std::vector<DensityMatrix>& cond_b);
DensityMatrix classical_qc(const RealVector& p, const std::vector<DensityMatrix>& cond_a, const Matrix& basis_b);

// Seeded generators (reproducible: same seed, same output).
Ket random_pure(const Dims& dims, std::uint64_t seed);
DensityMatrix random_state(const Dims& dims, int rank, std::uint64_t seed);
HermitianOperator random_hermitian(int dim, std::uint64_t seed);
Matrix random_unitary(int dim, std::uint64_t seed);
// Random mixture of `components` product states on dims (da, db).
DensityMatrix random_separable(int da, int db, int components, std::uint64_t seed);

// Named catalog entry with parameters, for the CLI and for fixtures.
struct StateSpec {
  std::string name;
  std::map<std::string, double> parameters;
};

DensityMatrix make_state(const StateSpec& spec);
std::vector<std::string> catalog_names();

}  // namespace anonmet
