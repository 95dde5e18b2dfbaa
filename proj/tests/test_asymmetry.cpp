#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "anonmet/asymmetry.hpp"
#include "anonmet/classify.hpp"
#include "anonmet/states.hpp"
#include "helpers.hpp"

using namespace anonmet;
using namespace anonmet::testing;

namespace {

Matrix evolve(const Matrix& m, const Matrix& u) { return u * m * u.adjoint(); }

}  // namespace

TEST_CASE("bohr_frequencies: grouped eigenvalue differences") {
  RealVector v(3);
  v << 0, 1, 1 + 5e-9;  // the near-degenerate pair groups within tol
  const std::vector<double> freqs = bohr_frequencies(v);
  CHECK(freqs.size() == 3);  // {-1, 0, 1}
  CHECK(freqs[1] == doctest::Approx(0.0));
}

TEST_CASE("mode_project: zero mode is the dephased part") {
  const DensityMatrix rho = random_state({2, 2}, 4, 51);
  const Matrix m0 = mode_project(rho, proj_op(1, 2), Side::A, 0.0);
  // Oracle: entrywise mask keeping matched A-levels.
  Matrix expect = rho.mat();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if ((r / 2) != (c / 2)) expect(r, c) = 0;
  CHECK(max_abs(m0 - expect) < 1e-14);
}

TEST_CASE("mode_project: Bell coherences sit at frequencies +-1") {
  const DensityMatrix bell = bell_psi_plus();
  const HermitianOperator h = proj_op(1, 2);

  // Under U(theta) = e^{-i theta |1><1|}, |11><00| picks up e^{-i theta}:
  // frequency -1. |00><11| is the +1 mode.
  Matrix minus_expect = Matrix::Zero(4, 4);
  minus_expect(3, 0) = 0.5;
  CHECK(max_abs(mode_project(bell, h, Side::A, -1.0) - minus_expect) < 1e-14);

  Matrix plus_expect = Matrix::Zero(4, 4);
  plus_expect(0, 3) = 0.5;
  CHECK(max_abs(mode_project(bell, h, Side::A, 1.0) - plus_expect) < 1e-14);

  // Completeness over {-1, 0, 1}.
  const Matrix sum = mode_project(bell, h, Side::A, -1.0) + mode_project(bell, h, Side::A, 0.0) +
                     mode_project(bell, h, Side::A, 1.0);
  CHECK(max_abs(sum - bell.mat()) < 1e-14);
  // No matching pair: zero.
  CHECK(max_abs(mode_project(bell, h, Side::A, 0.5)) == 0.0);
}

TEST_CASE("mode_decompose: support and completeness") {
  const HermitianOperator h = proj_op(1, 2);

  const ModeDecomposition w = mode_decompose(werner(0.5), h, Side::A);
  CHECK(w.modes.size() == 3);
  CHECK(std::sqrt(w.modes[0].second.squaredNorm()) > 0.1);  // omega = -1
  CHECK(std::sqrt(w.modes[2].second.squaredNorm()) > 0.1);  // omega = +1

  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& [omega, m] : w.modes) sum += m;
  CHECK(max_abs(sum - werner(0.5).mat()) < 1e-14);

  const ModeDecomposition d = mode_decompose(cc_pair(), h, Side::A);
  for (const auto& [omega, m] : d.modes) {
    if (omega != 0.0) CHECK(max_abs(m) < 1e-14);  // diagonal state: only the zero mode
  }
}

TEST_CASE("mode eigen-relation on a theta grid") {
  const DensityMatrix rho = random_state({2, 2}, 4, 61);
  const HermitianOperator h = random_hermitian(2, 62);
  const ModeDecomposition d = mode_decompose(rho, h, Side::A);
  for (const auto& [omega, m] : d.modes) {
    for (int k = 1; k <= 62; ++k) {
      const double theta = 0.1 * k;
      const Matrix u = embed(unitary_of(h, theta), 0, rho.dims());
      const Matrix phase = std::exp(Complex(0, omega * theta)) * m;
      CHECK(max_abs(evolve(m, u) - phase) < 1e-9);
    }
  }
}

TEST_CASE("check_wa_modes on the key examples") {
  const WaModeCheck bell = check_wa_modes(bell_psi_plus(), proj1_pair());
  CHECK(bell.holds);
  CHECK(bell.residual <= 1e-12);

  // No integer-spectrum pair in the marginal eigenbases makes the
  // discordant-separable example weakly anonymous.
  const DensityMatrix disc = discordant_separable();
  const MarginalBasis ba = marginal_eigenbasis(disc, Side::A);
  const MarginalBasis bb = marginal_eigenbasis(disc, Side::B);
  for (double h1 : {1.0, 2.0, 3.0}) {
    for (double g1 : {1.0, 2.0, 3.0}) {
      RealVector hd(2), gd(2);
      hd << 0, h1;
      gd << 0, g1;
      const HamiltonianPair pair{
          HermitianOperator(ba.vectors * hd.asDiagonal() * ba.vectors.adjoint()),
          HermitianOperator(bb.vectors * gd.asDiagonal() * bb.vectors.adjoint())};
      CHECK_FALSE(check_wa_modes(disc, pair).holds);
    }
  }

  // Classically correlated pair: anonymity holds but nothing encodes.
  const WaModeCheck cc = check_wa_modes(cc_pair(), proj1_pair());
  CHECK_FALSE(cc.has_nonzero_mode);
  CHECK_FALSE(cc.holds);
  const WaModeCheck cc2 = check_wa_modes(cc_pair(), diag_pair({0, 2}, {0, 1}));
  CHECK_FALSE(cc2.has_nonzero_mode);
}

TEST_CASE("split_twirl: convention test against the defining eigen-relation") {
  const DensityMatrix rho = random_state({2, 2}, 4, 71);
  const HamiltonianPair pair = diag_pair({0, 2}, {0, 1});
  for (double omega : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const Matrix p = split_twirl(rho, pair, omega);
    for (int k = 1; k <= 20; ++k) {
      const double theta = 0.3 * k;
      const Matrix ua = embed(unitary_of(pair.h_a, theta), 0, rho.dims());
      const Matrix vb = embed(unitary_of(pair.g_b, theta), 1, rho.dims());
      CHECK(max_abs(ua * p * vb.adjoint() - std::exp(Complex(0, omega * theta)) * p) < 1e-10);
    }
  }
}

TEST_CASE("split_twirl: omega sum reproduces the state") {
  const DensityMatrix rho = random_state({2, 3}, 5, 72);
  const HamiltonianPair pair = diag_pair({0, 2}, {0, 1, 3});
  // Frequencies G_j' - E_i range over all eigenvalue combinations.
  Matrix sum = Matrix::Zero(rho.dim(), rho.dim());
  std::vector<double> freqs;
  for (double e : {0.0, 2.0})
    for (double g : {0.0, 1.0, 3.0}) freqs.push_back(g - e);
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  for (double w : freqs) sum += split_twirl(rho, pair, w);
  CHECK(max_abs(sum - rho.mat()) < 1e-12);
}

TEST_CASE("split_twirl: SA holds for Bell, fails for Werner") {
  const DensityMatrix bell = bell_psi_plus();
  const HamiltonianPair pair = proj1_pair();
  for (double w : {-1.0, 0.0, 1.0}) {
    CHECK(max_abs(split_twirl(bell, pair, w) - mode_project(bell, pair.g_b, Side::B, w)) < 1e-12);
  }

  const DensityMatrix wern = werner(0.5);
  for (double w : {-1.0, 1.0}) {
    CHECK(max_abs(split_twirl(wern, pair, w) - mode_project(wern, pair.g_b, Side::B, w)) > 0.1);
  }

  const SaTwirlCheck sa_bell = check_sa_split_twirl(bell, pair);
  CHECK(sa_bell.holds);
  const SaTwirlCheck sa_wern = check_sa_split_twirl(wern, pair);
  CHECK_FALSE(sa_wern.holds);
  // The shift freedom: spectra offset by a constant still witness SA.
  const SaTwirlCheck shifted = check_sa_split_twirl(bell, diag_pair({0, 1}, {1, 2}));
  CHECK(shifted.holds);
  CHECK(shifted.frequency_shift == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("g_twirl: matched and anti-matched spectra keep the two-qubit patterns") {
  const DensityMatrix rho = random_state({2, 2}, 4, 73);

  const Matrix matched = g_twirl(rho, diag_pair({0, 1}, {0, 1}));
  const Matrix anti = g_twirl(rho, diag_pair({0, 1}, {0, -1}));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const bool diag = r == c;
      const bool corner = (r == 0 && c == 3) || (r == 3 && c == 0);
      const bool inner = (r == 1 && c == 2) || (r == 2 && c == 1);
      const Complex mv = matched(r, c), av = anti(r, c);
      if (diag || corner) {
        CHECK(std::abs(mv - rho.mat()(r, c)) < 1e-14);
      } else {
        CHECK(std::abs(mv) < 1e-14);
      }
      if (diag || inner) {
        CHECK(std::abs(av - rho.mat()(r, c)) < 1e-14);
      } else {
        CHECK(std::abs(av) < 1e-14);
      }
    }
  }

  CHECK(max_abs(g_twirl(cc_pair(), proj1_pair()) - cc_pair().mat()) < 1e-14);  // diagonal fixed point
  // Fixed point iff the mode-equality condition holds.
  CHECK(max_abs(g_twirl(bell_psi_plus(), proj1_pair()) - bell_psi_plus().mat()) < 1e-14);
  CHECK(max_abs(g_twirl(werner(0.5), proj1_pair()) - werner(0.5).mat()) > 0.1);
}

TEST_CASE("multipartite_wa_check: correlated modes across three parties") {
  const std::vector<HermitianOperator> gens(3, proj_op(1, 2));

  const MultiWaCheck g = multipartite_wa_check(ghz(3), gens);
  CHECK(g.holds);
  CHECK(g.residual <= 1e-12);

  // Incoherent product state: nothing encodes.
  Matrix d0 = Matrix::Zero(2, 2), d1 = Matrix::Zero(2, 2);
  d0(0, 0) = 0.7;
  d0(1, 1) = 0.3;
  d1(0, 0) = 0.4;
  d1(1, 1) = 0.6;
  const DensityMatrix prod({2, 2, 2}, tensor(tensor(d0, d1), d0));
  const MultiWaCheck p = multipartite_wa_check(prod, gens);
  CHECK_FALSE(p.has_nonzero_mode);
  CHECK_FALSE(p.holds);

  // Coherent product state: encodes but leaks the location.
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  const DensityMatrix coherent({2, 2, 2}, tensor(tensor(plus, plus), plus));
  CHECK_FALSE(multipartite_wa_check(coherent, gens).holds);

  CHECK_THROWS_AS(multipartite_wa_check(ghz(3), {proj_op(1, 2)}), std::invalid_argument);
}

TEST_CASE("multipartite_wa_check reduces to the bipartite mode check at n = 2") {
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix rho =
        k % 3 == 0 ? bell_psi_plus() : random_state({2, 2}, 1 + k % 4, 900 + k);
    const HamiltonianPair pair = k % 2 ? proj1_pair() : diag_pair({0, 2}, {0, 1});
    const MultiWaCheck m = multipartite_wa_check(rho, {pair.h_a, pair.g_b});
    const WaModeCheck b = check_wa_modes(rho, pair);
    CHECK(m.holds == b.holds);
    CHECK(m.residual == doctest::Approx(b.residual).epsilon(1e-12));
  }
}
