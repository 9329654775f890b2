#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qrev/error.hpp"
#include "qrev/resonance.hpp"

using namespace qrev;

TEST_CASE("mathieu q") {
  CHECK(mathieu_q(0.0, 2.0, 1, 1.5, 0.5) == 0.0);
  CHECK(mathieu_q(1.0, 2.0, 2, 1.5, 0.5) == doctest::Approx(4.0 * 2.0 / (4.0 * 1.5 * 0.25)));
  CHECK(mathieu_q(1.0, 2.0, 1, -1.5, 0.5) == mathieu_q(1.0, 2.0, 1, 1.5, 0.5));
  for (double lambda : {0.1, 0.37, 1.5, 3.0}) {
    CHECK(mathieu_q(2.0 * lambda, 0.7, 1, 1.3, 0.16) == 2.0 * mathieu_q(lambda, 0.7, 1, 1.3, 0.16));
  }
  CHECK_THROWS_AS(mathieu_q(1.0, 1.0, 1, 0.0, 0.5), DomainError);
}

TEST_CASE("lattice parameter conversions") {
  const LatticeParams lattice{16.0, 0.5, 1.5};
  CHECK(lattice.q0() == 4.0);
  CHECK(lattice.V0_tilde() == doctest::Approx(2.0));
  const LatticeParams fig2 = LatticeParams::from_scaled_depth(0.36, 0.16, 3.0);
  CHECK(fig2.V0 == doctest::Approx(28.125));
  CHECK_THROWS_AS((LatticeParams{-1.0, 0.5, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS((LatticeParams{1.0, 0.5, -0.1}).validate(), DomainError);
}

TEST_CASE("undriven band parameters") {
  const BandParams deep = undriven_band_params({16.0, 0.5, 0.0}, 2, Regime::deep);
  CHECK(deep.omega == doctest::Approx(5.5));
  CHECK(deep.zeta == doctest::Approx(1.46875));
  const BandParams free_like = undriven_band_params({1e-12, 0.5, 0.0}, 3, Regime::shallow);
  CHECK(free_like.omega == doctest::Approx(6.0));
  CHECK(free_like.zeta == doctest::Approx(2.0));
  const BandParams very_deep = undriven_band_params({4e8, 0.5, 0.0}, 2, Regime::deep);
  CHECK(very_deep.zeta == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(undriven_band_params({2.0, 0.5, 0.0}, 1, Regime::shallow), DomainError);
  CHECK_THROWS_AS(undriven_band_params({8.0, 0.5, 0.0}, 2, Regime::shallow), DomainError);
  CHECK_THROWS_AS(undriven_band_params({8.0, 0.5, 0.0}, 2, Regime::deep), DomainError);
}

TEST_CASE("lattice resonance model") {
  const LatticeParams lattice{16.0, 0.5, 1.5};
  const ResonanceModel m = lattice_resonance_model(lattice, 2, 1, 0, 0, Regime::deep, CouplingMode::harmonic_approx);
  const double quoted = 4.0 * std::sqrt(3.0) * 1.5 / (std::pow(4.0, 0.25) * 0.25 * 1.46875);
  CHECK(m.q == doctest::Approx(quoted).epsilon(1e-14));
  CHECK(m.q == doctest::Approx(20.0).epsilon(2e-3));
  CHECK(m.alpha == 0.0);
  CHECK(m.omega_N == 1.0);
  CHECK(m.Delta == doctest::Approx(1.0 - 1.0 / 5.5));
  CHECK(m.beta == doctest::Approx(4.5 / (1.46875 * 0.5)));
  CHECK(m.mu1 == doctest::Approx(0.5 * 1.46875 * m.Delta / 11.0));
  CHECK(m.nu() == doctest::Approx(2.0 * m.beta));

  const ResonanceModel undriven = with_lambda(m, 0.0);
  CHECK(undriven.q == 0.0);
  CHECK(std::isfinite(undriven.beta));
  CHECK(std::isfinite(undriven.mu1));

  CHECK_THROWS_AS(lattice_resonance_model({2.0, 0.5, 0.1}, 2, 1, 0, 0, Regime::shallow, CouplingMode::harmonic_approx),
                  DomainError);
  const ResonanceModel shallow =
      lattice_resonance_model({2.0, 0.5, 0.1}, 2, 1, 0, 0, Regime::shallow, CouplingMode::user_supplied, 1.0);
  CHECK(shallow.V == 1.0);
  CHECK_THROWS_AS(make_resonance_model(2, 2, 0.5, 1.0, 1.0, 1.0, 0.1), DomainError);
  CHECK(make_resonance_model(1, 0, 0.5, 1.0, 2.0, 1.0, 0.1, 0, 0.25).omega_N == 0.25);
}

TEST_CASE("quasi-energy at zero coupling is quadratic") {
  ResonanceModel m = make_resonance_model(1, 0, 0.5, 1.3, 3.0, 1.0, 0.0);
  for (double nu : {0.0, 1.0, 2.5, 4.0, 7.25}) {
    const QuasiEnergy e = quasi_energy(m, 0, nu);
    const double expected = 0.25 * 1.3 * nu * nu / 8.0;
    CHECK(std::abs(e.unwrapped - expected) <= 1e-12 * std::max(1.0, expected));
    CHECK(e.wrapped >= 0.0);
    CHECK(e.wrapped < m.kbar * m.omega);
    CHECK(std::abs(std::remainder(e.unwrapped - e.wrapped, m.kbar * m.omega)) < 1e-12);
  }
  m.H0_bar = 0.3;
  CHECK(quasi_energy(m, 0, 2.0).unwrapped == doctest::Approx(0.25 * 1.3 * 4.0 / 8.0 + 0.3));
}

TEST_CASE("Floquet index shift and periodicity") {
  const ResonanceModel m = make_resonance_model(2, 1, 0.5, 1.1, 1.7, 1.0, 0.2);
  CHECK(m.alpha == 0.5);
  const double e0 = quasi_energy(m, 0, 3.3).unwrapped;
  const double e1 = quasi_energy(m, 1, 3.3).unwrapped;
  CHECK(e1 - e0 == doctest::Approx(0.25).epsilon(1e-13));
  for (int j = -3; j <= 4; ++j) {
    CHECK(quasi_energy(m, j, 3.3).wrapped == quasi_energy(m, j + m.N, 3.3).wrapped);
  }
}

TEST_CASE("harmonic level spacing deep in the resonance") {
  // q = 200 with zeta = 1, kbar = 0.5, N = 1: lambda V = 12.5.
  const ResonanceModel m = make_resonance_model(1, 0, 0.5, 1.0, 3.0, 1.0, 12.5);
  CHECK(m.q == doctest::Approx(200.0));
  const double expected = m.kbar * harmonic_frequency(m);
  CHECK(harmonic_frequency(m) == doctest::Approx(std::sqrt(m.lambda * m.V * m.zeta)));
  for (int nu = 0; nu < 2; ++nu) {
    const double spacing = quasi_energy(m, 0, nu + 1).unwrapped - quasi_energy(m, 0, nu).unwrapped;
    CHECK(std::abs(spacing - expected) / expected < 0.05);
  }
}

TEST_CASE("continuity in lambda") {
  const ResonanceModel base = make_resonance_model(1, 0, 0.5, 1.2, 3.0, 1.0, 0.0);
  for (double lambda : {0.01, 0.5, 2.0}) {
    for (double nu : {0.5, 2.0, 5.5}) {
      const double e1 = quasi_energy(with_lambda(base, lambda), 0, nu).unwrapped;
      const double e2 = quasi_energy(with_lambda(base, lambda + 1e-6), 0, nu).unwrapped;
      CHECK(std::abs(e2 - e1) < 1e-6);
    }
  }
}

TEST_CASE("crossover index") {
  CHECK(crossover_index(2.0) == 2);
  CHECK(crossover_index(50.0) == 10);
  CHECK(crossover_index(0.1) == 0);
  CHECK_THROWS_AS(crossover_index(0.0), DomainError);
}
