#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "qrev/error.hpp"
#include "qrev/recurrence.hpp"

using namespace qrev;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Model whose band-centre order 2 beta equals `nu`.
ResonanceModel model_at_order(double nu, double q, double kbar = 0.5, double zeta = 1.46875) {
  const double beta = nu / 2.0;
  const double omega = 1.0 + beta * zeta * kbar;
  const double lambda = q * zeta * kbar * kbar / 4.0;
  return make_resonance_model(1, 0, kbar, zeta, omega, 1.0, lambda);
}

ResonanceModel deep_fig1(double lambda) {
  return lattice_resonance_model({16.0, 0.5, lambda}, 2, 1, 0, 0, Regime::deep, CouplingMode::harmonic_approx);
}

ResonanceModel shallow_fig1(double lambda) {
  return lattice_resonance_model({2.0, 0.5, lambda}, 2, 1, 0, 0, Regime::shallow, CouplingMode::user_supplied, 1.0);
}

}  // namespace

TEST_CASE("numeric frequencies of the quadratic spectrum") {
  const ResonanceModel m = make_resonance_model(1, 0, 0.5, 1.3, 3.0, 1.0, 0.0);
  for (double nu : {2.5, 4.0, 6.3}) {
    const RecurrenceFrequencies w = omegas_numeric(m, 0, nu);
    CHECK(w.omega1 == doctest::Approx(m.kbar * m.zeta * nu / 4.0).epsilon(1e-8));
    // E = kbar^2 zeta nu^2 / 8 gives E'' / (2 kbar^2) = zeta / 8.
    CHECK(w.omega2 == doctest::Approx(m.zeta / 8.0).epsilon(1e-6));
    CHECK(std::abs(w.omega3) < 1e-4);
  }
}

TEST_CASE("numeric frequencies with zero winding number") {
  const ResonanceModel m = make_resonance_model(1, 0, 0.5, 1.3, 3.0, 1.0, 0.05);
  const auto d = quasi_energy_derivatives(m, 5.5, 3);
  const RecurrenceFrequencies w = omegas_numeric(m, 0, 5.5);
  CHECK(w.omega2 == doctest::Approx(d[1] / (2.0 * m.kbar * m.kbar)).epsilon(1e-14));
}

TEST_CASE("numeric classical period matches the strong-coupling closed form") {
  for (double nu : {0.0, 1.0, 2.0}) {
    const ResonanceModel m = model_at_order(nu, 100.0);
    const TimeScales numeric = times_numeric(m, 0, nu);
    const TimeScales closed = times_robust(m, RobustForm::general_N);
    CHECK(rel(numeric.t_cl, closed.t_cl) < 1e-2);
    CHECK(rel(numeric.t_rev, closed.t_rev) < 5e-2);
  }
}

TEST_CASE("delicate modification factors") {
  ResonanceModel m;
  m.N = 1;
  m.kbar = 0.5;
  m.omega = 1.0;
  m.zeta = 1.0;
  m.Delta = 1.0;
  m.V = 1.0;
  m.lambda = 0.1;
  m.mu1 = 0.5;
  m.q = 0.5;
  const DelicateTimes t = times_delicate(m);
  CHECK(t.factors.m_cl == doctest::Approx(-0.5 * 0.01 / 0.5625).epsilon(1e-14));
  CHECK(t.factors.m_cl == doctest::Approx(-8.889e-3).epsilon(1e-3));
  CHECK(t.factors.m_rev == doctest::Approx(0.5 * 0.01 * 3.25 / 0.421875).epsilon(1e-14));
  CHECK(t.factors.m_rev == doctest::Approx(3.852e-2).epsilon(1e-3));
  CHECK(t.times.t_spr == doctest::Approx(kPi * std::pow(0.75, 4) / (2.0 * 0.1 * 0.5)));

  for (double mu : {-0.9, -0.3, 0.0, 0.4, 0.95}) {
    m.mu1 = mu;
    const DelicateTimes s = times_delicate(m);
    CHECK(s.factors.m_cl <= 0.0);
    CHECK(s.factors.m_rev >= 0.0);
  }
  m.mu1 = 1.0;
  CHECK_THROWS_AS(times_delicate(m), SingularityError);
  m.mu1 = 0.5;
  m.q = 1.5;
  CHECK_THROWS_AS(times_delicate(m), DomainError);
}

TEST_CASE("delicate times at zero drive") {
  const ResonanceModel m = shallow_fig1(0.0);
  const DelicateTimes t = times_delicate(m);
  const ReferenceTimes ref = reference_times(m);
  CHECK(t.factors.m_cl == 0.0);
  CHECK(t.factors.m_rev == 0.0);
  CHECK(t.times.t_cl == doctest::Approx(ref.t_cl * m.Delta).epsilon(1e-15));
  CHECK(t.times.t_rev == doctest::Approx(ref.t_rev).epsilon(1e-15));
  CHECK(t.times.t_spr == std::numeric_limits<double>::infinity());

  const DelicateTimes tiny = times_delicate(shallow_fig1(1e-8));
  CHECK(rel(tiny.times.t_cl, ref.t_cl * m.Delta) < 1e-6);
  CHECK(rel(tiny.times.t_rev, ref.t_rev) < 1e-6);
}

TEST_CASE("robust closed forms") {
  ResonanceModel m = deep_fig1(1.5);
  m.q = 100.0;
  CHECK(times_robust(m, RobustForm::primary_simplified).t_spr == doctest::Approx(1368.9).epsilon(1e-4));
  const double t1 = times_robust(deep_fig1(1.0), RobustForm::primary_simplified).t_spr;
  const double t4 = times_robust(deep_fig1(4.0), RobustForm::primary_simplified).t_spr;
  CHECK(t4 / t1 == 2.0);
  CHECK(times_robust(model_at_order(0.0, 100.0), RobustForm::general_N).t_spr ==
        std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(times_robust(model_at_order(0.0, 5.0), RobustForm::general_N), DomainError);
}

TEST_CASE("undriven lattice times") {
  const TimeScales deep = undriven_times({16.0, 0.5, 0.0}, 2, Regime::deep);
  CHECK(deep.t_spr == doctest::Approx(64.0 * kPi));
  CHECK(deep.t_spr == doctest::Approx(201.06).epsilon(1e-4));
  CHECK(deep.t_cl == doctest::Approx(kPi / 4.0 * (1.0 + 5.0 / 16.0 + 78.0 / 1024.0)));
  CHECK(deep.t_cl == doctest::Approx(1.0906).epsilon(1e-4));
  // The exact band energies in recoil units are the characteristic values
  // a_n(q0); the classical frequency is their slope in n.  At q0 = 4 band 2
  // sits at the barrier top and the expansion is poor, so compare deeper.
  for (double V0 : {400.0, 1600.0}) {
    const TimeScales t = undriven_times({V0, 0.5, 0.0}, 2, Regime::deep);
    const double slope = char_derivatives(MathieuOrder::even(2), V0 / 4.0, 1, DerivativeMode::level_ladder)[0];
    CHECK(rel(2.0 * kPi / slope, t.t_cl) < 1e-2);
  }

  const TimeScales shallow = undriven_times({1e-12, 0.5, 0.0}, 2, Regime::shallow);
  CHECK(shallow.t_cl == doctest::Approx(kPi / 2.0));
  CHECK(shallow.t_rev == doctest::Approx(2.0 * kPi));
  CHECK(shallow.t_spr > 1e20);
  CHECK_THROWS_AS(undriven_times({0.5, 0.5, 0.0}, 1, Regime::shallow), DomainError);
}

TEST_CASE("driven lattice closed forms") {
  ResonanceModel m = deep_fig1(1.5);
  m.q = 27.78;
  const TimeScales deep = driven_lattice_times(m, LatticeRegime::deep);
  CHECK(deep.t_spr == doctest::Approx(32.0 * kPi * std::sqrt(27.78) / (0.5 * 1.46875)).epsilon(1e-14));
  CHECK(deep.t_spr == doctest::Approx(721.8).epsilon(1e-3));

  const double h1 = driven_lattice_times(deep_fig1(1.0), LatticeRegime::deep_harmonic).t_spr;
  const double h2 = driven_lattice_times(deep_fig1(2.0), LatticeRegime::deep_harmonic).t_spr;
  CHECK(std::abs(h2 / h1 - std::sqrt(2.0)) < 1e-12);

  const ResonanceModel s = shallow_fig1(1e-9);
  const TimeScales shallow = driven_lattice_times(s, LatticeRegime::shallow);
  CHECK(rel(shallow.t_rev, 4.0 * kPi / (s.kbar * s.zeta)) < 1e-12);
  CHECK(rel(shallow.t_cl, 2.0 * kPi / (s.omega * (s.l + s.beta)) * s.Delta) < 1e-12);
}

TEST_CASE("sweep trends and error tags") {
  std::vector<double> weak;
  std::vector<double> strong;
  for (int i = 0; i < 50; ++i) {
    weak.push_back(0.002 + 0.1 * i / 49.0);
    strong.push_back(2.0 + 4.0 * i / 49.0);
  }
  const auto delicate = sweep_times(shallow_fig1(0.0), weak, {TimeMethod::lattice_shallow});
  const auto robust = sweep_times(deep_fig1(0.0), strong, {TimeMethod::lattice_deep});
  for (std::size_t i = 1; i < 50; ++i) {
    REQUIRE(delicate[i].ok);
    REQUIRE(robust[i].ok);
    CHECK(delicate[i].times.t_cl > delicate[i - 1].times.t_cl);
    CHECK(delicate[i].times.t_spr < delicate[i - 1].times.t_spr);
    CHECK(robust[i].times.t_cl < robust[i - 1].times.t_cl);
    CHECK(robust[i].times.t_spr > robust[i - 1].times.t_spr);
  }

  const auto mixed = sweep_times(deep_fig1(0.0), {0.0, 0.1, 3.0},
                                 {TimeMethod::delicate_general, TimeMethod::robust_general, TimeMethod::undriven_deep});
  REQUIRE(mixed.size() == 9);
  CHECK(mixed[0].ok);
  CHECK(mixed[0].times.t_spr == std::numeric_limits<double>::infinity());
  CHECK_FALSE(mixed[1].ok);
  CHECK(mixed[1].flags.find("error:") != std::string::npos);
  CHECK_FALSE(mixed[6].ok);
  CHECK(mixed[7].ok);
  CHECK(mixed[8].ok);
  CHECK(mixed[8].times.t_spr == doctest::Approx(64.0 * kPi));
}

TEST_CASE("lab-second conversion and names") {
  const TimeScales t{1.0, 2.0, 3.0, TimeMethod::lattice_deep};
  const TimeScales lab = to_lab_seconds(t, 2.0 * kPi * 1e3);
  CHECK(lab.t_rev == doctest::Approx(2.0 / (2.0 * kPi * 1e3)));
  CHECK(parse_time_method("lattice_deep_harmonic") == TimeMethod::lattice_deep_harmonic);
  CHECK_THROWS_AS(parse_time_method("nope"), DomainError);
}
