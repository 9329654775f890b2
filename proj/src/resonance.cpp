#include "qrev/resonance.hpp"

#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "qrev/error.hpp"
#include "qrev/support.hpp"

namespace qrev {

void LatticeParams::validate() const {
  if (!(V0 > 0.0) || !std::isfinite(V0)) throw DomainError("lattice depth V0 must be > 0");
  if (!(kbar > 0.0) || !std::isfinite(kbar)) throw DomainError("kbar must be > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 0");
}

LatticeParams LatticeParams::from_scaled_depth(double V0_tilde, double kbar, double lambda) {
  if (!(kbar > 0.0)) throw DomainError("kbar must be > 0");
  LatticeParams lattice{2.0 * V0_tilde / (kbar * kbar), kbar, lambda};
  lattice.validate();
  return lattice;
}

double mathieu_q(double lambda, double V, int N, double zeta, double kbar) {
  if (N < 1) throw DomainError("resonance order N must be >= 1");
  if (zeta == 0.0) throw DomainError("zeta = 0: linear spectrum, resonance undefined");
  if (!(kbar > 0.0)) throw DomainError("kbar must be > 0");
  return 4.0 * lambda * V / (static_cast<double>(N) * N * std::abs(zeta) * kbar * kbar);
}

BandParams undriven_band_params(const LatticeParams& lattice, int n, Regime regime) {
  lattice.validate();
  const double q0 = lattice.q0();
  if (regime == Regime::shallow) {
    if (!(q0 < 1.0)) throw DomainError("shallow regime needs q0 < 1, got " + std::to_string(q0));
    if (n <= 1) throw DomainError("shallow regime needs band index n >= 2");
    const double u = static_cast<double>(n) * n - 1.0;
    return {2.0 * n * (1.0 - q0 * q0 / (2.0 * u * u)),
            2.0 + q0 * q0 / 2.0 * (3.0 * n * n + 1.0) / (u * u * u)};
  }
  if (!(q0 >= 4.0)) throw DomainError("deep regime needs q0 >= 4, got " + std::to_string(q0));
  if (n < 0) throw DomainError("band index must be >= 0");
  if (q0 < 10.0) warn("deep-lattice expansion used at q0 = " + std::to_string(q0) + " < 10");
  const double rq = std::sqrt(q0);
  const double s = 2.0 * n + 1.0;
  return {4.0 * (rq - s / 8.0), std::abs(-1.0 - 3.0 * s / (16.0 * rq))};
}

ResonanceModel make_resonance_model(int N, int M, double kbar, double zeta, double omega, double V,
                                    double lambda, int l, std::optional<double> omega_N) {
  if (N < 1) throw DomainError("resonance order N must be >= 1");
  if (std::gcd(M, N) != 1) throw DomainError("winding number M/N must be in lowest terms");
  if (!(omega != 0.0)) throw DomainError("classical frequency omega must be nonzero");
  ResonanceModel m;
  m.N = N;
  m.M = M;
  m.alpha = static_cast<double>(M) / N;
  m.kbar = kbar;
  m.zeta = zeta;
  m.omega = omega;
  m.V = V;
  m.lambda = lambda;
  m.l = l;
  m.q = mathieu_q(lambda, V, N, zeta, kbar);
  m.omega_N = omega_N.value_or(1.0 / N);
  m.beta = (N * omega - 1.0) / (static_cast<double>(N) * N * zeta * kbar);
  m.Delta = 1.0 - m.omega_N / omega;
  m.mu1 = kbar * zeta * m.Delta / (2.0 * omega);
  return m;
}

ResonanceModel lattice_resonance_model(const LatticeParams& lattice, int n, int N, int M, int l,
                                       Regime regime, CouplingMode mode, std::optional<double> V_user,
                                       std::optional<double> omega_N) {
  const BandParams band = undriven_band_params(lattice, n, regime);
  double V = 0.0;
  if (mode == CouplingMode::harmonic_approx) {
    if (regime != Regime::deep) throw DomainError("harmonic coupling approximation needs the deep regime");
    V = static_cast<double>(N) * N * std::sqrt(n + 1.0) / std::pow(lattice.q0(), 0.25);
  } else {
    if (!V_user) throw DomainError("user_supplied coupling mode needs a value for V");
    V = *V_user;
  }
  ResonanceModel m = make_resonance_model(N, M, lattice.kbar, band.zeta, band.omega, V, lattice.lambda, l, omega_N);
  m.n_bar = n;
  m.lattice = lattice;
  m.regime = regime;
  return m;
}

ResonanceModel with_lambda(const ResonanceModel& model, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
  ResonanceModel m = model;
  m.lambda = lambda;
  m.q = mathieu_q(lambda, m.V, m.N, m.zeta, m.kbar);
  if (m.lattice) m.lattice->lambda = lambda;
  return m;
}

namespace {

double energy_scale(const ResonanceModel& m) {
  return static_cast<double>(m.N) * m.N * m.kbar * m.kbar * m.zeta / 8.0;
}

}  // namespace

QuasiEnergy quasi_energy(const ResonanceModel& model, int j, double nu, MathieuMethod method) {
  // The Floquet index is defined modulo N.
  j = ((j % model.N) + model.N) % model.N;
  const double a = char_value(MathieuOrder::even(std::abs(nu)), model.q, method);
  QuasiEnergy e;
  e.j = j;
  e.nu = nu;
  e.unwrapped = energy_scale(model) * a + model.kbar * model.alpha * j + model.H0_bar;
  const double period = model.kbar * std::abs(model.omega);
  e.wrapped = std::fmod(e.unwrapped, period);
  if (e.wrapped < 0.0) e.wrapped += period;
  if (e.wrapped >= period) e.wrapped = 0.0;
  return e;
}

std::vector<double> quasi_energy_derivatives(const ResonanceModel& model, double nu, int max_deriv,
                                             DerivativeMode mode) {
  const double sign = nu < 0.0 ? -1.0 : 1.0;
  std::vector<double> d = char_derivatives(MathieuOrder::even(std::abs(nu)), model.q, max_deriv, mode);
  const double scale = energy_scale(model);
  double parity = sign;
  for (double& v : d) {
    v *= scale * parity;
    parity *= sign;
  }
  return d;
}

int crossover_index(double q) {
  if (!(q > 0.0)) throw DomainError("crossover index needs q > 0");
  return crossover_order(q);
}

double harmonic_frequency(const ResonanceModel& model) {
  return static_cast<double>(model.N) * model.N * model.kbar * std::abs(model.zeta) * std::sqrt(model.q) / 2.0;
}

const char* to_string(Regime regime) { return regime == Regime::shallow ? "shallow" : "deep"; }

Regime parse_regime(const char* text) {
  if (std::strcmp(text, "shallow") == 0) return Regime::shallow;
  if (std::strcmp(text, "deep") == 0) return Regime::deep;
  throw DomainError(std::string("unknown regime '") + text + "'");
}

}  // namespace qrev
