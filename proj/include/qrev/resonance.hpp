#pragma once

// Parameter bundles for an N:M nonlinear resonance and its quasi-energy
// spectrum
//
//   E(j, nu) = [N^2 kbar^2 zeta / 8 * a_nu(q) + kbar alpha j + H0] mod kbar omega,
//   q        = 4 lambda V / (N^2 zeta kbar^2).
//
// Lattice quantities use recoil units: V0 in E_r, q0 = V0 / 4, and the
// dimensionless depth of the scaled driven-lattice Hamiltonian is
// V0_tilde = (V0 / E_r) * kbar^2 / 2.

#include <optional>

#include "qrev/mathieu.hpp"

namespace qrev {

enum class Regime { shallow, deep };
enum class CouplingMode { harmonic_approx, user_supplied };

struct LatticeParams {
  double V0 = 16.0;    ///< depth in recoil energies
  double kbar = 0.5;   ///< 2 omega_r / omega_m
  double lambda = 0.0; ///< k_L * Delta L

  double q0() const { return V0 / 4.0; }
  double V0_tilde() const { return V0 * kbar * kbar / 2.0; }

  /// Throws DomainError unless V0 > 0, kbar > 0, lambda >= 0.
  void validate() const;

  /// Inverse of V0_tilde(): lattice with the given scaled depth.
  static LatticeParams from_scaled_depth(double V0_tilde, double kbar, double lambda);
};

struct BandParams {
  double omega = 0.0;
  double zeta = 0.0;
};

struct ResonanceModel {
  int N = 1;
  int M = 0;
  double alpha = 0.0;
  double kbar = 0.5;
  double zeta = 1.0;
  double omega = 1.0;
  double V = 0.0;
  double lambda = 0.0;
  double q = 0.0;
  double beta = 0.0;
  int l = 0;
  int n_bar = 0;
  double Delta = 0.0;
  double mu1 = 0.0;
  double H0_bar = 0.0;
  double omega_N = 1.0;

  /// Lattice the model was derived from, if any.
  std::optional<LatticeParams> lattice;
  Regime regime = Regime::deep;

  /// Mathieu order 2 (l + beta) at the centre of band l.
  double nu() const { return 2.0 * (l + beta); }
};

/// 4 lambda V / (N^2 |zeta| kbar^2).
double mathieu_q(double lambda, double V, int N, double zeta, double kbar);

/// Undriven band frequency and nonlinearity of band n from the shallow
/// (q0 < 1, n >= 2) or deep (q0 >= 4) expansions.
BandParams undriven_band_params(const LatticeParams& lattice, int n, Regime regime);

/// Generic model from its primary parameters; fills q, alpha, beta, Delta,
/// mu1.  omega_N defaults to 1/N.
ResonanceModel make_resonance_model(int N, int M, double kbar, double zeta, double omega, double V,
                                    double lambda, int l = 0,
                                    std::optional<double> omega_N = std::nullopt);

/// Model for band n of a driven lattice.  With harmonic_approx (deep regime
/// only) the coupling is V = N^2 sqrt(n+1) q0^(-1/4), which makes
/// q = 4 sqrt(n+1) lambda / (q0^(1/4) kbar^2 zeta) for N = 1.
ResonanceModel lattice_resonance_model(const LatticeParams& lattice, int n, int N, int M, int l,
                                       Regime regime, CouplingMode mode,
                                       std::optional<double> V_user = std::nullopt,
                                       std::optional<double> omega_N = std::nullopt);

/// Copy of `model` at a different drive amplitude (only q changes).
ResonanceModel with_lambda(const ResonanceModel& model, double lambda);

struct QuasiEnergy {
  int j = 0;
  double nu = 0.0;
  double unwrapped = 0.0;
  double wrapped = 0.0;
};

/// Quasi-energy of Floquet state (j, nu); j is reduced modulo N.  `nu` is
/// the full Mathieu order (fractional part included); the characteristic
/// curve is even in nu, so negative orders use |nu|.
QuasiEnergy quasi_energy(const ResonanceModel& model, int j, double nu,
                         MathieuMethod method = MathieuMethod::exact);

/// Unwrapped quasi-energy and its first max_deriv order-derivatives.
std::vector<double> quasi_energy_derivatives(const ResonanceModel& model, double nu, int max_deriv,
                                             DerivativeMode mode = DerivativeMode::automatic);

/// 2 * round(sqrt(q/2)); q must be > 0.
int crossover_index(double q);

/// Level spacing per unit order deep inside the resonance divided by kbar:
/// N^2 kbar zeta sqrt(q) / 2 = N sqrt(lambda V zeta).  This is 2 sqrt(V_eff)
/// for the effective pendulum depth V_eff = N^2 lambda V zeta / 4.
double harmonic_frequency(const ResonanceModel& model);

const char* to_string(Regime regime);
Regime parse_regime(const char* text);

}  // namespace qrev
