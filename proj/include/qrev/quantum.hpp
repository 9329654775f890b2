#pragma once

// Wave-packet dynamics of the scaled driven lattice
//
//   i kbar d/dtau psi = [-kbar^2/2 d^2/dz^2 + V0_tilde/2 cos 2z + lambda z sin tau] psi
//
// on a periodic grid.  The tilted (comoving) form above is not grid-periodic,
// so production runs use the equivalent lab-frame potential
// V0_tilde/2 cos[2(z + lambda sin tau)], related by frame_transform().

#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "qrev/resonance.hpp"

namespace qrev {

using cplx = std::complex<double>;

struct SpatialGrid {
  int n_points = 2048;
  int cells = 16;
  double z_min = 0.0;
  double z_max = 0.0;

  /// n_points samples over [-pi cells, pi cells); n_points must be a power
  /// of two.
  static SpatialGrid periodic(int cells, int n_points);

  double length() const { return z_max - z_min; }
  double dz() const { return length() / n_points; }
  double z(int i) const { return z_min + i * dz(); }
  /// Angular wave number of FFT bin i (standard FFT ordering).
  double wavenumber(int i) const;
};

struct WaveFunction {
  SpatialGrid grid;
  std::vector<cplx> psi;
  double time = 0.0;

  double norm() const;                       ///< sum |psi|^2 dz
  void normalize();
  cplx overlap(const WaveFunction& other) const;  ///< <this|other>
  double mean_position() const;
  double mean_momentum(double kbar) const;
  double momentum_spread(double kbar) const;
  /// sum |psi|^4 dz / (sum |psi|^2 dz)^2
  double inverse_participation_ratio() const;
};

enum class Frame { lab_phase_modulated, comoving_tilted };
enum class Integrator { strang, yoshida4 };

struct DriveConfig {
  double V0_tilde = 2.0;
  double kbar = 0.5;
  double lambda = 0.0;
  Frame frame = Frame::lab_phase_modulated;
  double dt = 2.0 * std::numbers::pi / 500.0;
  long n_steps = 0;
  Integrator integrator = Integrator::strang;
  /// Maximum allowed |norm - 1| before evolve() aborts.
  double norm_tolerance = 1e-8;

  /// Throws DomainError on non-physical values or dt above 2 pi / 200.
  void validate() const;
};

struct RecordSpec {
  /// Snapshots of |psi|^2 every `density_stride` steps (0: none), keeping
  /// every `density_subsample`-th grid point.
  long density_stride = 0;
  int density_subsample = 1;
  /// Inverse participation ratio every `ipr_stride` steps (0: none).
  long ipr_stride = 0;
};

struct TrajectoryRecord {
  std::vector<double> times;      ///< tau at every step, starting with the initial time
  std::vector<cplx> autocorr;     ///< <psi(0)|psi(tau)>
  std::vector<double> norm_log;
  std::vector<double> density_times;
  std::vector<std::vector<double>> density;
  std::vector<double> ipr_times;
  std::vector<double> ipr;
  WaveFunction final_state;

  std::vector<double> autocorr_abs2() const;
};

/// Normalised Gaussian exp(-(z-z0)^2 / 4 dz^2 + i p0 (z - z0) / kbar),
/// summed over its nearest periodic images.
WaveFunction init_gaussian(const SpatialGrid& grid, double z0, double p0, double delta_z, double kbar);

/// Delta z = kbar / (2 Delta p).
double minimum_uncertainty_width(double kbar, double delta_p);

/// Split-operator propagation.  Each Strang step applies half a potential
/// kick, a full kinetic step and another half kick, with the potential frozen
/// at the step's midpoint time; yoshida4 composes three such steps into a
/// fourth-order step.  Throws NormDriftError if the norm leaves
/// 1 +- config.norm_tolerance.
TrajectoryRecord evolve(const WaveFunction& psi, const DriveConfig& config, const RecordSpec& record = {});

enum class FrameDirection { comoving_to_lab, lab_to_comoving };

/// psi_lab(z, tau) = Phi(z + lambda sin tau, tau) exp(i S(z, tau) / kbar)
/// with S = -lambda cos(tau) z + lambda^2 (tau/4 - 3 sin(2 tau)/8), where Phi
/// solves the tilted equation and psi_lab the lab-frame one.  Only
/// meaningful for states that vanish near the grid edges.
WaveFunction frame_transform(const WaveFunction& psi, double tau, const DriveConfig& config,
                             FrameDirection direction);

struct Eigenbasis {
  std::vector<double> energies;
  std::vector<WaveFunction> states;
  std::vector<int> band;  ///< band index of each state
  int states_per_band = 0;
};

/// Lowest `count` eigenpairs of the grid Hamiltonian
/// -kbar^2/2 d^2/dz^2 + V0_tilde/2 cos 2z (spectral discretisation).  The
/// cosine couples wave numbers m/L and (m +- 2L)/L only, so the problem
/// splits into 2L Bloch blocks; degenerate states are returned with
/// definite parity.
Eigenbasis undriven_eigenbasis(const SpatialGrid& grid, double V0_tilde, double kbar, int count);

/// Mean energy of each band from a complete-band eigenbasis.
std::vector<double> band_centres(const Eigenbasis& basis);

/// Coefficients <phi_k|psi> of `psi` in `basis`.
std::vector<cplx> expand(const Eigenbasis& basis, const WaveFunction& psi);

/// sum_k c_k exp(-i E_k tau / kbar) phi_k.
WaveFunction evolve_in_basis(const Eigenbasis& basis, const std::vector<cplx>& coefficients, double tau,
                             double kbar);

struct EffectiveState {
  int n_first = 0;          ///< band index of c[0]
  std::vector<cplx> c;
};

struct EffectiveTrajectory {
  std::vector<double> times;
  std::vector<cplx> autocorr;   ///< sum_n conj(C_n(0)) C_n(t)
  std::vector<double> norm_log;
  std::vector<EffectiveState> snapshots;
  EffectiveState final_state;
};

/// Resonance-model amplitude equations
///   i kbar dC_n/dt = kbar (n - nbar)(omega - 1/N) C_n + kbar^2 zeta (n - nbar)^2 / 2 C_n
///                    + lambda V / (2i) (C_{n+N} - C_{n-N})
/// with nbar = model.n_bar, integrated with classical RK4.  Throws
/// TruncationError when the population of the outermost N indices on either
/// side exceeds edge_tolerance.
EffectiveTrajectory effective_evolve(const EffectiveState& c0, const ResonanceModel& model, long n_steps, double dt,
                                     long snapshot_stride = 0, double edge_tolerance = 1e-8);

struct RecurrenceScale {
  bool found = false;
  double estimate = 0.0;
  double prominence = 0.0;
};

struct RecurrenceHints {
  double t_cl = 0.0;
  double t_rev = 0.0;
  std::optional<double> t_spr;
};

struct RecurrenceEstimate {
  RecurrenceScale cl;
  RecurrenceScale rev;
  RecurrenceScale spr;
};

struct DetectionOptions {
  double prominence_threshold = 0.1;
  /// Search windows are [lo * hint, hi * hint].
  double window_lo = 0.5;
  double window_hi = 1.5;
};

/// Recurrence times from |C|^2 sampled on a uniform time grid.  T_cl is the
/// first prominent peak of the autocorrelation of |C|^2 near the hint; T_rev
/// and T_spr are the most prominent peaks of the envelope (moving maximum
/// over one classical period) inside their windows.  Prominence is the
/// topographic prominence of the peak within its window.
RecurrenceEstimate detect_recurrences(const std::vector<double>& times, const std::vector<double>& abs2,
                                      const RecurrenceHints& hints, const DetectionOptions& options = {});

RecurrenceEstimate detect_recurrences(const TrajectoryRecord& record, const RecurrenceHints& hints,
                                      const DetectionOptions& options = {});

const char* to_string(Frame frame);
Frame parse_frame(const char* text);
const char* to_string(Integrator integrator);
Integrator parse_integrator(const char* text);

}  // namespace qrev
