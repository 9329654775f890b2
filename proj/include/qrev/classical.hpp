#pragma once

// Classical scaled dynamics of the driven lattice
//
//   H = p^2/2 + V0_tilde/2 cos 2z + lambda z sin tau,
//   dz/dtau = p,  dp/dtau = V0_tilde sin 2z - lambda sin tau,
//
// integrated with a fourth-order symplectic splitting and sampled
// stroboscopically at tau = 2 pi m.

#include <cstddef>
#include <numbers>
#include <vector>

namespace qrev {

struct PhasePoint {
  double z = 0.0;
  double p = 0.0;
  double tau = 0.0;
  /// Number of cell widths 2 pi removed when z was reduced to [-pi, pi).
  long winding = 0;
};

struct SectionConfig {
  double lambda = 0.0;
  double V0_tilde = 2.0;
  long n_periods = 300;
  std::vector<PhasePoint> initial_conditions;
  int steps_per_period = 500;

  /// Throws DomainError on non-finite values or steps_per_period < 500.
  void validate() const;
};

/// p^2/2 + V0_tilde/2 cos 2z (the undriven energy).
double undriven_energy(const PhasePoint& x, double V0_tilde);

/// Reduces z into [-pi, pi), accumulating the removed cells in `winding`.
PhasePoint reduce_to_cell(PhasePoint x);

/// Integrates n_periods drive periods from p0 and returns every step,
/// starting with p0 itself.  Points carry z in [-pi, pi) plus the winding
/// count; the unreduced position is z + 2 pi winding.  A negative
/// `direction` runs backwards in time.
std::vector<PhasePoint> integrate_trajectory(const PhasePoint& p0, const SectionConfig& config, int direction = 1);

/// Advances `x` by n_steps steps of size dt (dt may be negative); the result
/// is reduced to the cell.
PhasePoint advance(PhasePoint x, double lambda, double V0_tilde, double dt, long n_steps);

struct SectionPoint {
  std::size_t seed = 0;
  long period = 0;
  PhasePoint point;  ///< z reduced to [-pi, pi)
};

/// Stroboscopic samples at tau = tau0 + 2 pi m, m = 0..n_periods, of every
/// initial condition, computed in parallel and ordered by seed then period.
std::vector<SectionPoint> poincare_section(const SectionConfig& config);

/// `count` seeds on a regular (z, p) grid spanning the cell [-pi, pi) and
/// |p| <= p_max (default 40 seeds: 8 positions by 5 momenta).
std::vector<PhasePoint> default_seeds(double p_max, int count = 40);

struct IslandSearch {
  double z_min = -std::numbers::pi;
  double z_max = std::numbers::pi;
  double p_min = -3.0;
  double p_max = 3.0;
  int grid = 40;         ///< coarse grid points per axis
  long periods = 20;     ///< section points used for the dispersion
};

struct IslandCentre {
  PhasePoint centre;
  double dispersion = 0.0;  ///< mean squared section distance from the seed
  double trace = 0.0;       ///< trace of the one-period monodromy matrix
};

/// Trace of the linearised one-period map at x; |trace| < 2 means elliptic.
double monodromy_trace(const PhasePoint& x, double lambda, double V0_tilde, int steps_per_period = 500);

/// Island centre of the 1:1 resonance: low-dispersion seeds from a coarse
/// grid are refined by Nelder-Mead, and the elliptic fixed point with the
/// smallest |trace| is returned (the lowest-dispersion one if none is
/// elliptic).
IslandCentre find_island_centre(double lambda, double V0_tilde, const IslandSearch& search = {},
                                int steps_per_period = 500);

struct Persistence {
  bool bounded = false;
  double max_distance = 0.0;
};

/// Whether every section point of a trajectory seeded at `centre` stays
/// within `radius` of it for n_periods.
Persistence island_persistence(const PhasePoint& centre, double lambda, double V0_tilde, long n_periods,
                               double radius = 0.2, int steps_per_period = 500);

struct CoverageGrid {
  int bins = 100;
  double p_min = -10.0;
  double p_max = 10.0;
};

/// Fraction of a bins x bins grid over [-pi, pi) x [p_min, p_max) visited by
/// the section points of one orbit.
double section_coverage(const PhasePoint& seed, double lambda, double V0_tilde, long n_periods,
                        const CoverageGrid& grid = {}, int steps_per_period = 500);

/// Seed just off the unstable equilibrium z = 0 on the undriven separatrix.
PhasePoint separatrix_seed(double V0_tilde);

}  // namespace qrev
