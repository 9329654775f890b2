#pragma once

// Classical period, quantum revival and super revival times.
//
// All times are in scaled units (drive period 2 pi) unless stated otherwise.
// A time that is formally infinite (vanishing drive, vanishing winding
// number) is reported as +infinity rather than as an error.

#include <string>
#include <vector>

#include "qrev/resonance.hpp"

namespace qrev {

enum class TimeMethod {
  numeric_exact,
  delicate_general,
  robust_general,
  robust_primary,
  lattice_shallow,
  lattice_deep,
  lattice_deep_harmonic,
  undriven_shallow,
  undriven_deep,
};

struct TimeScales {
  double t_cl = 0.0;
  double t_rev = 0.0;
  double t_spr = 0.0;
  TimeMethod method = TimeMethod::numeric_exact;

  bool ordered() const { return t_cl < t_rev && t_rev < t_spr; }
};

struct ModificationFactors {
  double m_cl = 0.0;
  double m_rev = 0.0;
};

struct RecurrenceFrequencies {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
};

/// Frequencies from derivatives of the exact quasi-energy at order nu:
///   W1 = (E' + alpha kbar) / kbar
///   W2 = (E'' + 2 alpha kbar E') / (2 kbar^2)
///   W3 = (E''' + 3 alpha kbar E'') / (6 kbar^3)
RecurrenceFrequencies omegas_numeric(const ResonanceModel& model, int j, double nu,
                                     DerivativeMode mode = DerivativeMode::automatic);

/// 2 pi / |W| for each frequency (+infinity where W vanishes).
TimeScales times_numeric(const ResonanceModel& model, int j, double nu,
                         DerivativeMode mode = DerivativeMode::automatic);

struct DelicateTimes {
  TimeScales times;
  ModificationFactors factors;
};

/// Weak-coupling (q < 1) primary-resonance times
///   T_cl = (1 - M_cl) T0_cl Delta, T_rev = (1 - M_rev) T0_rev,
/// with T0_cl = 2 pi / omega and T0_rev = 4 pi / (kbar zeta).
DelicateTimes times_delicate(const ResonanceModel& model);

enum class RobustForm { general_N, primary_simplified };

/// Strong-coupling (q >= 10) closed forms.  The general form uses the
/// Mathieu order nu of the model; its super revival diverges as alpha -> 0.
TimeScales times_robust(const ResonanceModel& model, RobustForm form);

/// Undriven-lattice times of band n (recoil time units).
TimeScales undriven_times(const LatticeParams& lattice, int n, Regime regime);

/// T0_cl = 2 pi / omega and T0_rev = 4 pi / (kbar zeta): the unmodulated
/// references entering the delicate forms.
struct ReferenceTimes {
  double t_cl = 0.0;
  double t_rev = 0.0;
};
ReferenceTimes reference_times(const ResonanceModel& model);

enum class LatticeRegime { shallow, deep, deep_harmonic };

/// Driven-lattice closed forms in terms of x = l + beta.
TimeScales driven_lattice_times(const ResonanceModel& model, LatticeRegime regime);

struct SweepRow {
  double lambda = 0.0;
  TimeMethod method = TimeMethod::numeric_exact;
  TimeScales times;
  double q = 0.0;
  double nu = 0.0;
  /// Semicolon-separated tags; "error:<message>" when the row failed.
  std::string flags;
  bool ok = true;
};

/// One row per (lambda, method), evaluated in parallel.  Rows that hit a
/// singularity or leave a formula's domain carry an error tag instead of
/// aborting the sweep.
std::vector<SweepRow> sweep_times(const ResonanceModel& model_template, const std::vector<double>& lambdas,
                                  const std::vector<TimeMethod>& methods);

/// Scaled times divided by the drive angular frequency omega_m (rad/s).
TimeScales to_lab_seconds(const TimeScales& scaled, double omega_m);

const char* to_string(TimeMethod method);
TimeMethod parse_time_method(const char* text);

}  // namespace qrev
