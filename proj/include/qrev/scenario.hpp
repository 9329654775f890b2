#pragma once

// Ready-made runs built from a RunConfig: packet preparation, recurrence
// predictions used as detection hints, and the figure presets.

#include <optional>
#include <string>
#include <vector>

#include "qrev/classical.hpp"
#include "qrev/config.hpp"
#include "qrev/io.hpp"
#include "qrev/quantum.hpp"
#include "qrev/recurrence.hpp"

namespace qrev {

/// Momentum p0 >= 0 for which a Gaussian at z0 of width delta_z has mean
/// undriven energy p0^2/2 + dp^2/2 + (V0_tilde/2) cos(2 z0) exp(-2 dz^2)
/// equal to the centre of `band` on `grid`, with dp = kbar / (2 dz).
/// Returns 0 if the band centre lies below the packet's zero-momentum energy.
double band_centre_momentum(const SpatialGrid& grid, double V0_tilde, double kbar, int band, double z0,
                            double delta_z);

struct PacketSetup {
  double z0 = 0.0;
  double p0 = 0.0;
  double delta_z = 0.0;
  double delta_p = 0.0;          ///< as requested (or the minimum-uncertainty value)
  double uncertainty_product = 0.0;  ///< delta_z * delta_p / (kbar / 2)
  WaveFunction psi;              ///< in the propagation frame at tau = 0
};

/// Gaussian from the packet section, built in the comoving frame and mapped
/// to the lab frame when the drive uses the lab frame.  Warns when
/// delta_z * delta_p differs from kbar / 2.
PacketSetup prepare_packet(const RunConfig& config, const SpatialGrid& grid, const DriveConfig& drive);

DriveConfig drive_config(const RunConfig& config);

struct Prediction {
  TimeScales times;
  std::string source;
  /// True when the closed form was evaluated at the resonance centre
  /// (l + beta = 0) because the model's own value was not a valid
  /// ordering of positive times.
  bool centred = false;
};

/// Closed-form times for the configured model: driven-lattice forms for
/// lambda > 0, undriven forms of band n otherwise.
Prediction predicted_times(const RunConfig& config);

/// Same, but falls back to the resonance centre when the model's own value
/// is unusable as a detection hint.
Prediction detection_hints(const RunConfig& config);

struct EvolveRun {
  SpatialGrid grid;
  DriveConfig drive;
  PacketSetup packet;
  TrajectoryRecord record;
  Prediction hints;
  std::optional<RecurrenceEstimate> recurrences;
  std::string detection_note;
};

EvolveRun run_evolve(const RunConfig& config);

/// Metadata lines describing a config: hash plus grid and step choices.
Metadata run_metadata(const RunConfig& config, const std::string& command);

/// Writes autocorr.csv, recurrences.csv and (if recorded) density.csv and
/// ipr.csv into `directory`; returns the paths written.
std::vector<std::string> write_evolve_outputs(const EvolveRun& run, const RunConfig& config,
                                              const std::string& directory, const std::string& command);

/// Section seeds of the poincare section: explicit points or the default grid.
SectionConfig section_config(const RunConfig& config, double lambda);

/// Figure presets.  Figure 2: lambda 3, q 85.14, V0_tilde 0.36, kbar 0.16,
/// delta_p 0.1.  Figure 4: lambda 1.5, kbar 0.5, V0 16, delta_z = delta_p
/// = 0.5, second band.
RunConfig figure2_config();
RunConfig figure4_config();

/// Coupling V that puts the model of `config` at Mathieu parameter q.
double coupling_for_q(const RunConfig& config, double q);

/// Writes the data of figure 1, 2, 3 or 4 into `directory`; throws
/// DomainError for other numbers.
std::vector<std::string> reproduce_figure(int figure, const std::string& directory);

}  // namespace qrev
