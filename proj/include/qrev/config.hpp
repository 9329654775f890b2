#pragma once

// Run configuration shared by the command-line tool and the Python module.
//
// The document is JSON with the optional sections lattice, resonance,
// evolve, poincare and sweep.  Keys not listed here are rejected, and every
// physical value is checked by the owning module when the file is loaded.

#include <optional>
#include <string>
#include <vector>

#include "qrev/error.hpp"
#include "qrev/recurrence.hpp"

namespace qrev {

/// Malformed document: bad JSON, unknown key or wrong value type.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct LatticeSection {
  double V0 = 16.0;
  double kbar = 0.5;
  double lambda = 1.5;
};

struct ResonanceSection {
  int N = 1;
  int M = 0;
  int l = 0;
  int n = 2;
  Regime regime = Regime::deep;
  /// Coupling V; unset means the deep-lattice harmonic estimate.
  std::optional<double> V;
};

struct PacketSection {
  double z0 = 1.5707963267948966;
  /// Unset: the momentum whose mean undriven energy is the centre of band
  /// resonance.n.
  std::optional<double> p0;
  double delta_z = 0.5;
  /// Unset: the minimum-uncertainty value kbar / (2 delta_z).
  std::optional<double> delta_p;
};

struct EvolveSection {
  int cells = 16;
  int points = 2048;
  double dt = 0.012566370614359173;  // 2 pi / 500
  long n_steps = 25000;
  std::string frame = "lab";
  std::string integrator = "strang";
  double norm_tolerance = 1e-8;
  long density_stride = 0;
  int density_subsample = 1;
  long ipr_stride = 0;
  PacketSection packet;
};

struct PoincareSection {
  int seeds = 40;
  long periods = 300;
  int steps_per_period = 500;
  double p_max = 3.0;
  /// Explicit seeds (z, p); replaces the default grid when non-empty.
  std::vector<std::pair<double, double>> points;
};

struct SweepSection {
  double lambda_min = 0.0;
  double lambda_max = 6.0;
  int n_points = 50;
  std::vector<std::string> methods = {"lattice_deep"};
};

struct RunConfig {
  LatticeSection lattice;
  ResonanceSection resonance;
  EvolveSection evolve;
  PoincareSection poincare;
  SweepSection sweep;

  /// Runs the owning modules' checks; throws DomainError.
  void validate() const;

  LatticeParams lattice_params() const;
  /// Model for resonance.n of the configured lattice.
  ResonanceModel resonance_model() const;
};

/// Parses and validates a document.  Throws ConfigError or DomainError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical JSON (sorted keys, every field present).
std::string to_json(const RunConfig& config);

/// 16 hex digits of the FNV-1a hash of to_json(config).
std::string config_hash(const RunConfig& config);

/// FNV-1a 64-bit hash of arbitrary text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace qrev
