#include "qrev/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qrev/error.hpp"
#include "qrev/support.hpp"

namespace qrev {

namespace {

constexpr double kPi = std::numbers::pi;

bool usable(const TimeScales& t) {
  return std::isfinite(t.t_cl) && std::isfinite(t.t_rev) && t.t_cl > 0.0 && t.t_rev > t.t_cl && t.t_spr > t.t_rev;
}

LatticeRegime lattice_regime(Regime r) { return r == Regime::deep ? LatticeRegime::deep : LatticeRegime::shallow; }

long steps_for(double span, double dt) { return static_cast<long>(std::ceil(span / dt)); }

}  // namespace

double band_centre_momentum(const SpatialGrid& grid, double V0_tilde, double kbar, int band, double z0,
                            double delta_z) {
  if (band < 0) throw DomainError("band must be >= 0");
  const int per_band = 2 * grid.cells;
  const Eigenbasis basis = undriven_eigenbasis(grid, V0_tilde, kbar, per_band * (band + 1));
  const std::vector<double> centres = band_centres(basis);
  if (static_cast<int>(centres.size()) <= band) throw DomainError("grid too coarse to resolve the requested band");
  const double dp = kbar / (2.0 * delta_z);
  const double rest = dp * dp / 2.0 + V0_tilde / 2.0 * std::cos(2.0 * z0) * std::exp(-2.0 * delta_z * delta_z);
  const double kinetic = centres[band] - rest;
  if (kinetic <= 0.0) {
    warn("band centre lies below the packet's zero-momentum energy; using p0 = 0");
    return 0.0;
  }
  return std::sqrt(2.0 * kinetic);
}

DriveConfig drive_config(const RunConfig& config) {
  DriveConfig d;
  d.V0_tilde = config.lattice_params().V0_tilde();
  d.kbar = config.lattice.kbar;
  d.lambda = config.lattice.lambda;
  d.frame = parse_frame(config.evolve.frame.c_str());
  d.integrator = parse_integrator(config.evolve.integrator.c_str());
  d.norm_tolerance = config.evolve.norm_tolerance;
  d.dt = config.evolve.dt;
  d.n_steps = config.evolve.n_steps;
  d.validate();
  return d;
}

PacketSetup prepare_packet(const RunConfig& config, const SpatialGrid& grid, const DriveConfig& drive) {
  const PacketSection& spec = config.evolve.packet;
  PacketSetup out;
  out.z0 = spec.z0;
  out.delta_z = spec.delta_z;
  out.delta_p = spec.delta_p.value_or(minimum_uncertainty_width(drive.kbar, spec.delta_z));
  out.uncertainty_product = out.delta_z * out.delta_p / (drive.kbar / 2.0);
  if (std::abs(out.uncertainty_product - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "packet: delta_z * delta_p = " << out.uncertainty_product
        << " kbar/2; the Gaussian is built from delta_z, its momentum spread is kbar/(2 delta_z)";
    warn(msg.str());
  }
  out.p0 = spec.p0 ? *spec.p0
                   : band_centre_momentum(grid, drive.V0_tilde, drive.kbar, config.resonance.n, spec.z0, spec.delta_z);
  WaveFunction phi = init_gaussian(grid, out.z0, out.p0, out.delta_z, drive.kbar);
  out.psi = drive.frame == Frame::lab_phase_modulated && drive.lambda != 0.0
                ? frame_transform(phi, 0.0, drive, FrameDirection::comoving_to_lab)
                : std::move(phi);
  return out;
}

Prediction predicted_times(const RunConfig& config) {
  Prediction p;
  if (config.lattice.lambda == 0.0) {
    p.times = undriven_times(config.lattice_params(), config.resonance.n, config.resonance.regime);
    p.source = std::string("undriven_times(") + to_string(config.resonance.regime) + ")";
  } else {
    const ResonanceModel model = config.resonance_model();
    p.times = driven_lattice_times(model, lattice_regime(config.resonance.regime));
    p.source = std::string("driven_lattice_times(") + to_string(config.resonance.regime) + ")";
  }
  return p;
}

Prediction detection_hints(const RunConfig& config) {
  Prediction p = predicted_times(config);
  if (usable(p.times) || config.lattice.lambda == 0.0) return p;
  ResonanceModel centre = config.resonance_model();
  centre.l = 0;
  centre.beta = 0.0;
  p.times = driven_lattice_times(centre, lattice_regime(config.resonance.regime));
  p.source += " at l+beta=0";
  p.centred = true;
  return p;
}

EvolveRun run_evolve(const RunConfig& config) {
  EvolveRun run;
  run.grid = SpatialGrid::periodic(config.evolve.cells, config.evolve.points);
  run.drive = drive_config(config);
  run.packet = prepare_packet(config, run.grid, run.drive);
  RecordSpec spec;
  spec.density_stride = config.evolve.density_stride;
  spec.density_subsample = config.evolve.density_subsample;
  spec.ipr_stride = config.evolve.ipr_stride;
  run.record = evolve(run.packet.psi, run.drive, spec);
  try {
    run.hints = detection_hints(config);
    if (run.hints.centred) warn("model prediction is not a valid time ordering; detection hints use l+beta = 0");
    run.recurrences = detect_recurrences(run.record, {run.hints.times.t_cl, run.hints.times.t_rev, run.hints.times.t_spr});
  } catch (const DomainError& e) {
    run.detection_note = e.what();
    warn(std::string("recurrence detection skipped: ") + e.what());
  }
  return run;
}

Metadata run_metadata(const RunConfig& config, const std::string& command) {
  return {{"command", command},
          {"config_hash", config_hash(config)},
          {"grid", std::to_string(config.evolve.cells) + " cells x " + std::to_string(config.evolve.points) + " points"},
          {"dt", format_double(config.evolve.dt)},
          {"n_steps", std::to_string(config.evolve.n_steps)},
          {"frame", config.evolve.frame},
          {"integrator", config.evolve.integrator},
          {"V0_tilde", format_double(config.lattice_params().V0_tilde())},
          {"kbar", format_double(config.lattice.kbar)},
          {"lambda", format_double(config.lattice.lambda)},
          {"time_units", "scaled (drive period 2 pi)"}};
}

std::vector<std::string> write_evolve_outputs(const EvolveRun& run, const RunConfig& config,
                                              const std::string& directory, const std::string& command) {
  Metadata meta = run_metadata(config, command);
  meta.emplace_back("packet", "z0=" + format_double(run.packet.z0) + " p0=" + format_double(run.packet.p0) +
                                  " delta_z=" + format_double(run.packet.delta_z) +
                                  " delta_p=" + format_double(run.packet.delta_p) +
                                  " product/(kbar/2)=" + format_double(run.packet.uncertainty_product));
  std::vector<std::string> written;

  CsvWriter autocorr(output_path(directory, "autocorr.csv"), meta, {"tau", "re_C", "im_C", "abs2_C"});
  for (std::size_t i = 0; i < run.record.times.size(); ++i) {
    const cplx c = run.record.autocorr[i];
    autocorr.row({run.record.times[i], c.real(), c.imag(), std::norm(c)});
  }
  written.push_back(autocorr.path());

  Metadata rmeta = meta;
  rmeta.emplace_back("prediction", run.hints.source);
  if (!run.detection_note.empty()) rmeta.emplace_back("detection", run.detection_note);
  CsvWriter rec(output_path(directory, "recurrences.csv"), rmeta,
                {"scale", "estimate", "prominence", "found", "hint"});
  if (run.recurrences) {
    const auto& r = *run.recurrences;
    const std::pair<const char*, const RecurrenceScale*> scales[] = {{"cl", &r.cl}, {"rev", &r.rev}, {"spr", &r.spr}};
    const double predicted[] = {run.hints.times.t_cl, run.hints.times.t_rev, run.hints.times.t_spr};
    for (int k = 0; k < 3; ++k) {
      const RecurrenceScale& s = *scales[k].second;
      rec.row({std::string(scales[k].first), s.found ? s.estimate : std::nan(""), s.prominence, long(s.found),
               predicted[k]});
    }
  }
  written.push_back(rec.path());

  if (!run.record.density.empty()) {
    CsvWriter density(output_path(directory, "density.csv"), meta, {"tau", "z", "abs2_psi"});
    const int sub = config.evolve.density_subsample;
    for (std::size_t k = 0; k < run.record.density.size(); ++k)
      for (std::size_t i = 0; i < run.record.density[k].size(); ++i)
        density.row({run.record.density_times[k], run.grid.z(static_cast<int>(i) * sub), run.record.density[k][i]});
    written.push_back(density.path());
  }
  if (!run.record.ipr.empty()) {
    CsvWriter ipr(output_path(directory, "ipr.csv"), meta, {"tau", "ipr"});
    for (std::size_t k = 0; k < run.record.ipr.size(); ++k) ipr.row({run.record.ipr_times[k], run.record.ipr[k]});
    written.push_back(ipr.path());
  }
  return written;
}

SectionConfig section_config(const RunConfig& config, double lambda) {
  SectionConfig s;
  s.lambda = lambda;
  s.V0_tilde = config.lattice_params().V0_tilde();
  s.n_periods = config.poincare.periods;
  s.steps_per_period = config.poincare.steps_per_period;
  if (config.poincare.points.empty()) {
    s.initial_conditions = default_seeds(config.poincare.p_max, config.poincare.seeds);
  } else {
    for (const auto& [z, p] : config.poincare.points) s.initial_conditions.push_back({z, p, 0.0, 0});
  }
  s.validate();
  return s;
}

double coupling_for_q(const RunConfig& config, double q) {
  RunConfig unit = config;
  unit.resonance.V = 1.0;
  const ResonanceModel m = unit.resonance_model();
  if (!(m.q > 0.0)) throw DomainError("model has no positive Mathieu parameter");
  return q / m.q;
}

RunConfig figure2_config() {
  RunConfig c;
  c.lattice = {LatticeParams::from_scaled_depth(0.36, 0.16, 3.0).V0, 0.16, 3.0};
  c.resonance.n = 2;
  c.resonance.V = coupling_for_q(c, 85.14);
  c.evolve.packet.z0 = kPi / 2.0;
  c.evolve.packet.p0 = 0.0;
  c.evolve.packet.delta_p = 0.1;
  c.evolve.packet.delta_z = minimum_uncertainty_width(0.16, 0.1);
  c.evolve.ipr_stride = 50;
  c.evolve.density_stride = 125;
  c.evolve.density_subsample = 4;
  c.evolve.n_steps = steps_for(2.0 * detection_hints(c).times.t_rev, c.evolve.dt);
  c.validate();
  return c;
}

RunConfig figure4_config() {
  RunConfig c;
  c.lattice = {16.0, 0.5, 1.5};
  c.resonance.n = 2;
  c.evolve.packet.z0 = kPi / 2.0;
  c.evolve.packet.delta_z = 0.5;
  c.evolve.packet.delta_p = 0.5;
  c.evolve.n_steps = steps_for(1.6 * detection_hints(c).times.t_spr, c.evolve.dt);
  c.validate();
  return c;
}

namespace {

struct PanelSource {
  const char* lattice;
  ResonanceModel model;
  TimeMethod method;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<std::string> figure1(const std::string& dir) {
  const ResonanceModel shallow =
      lattice_resonance_model({2.0, 0.5, 0.0}, 2, 1, 0, 0, Regime::shallow, CouplingMode::user_supplied, 1.0);
  const ResonanceModel deep =
      lattice_resonance_model({16.0, 0.5, 0.0}, 2, 1, 0, 0, Regime::deep, CouplingMode::harmonic_approx);
  const std::vector<double> weak = linspace(0.002, 0.102, 50);
  const std::vector<double> strong = linspace(2.0, 6.0, 50);
  const std::vector<PanelSource> delicate = {{"shallow", shallow, TimeMethod::lattice_shallow},
                                             {"deep", deep, TimeMethod::delicate_general}};
  const std::vector<PanelSource> robust = {{"shallow", shallow, TimeMethod::robust_general},
                                           {"deep", deep, TimeMethod::lattice_deep}};
  struct Panel {
    const char* name;
    int scale;  // 0 cl, 1 rev, 2 spr
    bool strong;
  };
  const Panel panels[] = {{"a", 0, false}, {"b", 0, true}, {"c", 1, false},
                          {"d", 1, true},  {"e", 2, false}, {"f", 2, true}};
  const char* scale_names[] = {"t_cl", "t_rev", "t_spr"};

  std::vector<std::string> written;
  for (const Panel& panel : panels) {
    const auto& sources = panel.strong ? robust : delicate;
    const auto& lambdas = panel.strong ? strong : weak;
    Metadata meta = {{"command", "reproduce-figure 1"},
                     {"panel", panel.name},
                     {"quantity", scale_names[panel.scale]},
                     {"coupling", panel.strong ? "strong (q >> 1)" : "weak (q < 1)"},
                     {"shallow_lattice", "V0=2 E_r, kbar=0.5, band 2, V=1"},
                     {"deep_lattice", "V0=16 E_r, kbar=0.5, band 2, harmonic coupling"},
                     {"time_units", "scaled (drive period 2 pi)"}};
    std::string recipe;
    for (const auto& [key, value] : meta) recipe += key + "=" + value + ";";
    meta.insert(meta.begin() + 1, {"config_hash", fnv1a_hex(recipe)});
    CsvWriter csv(output_path(dir, std::string("figure1_") + panel.name + ".csv"), meta,
                  {"lambda", "lattice", "method", "value", "q", "flags"});
    for (const PanelSource& src : sources) {
      for (const SweepRow& row : sweep_times(src.model, lambdas, {src.method})) {
        const double values[] = {row.times.t_cl, row.times.t_rev, row.times.t_spr};
        csv.row({row.lambda, std::string(src.lattice), std::string(to_string(row.method)),
                 row.ok ? values[panel.scale] : std::nan(""), row.q, row.flags});
      }
    }
    written.push_back(csv.path());
  }
  return written;
}

std::vector<std::string> figure3(const std::string& dir) {
  RunConfig c;
  c.lattice = {16.0, 0.5, 0.0};
  std::vector<std::string> written;
  for (double lambda : {0.0, 1.5, 3.0}) {
    c.lattice.lambda = lambda;
    const SectionConfig section = section_config(c, lambda);
    Metadata meta = run_metadata(c, "reproduce-figure 3");
    meta.emplace_back("seeds", std::to_string(section.initial_conditions.size()) + " on a grid, |p| <= " +
                                   format_double(c.poincare.p_max));
    meta.emplace_back("periods", std::to_string(section.n_periods));
    const std::string name = "figure3_lambda_" + format_double(lambda) + ".csv";
    CsvWriter csv(output_path(dir, name), meta, {"seed_id", "period_index", "z_mod", "p"});
    for (const SectionPoint& s : poincare_section(section))
      csv.row({long(s.seed), s.period, s.point.z, s.point.p});
    written.push_back(csv.path());
  }
  return written;
}

}  // namespace

std::vector<std::string> reproduce_figure(int figure, const std::string& directory) {
  switch (figure) {
    case 1:
      return figure1(directory);
    case 2:
    case 4: {
      const RunConfig config = figure == 2 ? figure2_config() : figure4_config();
      const EvolveRun run = run_evolve(config);
      const std::string sub = output_path(directory, figure == 2 ? "figure2" : "figure4");
      const std::string command = "reproduce-figure " + std::to_string(figure);
      std::vector<std::string> written = write_evolve_outputs(run, config, sub, command);
      if (figure == 2) {
        // Undriven companion panel.
        RunConfig undriven = config;
        undriven.lattice.lambda = 0.0;
        const EvolveRun still = run_evolve(undriven);
        for (auto& p : write_evolve_outputs(still, undriven, output_path(sub, "undriven"), command))
          written.push_back(p);
      }
      return written;
    }
    case 3:
      return figure3(directory);
    default:
      throw DomainError("figure must be 1, 2, 3 or 4");
  }
}

}  // namespace qrev
