#include "qrev/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "qrev/classical.hpp"
#include "qrev/error.hpp"
#include "qrev/io.hpp"
#include "qrev/mathieu.hpp"
#include "qrev/quantum.hpp"
#include "qrev/recurrence.hpp"
#include "qrev/scenario.hpp"

namespace qrev {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ValidationRow make_row(const char* source, double measured, double predicted, double err, double tol) {
  ValidationRow r;
  r.source = source;
  r.measured = measured;
  r.predicted = predicted;
  r.rel_error = err;
  r.tolerance = tol;
  return r;
}

// Exact characteristic values a_nu(0) = nu^2, b_nu(0) = nu^2 and interlacing.
ValidationRow mathieu_exactness() {
  double worst = 0.0;
  for (int nu = 0; nu <= 10; ++nu) {
    worst = std::max(worst, std::abs(char_value(MathieuOrder::even(nu), 0.0) - nu * nu));
    if (nu >= 1) worst = std::max(worst, std::abs(char_value(MathieuOrder::odd(nu), 0.0) - nu * nu));
  }
  int violations = 0;
  int checked = 0;
  for (double q : {0.1, 1.0, 10.0, 100.0}) {
    for (int nu = 0; nu <= 20; ++nu) {
      ++checked;
      if (char_value(MathieuOrder::even(nu), q) > char_value(MathieuOrder::odd(nu + 1), q)) ++violations;
    }
  }
  ValidationRow r = make_row("a_nu(0) = nu^2", worst, 0.0, worst, 1e-12);
  r.pass = worst <= 1e-12 && violations == 0;
  r.note = "max |a_nu(0) - nu^2| over nu <= 10; interlacing violations " + std::to_string(violations) + " of " +
           std::to_string(checked);
  return r;
}

// Small-q series at (5, 0.5) within 1e-3; large-q series at q = 100, nu <= 3
// within 1e-2.
ValidationRow series_agreement() {
  const double exact = char_value(MathieuOrder::even(5), 0.5);
  const double series = char_value(MathieuOrder::even(5), 0.5, MathieuMethod::series_small_q);
  const double small_err = rel(series, exact);
  double large_err = 0.0;
  for (int nu = 0; nu <= 3; ++nu) {
    const double e = char_value(MathieuOrder::even(nu), 100.0);
    large_err = std::max(large_err, rel(char_value(MathieuOrder::even(nu), 100.0, MathieuMethod::series_large_q), e));
  }
  ValidationRow r = make_row("exact a_5(0.5)", series, exact, small_err, 1e-3);
  r.pass = small_err < 1e-3 && large_err < 1e-2;
  r.note = "large-q series worst relative error at q=100, nu<=3: " + num(large_err) + " (tol 1e-2)";
  return r;
}

// Asymptotic band width vs exact b_{nu+1} - a_nu at q = 50 within a factor 1.5.
ValidationRow band_width_asymptotics() {
  double worst = 1.0;
  std::string note;
  for (int nu : {0, 1}) {
    const double exact = char_value(MathieuOrder::odd(nu + 1), 50.0) - char_value(MathieuOrder::even(nu), 50.0);
    const double ratio = band_width(nu, 50.0) / exact;
    worst = std::max({worst, ratio, 1.0 / ratio});
    note += "nu=" + std::to_string(nu) + " ratio " + num(ratio) + "; ";
  }
  ValidationRow r = make_row("exact b_{nu+1} - a_nu", worst, 1.0, worst, 1.5);
  r.pass = worst < 1.5;
  r.note = note + "compared value is max(ratio, 1/ratio)";
  return r;
}

// Quasi-energy spacing deep in the resonance against kbar omega_h at q = 200.
ValidationRow harmonic_limit() {
  const ResonanceModel m = make_resonance_model(1, 0, 0.5, 1.0, 3.0, 1.0, 12.5);
  const double expected = m.kbar * harmonic_frequency(m);
  double worst = 0.0;
  double spacing0 = 0.0;
  for (int nu = 0; nu < 2; ++nu) {
    const double spacing = quasi_energy(m, 0, nu + 1).unwrapped - quasi_energy(m, 0, nu).unwrapped;
    if (nu == 0) spacing0 = spacing;
    worst = std::max(worst, rel(spacing, expected));
  }
  ValidationRow r = make_row("kbar omega_h", spacing0, expected, worst, 0.05);
  r.pass = worst < 0.05;
  r.note = "q=" + num(m.q) + ", spacings nu 0->1 and 1->2";
  return r;
}

// lambda -> 0 limit of the delicate forms, and the exact sqrt(lambda)
// scaling of the strong-coupling super revival.
ValidationRow limit_recovery() {
  const ResonanceModel shallow =
      lattice_resonance_model({2.0, 0.5, 1e-8}, 2, 1, 0, 0, Regime::shallow, CouplingMode::user_supplied, 1.0);
  const DelicateTimes t = times_delicate(shallow);
  const ReferenceTimes ref = reference_times(shallow);
  const double err = std::max(rel(t.times.t_cl, ref.t_cl * shallow.Delta), rel(t.times.t_rev, ref.t_rev));

  auto deep = [](double lambda) {
    return lattice_resonance_model({16.0, 0.5, lambda}, 2, 1, 0, 0, Regime::deep, CouplingMode::harmonic_approx);
  };
  const double ratio = times_robust(deep(4.0), RobustForm::primary_simplified).t_spr /
                       times_robust(deep(1.0), RobustForm::primary_simplified).t_spr;
  const double scaling_err = std::abs(ratio - 2.0) / 2.0;
  ValidationRow r = make_row("unmodulated references", t.times.t_rev, ref.t_rev, err, 1e-6);
  r.pass = err < 1e-6 && scaling_err <= 4.0 * std::numeric_limits<double>::epsilon();
  r.note = "T_spr(4 lambda)/T_spr(lambda) = " + format_double(ratio) + " (exact 2)";
  return r;
}

// 2 pi / Omega_{1,2} from exact Mathieu derivatives vs the strong-coupling
// closed forms.
ValidationRow cross_method() {
  double worst = 0.0;
  double shown_m = 0.0;
  double shown_p = 0.0;
  for (double q : {100.0, 200.0, 400.0}) {
    for (double nu : {0.0, 1.0, 2.0}) {
      const double zeta = 1.46875;
      const double kbar = 0.5;
      const double beta = nu / 2.0;
      const ResonanceModel m = make_resonance_model(1, 0, kbar, zeta, 1.0 + beta * zeta * kbar, 1.0,
                                                    q * zeta * kbar * kbar / 4.0);
      const TimeScales numeric = times_numeric(m, 0, nu);
      const TimeScales closed = times_robust(m, RobustForm::general_N);
      const double e = std::max(rel(numeric.t_cl, closed.t_cl), rel(numeric.t_rev, closed.t_rev));
      if (e >= worst) {
        worst = e;
        shown_m = numeric.t_rev;
        shown_p = closed.t_rev;
      }
    }
  }
  ValidationRow r = make_row("times_robust(general_N)", shown_m, shown_p, worst, 0.05);
  r.pass = worst < 0.05;
  r.note = "q in {100,200,400}, nu in {0,1,2}, alpha=0; worst of T_cl and T_rev";
  return r;
}

// Recurrence times of the propagated lattice packet against the closed forms.
ValidationRow simulation_vs_theory() {
  const RunConfig config = figure4_config();
  const Prediction pred = predicted_times(config);
  const EvolveRun run = run_evolve(config);
  std::ostringstream note;
  note << "prediction cl " << num(pred.times.t_cl) << " rev " << num(pred.times.t_rev) << " spr "
       << num(pred.times.t_spr);
  if (run.hints.centred)
    note << "; not a valid ordering, detection hints at l+beta=0: cl " << num(run.hints.times.t_cl) << " rev "
         << num(run.hints.times.t_rev) << " spr " << num(run.hints.times.t_spr);
  note << "; packet p0 " << num(run.packet.p0);
  if (!run.recurrences) {
    ValidationRow r = make_row("driven_lattice_times(deep)", std::nan(""), pred.times.t_rev, std::nan(""), 0.2);
    r.note = note.str() + "; detection failed: " + run.detection_note;
    return r;
  }
  const RecurrenceEstimate& e = *run.recurrences;
  const double cl_err = e.cl.found ? rel(e.cl.estimate, pred.times.t_cl) : std::numeric_limits<double>::infinity();
  const double rev_err = e.rev.found ? rel(e.rev.estimate, pred.times.t_rev) : std::numeric_limits<double>::infinity();
  const bool spr_ok = e.spr.found && e.spr.prominence > 0.1;
  ValidationRow r = make_row("driven_lattice_times(deep)", e.rev.found ? e.rev.estimate : std::nan(""),
                             pred.times.t_rev, rev_err, 0.2);
  r.pass = cl_err < 0.1 && rev_err < 0.2 && spr_ok;
  note << "; measured cl " << (e.cl.found ? num(e.cl.estimate) : "none") << " (err " << num(cl_err)
       << ", tol 0.1), rev " << (e.rev.found ? num(e.rev.estimate) : "none") << " prominence " << num(e.rev.prominence)
       << ", spr " << (e.spr.found ? num(e.spr.estimate) : "none") << " prominence " << num(e.spr.prominence)
       << " (need > 0.1)";
  r.note = note.str();
  return r;
}

// Undriven revival of the band-2 packet against 4 pi (1 - 3s/16 q0).
ValidationRow undriven_revival() {
  RunConfig config = figure4_config();
  config.lattice.lambda = 0.0;
  const TimeScales pred = predicted_times(config).times;
  config.evolve.n_steps = static_cast<long>(std::ceil(3.0 * pred.t_rev / config.evolve.dt));
  const EvolveRun run = run_evolve(config);
  ValidationRow r = make_row("undriven_times(deep)", std::nan(""), pred.t_rev, std::numeric_limits<double>::infinity(), 0.1);
  std::ostringstream note;
  note << "packet p0 " << num(run.packet.p0);
  if (run.recurrences && run.recurrences->rev.found) {
    r.measured = run.recurrences->rev.estimate;
    r.rel_error = rel(r.measured, pred.t_rev);
    note << "; revival prominence " << num(run.recurrences->rev.prominence);
  } else {
    note << "; no revival detected in [0.5, 1.5] x prediction";
  }
  r.pass = r.rel_error < 0.1;
  r.note = note.str();
  return r;
}

struct Hygiene {
  double norm_per_1e4 = 0.0;
  double dt_change = 0.0;
  double eigen_infidelity = 0.0;
};

Hygiene propagator_hygiene(Integrator integrator) {
  Hygiene h;
  RunConfig config = figure4_config();
  config.evolve.integrator = to_string(integrator);
  config.evolve.n_steps = 25000;  // tau = 50 drive periods at dt = 2 pi / 500
  double final_abs2[2];
  for (int k = 0; k < 2; ++k) {
    RunConfig c = config;
    c.evolve.dt = config.evolve.dt / (k + 1);
    c.evolve.n_steps = config.evolve.n_steps * (k + 1);
    const SpatialGrid grid = SpatialGrid::periodic(c.evolve.cells, c.evolve.points);
    const DriveConfig drive = drive_config(c);
    const PacketSetup packet = prepare_packet(c, grid, drive);
    const TrajectoryRecord rec = evolve(packet.psi, drive);
    final_abs2[k] = std::norm(rec.autocorr.back());
    if (k == 0) {
      double drift = 0.0;
      for (double n : rec.norm_log) drift = std::max(drift, std::abs(n - 1.0));
      h.norm_per_1e4 = drift * 1e4 / static_cast<double>(drive.n_steps);
    }
  }
  h.dt_change = std::abs(final_abs2[1] - final_abs2[0]);

  // Undriven grid propagation against the exact eigen-expansion.
  const SpatialGrid grid = SpatialGrid::periodic(4, 512);
  const Eigenbasis basis = undriven_eigenbasis(grid, 2.0, 0.5, 128);
  RunConfig still = config;
  still.lattice.lambda = 0.0;
  const WaveFunction psi = init_gaussian(grid, kPi / 2.0,
                                         band_centre_momentum(grid, 2.0, 0.5, 2, kPi / 2.0, 0.5), 0.5, 0.5);
  DriveConfig drive = drive_config(still);
  drive.n_steps = 5000;  // tau = 10 drive periods
  const TrajectoryRecord rec = evolve(psi, drive);
  const WaveFunction exact = evolve_in_basis(basis, expand(basis, psi), rec.final_state.time, 0.5);
  h.eigen_infidelity = 1.0 - std::norm(exact.overlap(rec.final_state));
  return h;
}

ValidationRow propagator_hygiene() {
  const Hygiene y = propagator_hygiene(Integrator::yoshida4);
  const Hygiene s = propagator_hygiene(Integrator::strang);
  ValidationRow r = make_row("dt-halved propagation", y.dt_change, 0.0, y.dt_change, 1e-6);
  r.pass = y.norm_per_1e4 < 1e-10 && y.dt_change < 1e-6 && y.eigen_infidelity < 1e-8;
  r.note = "yoshida4: norm drift/1e4 steps " + num(y.norm_per_1e4) + " (tol 1e-10), |d|C|^2| " + num(y.dt_change) +
           ", eigen-expansion 1-F " + num(y.eigen_infidelity) + " (tol 1e-8); strang: " + num(s.norm_per_1e4) + ", " +
           num(s.dt_change) + ", " + num(s.eigen_infidelity);
  return r;
}

// Lab-frame and tilted-frame propagation agree after the frame transform.
ValidationRow frame_equivalence() {
  RunConfig config = figure4_config();
  config.evolve.cells = 64;
  config.evolve.points = 8192;
  config.evolve.n_steps = 2500;  // 5 drive periods
  const SpatialGrid grid = SpatialGrid::periodic(config.evolve.cells, config.evolve.points);
  DriveConfig tilted = drive_config(config);
  tilted.frame = Frame::comoving_tilted;
  const PacketSetup packet = prepare_packet(config, grid, tilted);
  DriveConfig lab = tilted;
  lab.frame = Frame::lab_phase_modulated;
  const WaveFunction start_lab = frame_transform(packet.psi, 0.0, lab, FrameDirection::comoving_to_lab);
  const TrajectoryRecord a = evolve(packet.psi, tilted);
  const TrajectoryRecord b = evolve(start_lab, lab);
  const WaveFunction back =
      frame_transform(b.final_state, b.final_state.time, lab, FrameDirection::lab_to_comoving);
  const double infidelity = 1.0 - std::norm(a.final_state.overlap(back));
  ValidationRow r = make_row("unitary frame map", 1.0 - infidelity, 1.0, infidelity, 1e-4);
  r.pass = infidelity < 1e-4;
  r.note = "64 cells x 8192 points, 5 periods; compared value is 1 - fidelity";
  return r;
}

// Energy conservation, resonance island persistence, stochastic-layer growth.
ValidationRow classical_suite() {
  const double V0t = 2.0;
  SectionConfig undriven;
  undriven.V0_tilde = V0t;
  undriven.n_periods = 1000;
  undriven.initial_conditions = default_seeds(3.0);
  double energy_err = 0.0;
  const auto points = poincare_section(undriven);
  for (const SectionPoint& s : points) {
    const double e0 = undriven_energy(undriven.initial_conditions[s.seed], V0t);
    energy_err = std::max(energy_err, std::abs(undriven_energy(s.point, V0t) - e0));
  }

  const IslandCentre island = find_island_centre(1.5, V0t);
  const Persistence persist = island_persistence(island.centre, 1.5, V0t, 500);

  const PhasePoint seed = separatrix_seed(V0t);
  const double cov_low = section_coverage(seed, 1.5, V0t, 20000);
  const double cov_high = section_coverage(seed, 3.0, V0t, 20000);

  ValidationRow r = make_row("energy conservation", energy_err, 0.0, energy_err, 1e-8);
  r.pass = energy_err < 1e-8 && persist.bounded && cov_high > cov_low;
  r.note = "island centre (" + num(island.centre.z) + ", " + num(island.centre.p) + ") max excursion " +
           num(persist.max_distance) + " over 500 periods (radius 0.2); coverage lambda=1.5 " + num(cov_low) +
           ", lambda=3 " + num(cov_high) + " (20000 periods)";
  return r;
}

// Monotonicity of the delicate and robust sweeps.
ValidationRow sweep_trends() {
  std::vector<double> weak;
  std::vector<double> strong;
  for (int i = 0; i < 50; ++i) {
    weak.push_back(0.002 + 0.1 * i / 49.0);
    strong.push_back(2.0 + 4.0 * i / 49.0);
  }
  const ResonanceModel shallow =
      lattice_resonance_model({2.0, 0.5, 0.0}, 2, 1, 0, 0, Regime::shallow, CouplingMode::user_supplied, 1.0);
  const ResonanceModel deep =
      lattice_resonance_model({16.0, 0.5, 0.0}, 2, 1, 0, 0, Regime::deep, CouplingMode::harmonic_approx);
  const auto delicate = sweep_times(shallow, weak, {TimeMethod::lattice_shallow});
  const auto robust = sweep_times(deep, strong, {TimeMethod::lattice_deep});
  int bad = 0;
  for (std::size_t i = 1; i < 50; ++i) {
    if (!delicate[i].ok || !robust[i].ok || !delicate[i - 1].ok || !robust[i - 1].ok) {
      ++bad;
      continue;
    }
    if (!(delicate[i].times.t_cl > delicate[i - 1].times.t_cl)) ++bad;
    if (!(delicate[i].times.t_spr < delicate[i - 1].times.t_spr)) ++bad;
    if (!(robust[i].times.t_cl < robust[i - 1].times.t_cl)) ++bad;
    if (!(robust[i].times.t_spr > robust[i - 1].times.t_spr)) ++bad;
  }
  ValidationRow r = make_row("stated trends", bad, 0.0, bad, 0.0);
  r.pass = bad == 0;
  r.note = "monotonicity violations over 4 x 49 steps; delicate lambda in [0.002, 0.102] (V0=2), robust in [2, 6] (V0=16)";
  return r;
}

// Wavelet splitting and re-localisation seen in the inverse participation
// ratio.
ValidationRow spatiotemporal_revival() {
  const RunConfig config = figure2_config();
  const EvolveRun run = run_evolve(config);
  const auto& ipr = run.record.ipr;
  const auto& times = run.record.ipr_times;
  ValidationRow r = make_row("IPR dip then recovery", std::nan(""), 0.9, std::nan(""), 0.9);
  std::ostringstream note;
  note << "delta_z " << num(run.packet.delta_z) << " (minimum uncertainty with delta_p 0.1)";
  if (!run.recurrences || !run.recurrences->rev.found) {
    note << "; no revival detected";
    r.note = note.str();
    return r;
  }
  const double t_rev = run.recurrences->rev.estimate;
  const double lo = 0.5 * t_rev;
  const double hi = 1.5 * t_rev;
  const double i0 = ipr.front();
  double dip = std::numeric_limits<double>::infinity();
  std::size_t dip_at = 0;
  for (std::size_t k = 0; k < ipr.size() && times[k] <= hi; ++k) {
    if (ipr[k] / i0 < dip) {
      dip = ipr[k] / i0;
      dip_at = k;
    }
  }
  double recovery = 0.0;
  for (std::size_t k = dip_at; k < ipr.size() && times[k] <= hi; ++k)
    if (times[k] >= lo) recovery = std::max(recovery, ipr[k] / i0);
  r.measured = recovery;
  r.rel_error = recovery;
  r.pass = dip < 0.5 && recovery > 0.9;
  note << "; detected revival " << num(t_rev) << " (prominence " << num(run.recurrences->rev.prominence)
       << "), window [" << num(lo) << ", " << num(hi) << "]; IPR minimum " << num(dip) << "x at tau "
       << num(times[dip_at]) << " (need < 0.5), best later recovery " << num(recovery) << "x (need > 0.9)";
  r.note = note.str();
  return r;
}

struct Check {
  const char* name;
  ValidationRow (*run)();
};

const Check kChecks[] = {
    {"mathieu_exactness", mathieu_exactness},
    {"series_agreement", series_agreement},
    {"band_width_asymptotics", band_width_asymptotics},
    {"harmonic_limit", harmonic_limit},
    {"limit_recovery", limit_recovery},
    {"cross_method_consistency", cross_method},
    {"simulation_vs_theory", simulation_vs_theory},
    {"undriven_revival", undriven_revival},
    {"propagator_hygiene", propagator_hygiene},
    {"frame_equivalence", frame_equivalence},
    {"classical_suite", classical_suite},
    {"sweep_trends", sweep_trends},
    {"spatiotemporal_revival", spatiotemporal_revival},
};

}  // namespace

bool ValidationReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.pass; });
}

int validation_count() { return static_cast<int>(std::size(kChecks)); }

const char* validation_name(int id) {
  if (id < 1 || id > validation_count()) throw DomainError("no validation check " + std::to_string(id));
  return kChecks[id - 1].name;
}

ValidationRow run_validation(int id) {
  const char* name = validation_name(id);
  const auto start = std::chrono::steady_clock::now();
  ValidationRow row;
  try {
    row = kChecks[id - 1].run();
  } catch (const Error& e) {
    row.source = "error";
    row.measured = row.predicted = row.rel_error = std::nan("");
    row.pass = false;
    row.note = std::string("error: ") + e.what();
  }
  row.id = id;
  row.name = name;
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ValidationReport run_validation(const std::vector<int>& ids) {
  ValidationReport report;
  if (ids.empty()) {
    for (int id = 1; id <= validation_count(); ++id) report.rows.push_back(run_validation(id));
  } else {
    for (int id : ids) report.rows.push_back(run_validation(id));
  }
  return report;
}

std::string format_row(const ValidationRow& row) {
  char head[96];
  std::snprintf(head, sizeof head, "%s  %2d %-26s", row.pass ? "PASS" : "FAIL", row.id, row.name.c_str());
  std::ostringstream out;
  out << head << " measured=" << num(row.measured) << " predicted=" << num(row.predicted)
      << " err=" << num(row.rel_error) << " tol=" << num(row.tolerance) << " [" << row.source << "]"
      << " (" << row.note << ") " << num(row.seconds) << "s";
  return out.str();
}

}  // namespace qrev
