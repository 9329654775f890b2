#include "qrev/recurrence.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "qrev/error.hpp"
#include "qrev/support.hpp"

namespace qrev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Soft validity notes go to the sweep row when one is being built, otherwise
// to stderr.
struct Notes {
  std::string* sink = nullptr;
  void add(const std::string& tag, const std::string& message) const {
    if (sink) {
      if (!sink->empty()) *sink += ';';
      *sink += tag;
    } else {
      warn(message);
    }
  }
};

double period(double frequency) { return frequency == 0.0 ? kInf : 2.0 * kPi / std::abs(frequency); }

DelicateTimes delicate_impl(const ResonanceModel& m) {
  if (!(m.q < 1.0)) throw DomainError("delicate forms need q < 1, got q = " + std::to_string(m.q));
  if (m.N != 1) throw DomainError("delicate closed forms are for the primary resonance N = 1");
  const double one_minus = 1.0 - m.mu1 * m.mu1;
  if (std::abs(one_minus) < 1e-12) throw SingularityError("mu1^2 = 1: resonance overlap");
  const double x = m.lambda * m.V * m.zeta * m.Delta * m.Delta / (m.omega * m.omega);
  DelicateTimes out;
  out.factors.m_cl = -0.5 * x * x / (one_minus * one_minus);
  out.factors.m_rev = 0.5 * x * x * (3.0 + m.mu1 * m.mu1) / (one_minus * one_minus * one_minus);
  const ReferenceTimes ref = reference_times(m);
  out.times.method = TimeMethod::delicate_general;
  out.times.t_cl = (1.0 - out.factors.m_cl) * ref.t_cl * m.Delta;
  out.times.t_rev = (1.0 - out.factors.m_rev) * ref.t_rev;
  const double denom = 2.0 * m.lambda * m.V * m.zeta * m.Delta * m.Delta * m.mu1;
  out.times.t_spr = denom == 0.0 ? kInf : kPi * m.omega * m.omega * std::pow(one_minus, 4) / denom;
  return out;
}

void check_robust(const ResonanceModel& m, const Notes& notes) {
  if (!(m.q >= 10.0)) throw DomainError("robust forms need q >= 10, got q = " + std::to_string(m.q));
  if (m.q < 25.0) notes.add("q_below_25", "robust forms used at q = " + std::to_string(m.q) + " < 25");
  if (std::abs(m.nu()) > crossover_order(m.q)) {
    notes.add("nu_above_crossover", "robust forms used at nu = " + std::to_string(m.nu()) +
                                        " above the crossover order " + std::to_string(crossover_order(m.q)));
  }
}

TimeScales robust_impl(const ResonanceModel& m, RobustForm form, const Notes& notes) {
  check_robust(m, notes);
  const double rq = std::sqrt(m.q);
  const double N2 = static_cast<double>(m.N) * m.N;
  TimeScales t;
  if (form == RobustForm::general_N) {
    t.method = TimeMethod::robust_general;
    const double s = 2.0 * m.nu() + 1.0;
    const double ak = m.alpha * m.kbar;
    t.t_cl = 4.0 * kPi /
             (N2 * m.kbar * m.zeta * rq * (1.0 - s / (8.0 * rq) - (3.0 * s * s + 3.0) / (256.0 * m.q)) + 2.0 * m.alpha);
    t.t_rev = 32.0 * kPi / (N2 * m.zeta * (1.0 + 3.0 * s / (16.0 * rq) + 8.0 * ak * rq - s * ak));
    if (m.alpha == 0.0) {
      t.t_spr = kInf;
    } else {
      t.t_spr = 32.0 * kPi / (N2 * m.zeta * m.alpha) * (1.0 - (1.0 + 1.5 * ak * s) / (8.0 * ak * rq));
    }
    return t;
  }
  if (m.N != 1) throw DomainError("simplified robust forms are for the primary resonance N = 1");
  if (m.mu1 == 0.0) throw SingularityError("mu1 = 0: simplified robust forms diverge");
  t.method = TimeMethod::robust_primary;
  const ReferenceTimes ref = reference_times(m);
  const double u = 4.0 + m.mu1;
  const double c = 8.0 * m.mu1;
  t.t_cl = ref.t_cl * m.Delta / c * (1.0 - u * std::sqrt(m.zeta) / (c * rq) - u * u * m.zeta / (c * c * m.q));
  const double r = 16.0 * m.mu1;
  t.t_rev = ref.t_rev * 2.0 * (1.0 - 3.0 * u / (r * rq) + 9.0 * u * u / (r * r * m.q));
  t.t_spr = 32.0 * kPi * rq / (m.kbar * m.zeta);
  return t;
}

TimeScales lattice_impl(const ResonanceModel& m, LatticeRegime regime) {
  const double x = m.l + m.beta;
  const double N2 = static_cast<double>(m.N) * m.N;
  TimeScales t;
  switch (regime) {
    case LatticeRegime::shallow: {
      if (m.N != 1) throw DomainError("shallow driven-lattice forms are for N = 1");
      const double d = 4.0 * x * x - 1.0;
      if (std::abs(d) < 1e-12) throw SingularityError("4 (l + beta)^2 = 1 in the shallow forms");
      if (x == 0.0) throw SingularityError("l + beta = 0 in the shallow forms");
      t.method = TimeMethod::lattice_shallow;
      const double t0_cl = 2.0 * kPi / (m.omega * x);
      const double t0_rev = 4.0 * kPi / (m.kbar * m.zeta);
      const double q2 = m.q * m.q;
      t.t_cl = t0_cl * (1.0 + q2 / 2.0 / (d * d)) * m.Delta;
      t.t_rev = t0_rev * (1.0 - q2 / 2.0 * (12.0 * x * x + 1.0) / (d * d * d));
      const double denom = 2.0 * N2 * m.zeta * m.kbar * q2 * x * (4.0 * x * x + 1.0);
      t.t_spr = denom == 0.0 ? kInf : kPi * std::pow(d, 4) / denom;
      return t;
    }
    case LatticeRegime::deep: {
      t.method = TimeMethod::lattice_deep;
      const double rq = std::sqrt(m.q);
      const double c = (4.0 * x + 1.0) / 8.0;
      if (rq == c) throw SingularityError("sqrt(q) = (4 (l + beta) + 1) / 8 in the deep classical period");
      t.t_cl = 2.0 * kPi / (N2 * m.kbar * m.zeta * (rq - c));
      t.t_rev = rq == 0.0 ? -kInf : 8.0 * kPi / (N2 * m.kbar * m.zeta) * (1.0 - 3.0 * (4.0 * x + 1.0) / (16.0 * rq));
      t.t_spr = 32.0 * kPi * rq / (N2 * m.kbar * m.zeta);
      return t;
    }
    case LatticeRegime::deep_harmonic: {
      if (!m.lattice) throw DomainError("deep_harmonic forms need the lattice the model was built from");
      t.method = TimeMethod::lattice_deep_harmonic;
      const double q8 = std::pow(m.lattice->q0(), 0.125);
      const double n4 = std::pow(m.n_bar + 1.0, 0.25);
      const double rl = std::sqrt(m.lambda);
      const double rz = std::sqrt(m.zeta);
      const double w = (4.0 * x + 1.0) * q8 * m.kbar * rz;
      t.t_cl = 16.0 * kPi * q8 / (N2 * rz) / (16.0 * n4 * rl - w);
      t.t_rev = rl == 0.0 ? -kInf : 8.0 * kPi / (N2 * m.kbar * m.zeta) * (1.0 - 3.0 * w / (32.0 * n4 * rl));
      t.t_spr = 64.0 * kPi * n4 * rl / (N2 * m.kbar * m.kbar * std::pow(m.zeta, 1.5) * q8);
      return t;
    }
  }
  throw DomainError("unknown lattice regime");
}

}  // namespace

RecurrenceFrequencies omegas_numeric(const ResonanceModel& model, int j, double nu, DerivativeMode mode) {
  if (j < 0 || j >= model.N) throw DomainError("Floquet index j must lie in [0, N)");
  const std::vector<double> d = quasi_energy_derivatives(model, nu, 3, mode);
  const double k = model.kbar;
  const double ak = model.alpha * k;
  RecurrenceFrequencies w;
  w.omega1 = (d[0] + ak) / k;
  w.omega2 = (d[1] + 2.0 * ak * d[0]) / (2.0 * k * k);
  w.omega3 = (d[2] + 3.0 * ak * d[1]) / (6.0 * k * k * k);
  return w;
}

TimeScales times_numeric(const ResonanceModel& model, int j, double nu, DerivativeMode mode) {
  const RecurrenceFrequencies w = omegas_numeric(model, j, nu, mode);
  return {period(w.omega1), period(w.omega2), period(w.omega3), TimeMethod::numeric_exact};
}

ReferenceTimes reference_times(const ResonanceModel& model) {
  return {2.0 * kPi / model.omega, 4.0 * kPi / (model.kbar * model.zeta)};
}

DelicateTimes times_delicate(const ResonanceModel& model) { return delicate_impl(model); }

TimeScales times_robust(const ResonanceModel& model, RobustForm form) { return robust_impl(model, form, Notes{}); }

TimeScales undriven_times(const LatticeParams& lattice, int n, Regime regime) {
  lattice.validate();
  const double q0 = lattice.q0();
  TimeScales t;
  if (regime == Regime::shallow) {
    if (!(q0 < 1.0)) throw DomainError("shallow regime needs q0 < 1, got " + std::to_string(q0));
    if (n <= 1) throw DomainError("shallow regime needs band index n >= 2");
    const double u = static_cast<double>(n) * n - 1.0;
    t.method = TimeMethod::undriven_shallow;
    t.t_cl = (1.0 + q0 * q0 / (2.0 * u * u)) * kPi / n;
    t.t_rev = 2.0 * kPi * (1.0 - q0 * q0 / 2.0 * (3.0 * n * n + 1.0) / (u * u * u));
    t.t_spr = q0 == 0.0 ? kInf : kPi * std::pow(u, 4) / (q0 * q0 * n * (n * n + 1.0));
    return t;
  }
  if (!(q0 >= 4.0)) throw DomainError("deep regime needs q0 >= 4, got " + std::to_string(q0));
  if (n < 0) throw DomainError("band index must be >= 0");
  const double rq = std::sqrt(q0);
  const double s = 2.0 * n + 1.0;
  t.method = TimeMethod::undriven_deep;
  t.t_cl = kPi / (2.0 * rq) * (1.0 + s / (8.0 * rq) + 3.0 * (s * s + 1.0) / (256.0 * q0));
  t.t_rev = 4.0 * kPi * (1.0 - 3.0 * s / (16.0 * q0));
  t.t_spr = 32.0 * kPi * rq;
  return t;
}

TimeScales driven_lattice_times(const ResonanceModel& model, LatticeRegime regime) {
  return lattice_impl(model, regime);
}

std::vector<SweepRow> sweep_times(const ResonanceModel& model_template, const std::vector<double>& lambdas,
                                  const std::vector<TimeMethod>& methods) {
  if (lambdas.empty()) throw DomainError("sweep needs a nonempty lambda grid");
  if (methods.empty()) throw DomainError("sweep needs at least one method");
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0)) throw DomainError("sweep lambdas must be >= 0");
  }
  std::vector<SweepRow> rows(lambdas.size() * methods.size());
  parallel_for(rows.size(), [&](std::size_t index) {
    SweepRow& row = rows[index];
    row.lambda = lambdas[index / methods.size()];
    row.method = methods[index % methods.size()];
    Notes notes{&row.flags};
    try {
      const ResonanceModel m = with_lambda(model_template, row.lambda);
      row.q = m.q;
      row.nu = m.nu();
      switch (row.method) {
        case TimeMethod::numeric_exact:
          row.times = times_numeric(m, 0, m.nu());
          break;
        case TimeMethod::delicate_general:
          row.times = delicate_impl(m).times;
          break;
        case TimeMethod::robust_general:
          row.times = robust_impl(m, RobustForm::general_N, notes);
          break;
        case TimeMethod::robust_primary:
          row.times = robust_impl(m, RobustForm::primary_simplified, notes);
          break;
        case TimeMethod::lattice_shallow:
          row.times = lattice_impl(m, LatticeRegime::shallow);
          break;
        case TimeMethod::lattice_deep:
          row.times = lattice_impl(m, LatticeRegime::deep);
          break;
        case TimeMethod::lattice_deep_harmonic:
          row.times = lattice_impl(m, LatticeRegime::deep_harmonic);
          break;
        case TimeMethod::undriven_shallow:
        case TimeMethod::undriven_deep:
          if (!m.lattice) throw DomainError("undriven times need the lattice the model was built from");
          row.times = undriven_times(*m.lattice, m.n_bar,
                                     row.method == TimeMethod::undriven_shallow ? Regime::shallow : Regime::deep);
          break;
      }
      row.times.method = row.method;
      if (!(row.times.t_cl > 0.0 && row.times.t_rev > 0.0 && row.times.t_spr > 0.0)) {
        notes.add("nonpositive", "");
      } else if (!row.times.ordered()) {
        notes.add("unordered", "");
      }
    } catch (const Error& e) {
      row.ok = false;
      if (!row.flags.empty()) row.flags += ';';
      row.flags += std::string("error:") + e.what();
    }
  });
  return rows;
}

TimeScales to_lab_seconds(const TimeScales& scaled, double omega_m) {
  if (!(omega_m > 0.0)) throw DomainError("drive frequency must be > 0");
  return {scaled.t_cl / omega_m, scaled.t_rev / omega_m, scaled.t_spr / omega_m, scaled.method};
}

const char* to_string(TimeMethod method) {
  switch (method) {
    case TimeMethod::numeric_exact:
      return "numeric_exact";
    case TimeMethod::delicate_general:
      return "delicate_general";
    case TimeMethod::robust_general:
      return "robust_general";
    case TimeMethod::robust_primary:
      return "robust_primary";
    case TimeMethod::lattice_shallow:
      return "lattice_shallow";
    case TimeMethod::lattice_deep:
      return "lattice_deep";
    case TimeMethod::lattice_deep_harmonic:
      return "lattice_deep_harmonic";
    case TimeMethod::undriven_shallow:
      return "undriven_shallow";
    case TimeMethod::undriven_deep:
      return "undriven_deep";
  }
  return "?";
}

TimeMethod parse_time_method(const char* text) {
  for (TimeMethod m : {TimeMethod::numeric_exact, TimeMethod::delicate_general, TimeMethod::robust_general,
                       TimeMethod::robust_primary, TimeMethod::lattice_shallow, TimeMethod::lattice_deep,
                       TimeMethod::lattice_deep_harmonic, TimeMethod::undriven_shallow, TimeMethod::undriven_deep}) {
    if (std::strcmp(text, to_string(m)) == 0) return m;
  }
  throw DomainError(std::string("unknown time method '") + text + "'");
}

}  // namespace qrev
