// qrev: command-line front end.
//
// Exit codes: 0 success, 1 domain or numerical error, 2 failed validation,
// 64 usage error (bad flags or malformed config).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrev/classical.hpp"
#include "qrev/config.hpp"
#include "qrev/error.hpp"
#include "qrev/io.hpp"
#include "qrev/mathieu.hpp"
#include "qrev/quantum.hpp"
#include "qrev/recurrence.hpp"
#include "qrev/resonance.hpp"
#include "qrev/scenario.hpp"
#include "qrev/validation.hpp"

using namespace qrev;

namespace {

constexpr int kDomainExit = 1;
constexpr int kValidationExit = 2;
constexpr int kUsageExit = 64;

struct Options {
  std::string config_path;
  std::string out;
  std::string format = "csv";
};

RunConfig load(const Options& o) { return o.config_path.empty() ? parse_config("{}") : load_config(o.config_path); }

Metadata base_metadata(const RunConfig& config, const std::string& command) {
  return {{"command", command}, {"config_hash", config_hash(config)}, {"time_units", "scaled (drive period 2 pi)"}};
}

// Destination of a single-table command: stdout unless --out is given.
std::string table_path(const Options& o, const std::string& name) {
  return o.out.empty() ? "-" : output_path(o.out, name);
}

void report(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cerr << "wrote " << p << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence times of driven optical lattices"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv"}));

  // mathieu
  auto* mathieu = app.add_subcommand("mathieu", "characteristic values a_nu(q), b_nu(q)");
  std::vector<double> m_orders{0.0};
  std::vector<double> m_qs{1.0};
  std::string m_kind = "even";
  std::string m_method = "exact";
  mathieu->add_option("--order", m_orders, "orders nu")->expected(1, -1);
  mathieu->add_option("--q", m_qs, "parameters q")->expected(1, -1);
  mathieu->add_option("--kind", m_kind, "even (a) or odd (b)")->check(CLI::IsMember({"even", "odd"}));
  mathieu->add_option("--method", m_method, "exact, series_small_q or series_large_q")
      ->check(CLI::IsMember({"exact", "series_small_q", "series_large_q"}));

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "quasi-energies of the configured resonance model");
  double s_nu_max = 10.0;
  double s_nu_step = 1.0;
  std::string s_method = "exact";
  spectrum->add_option("--nu-max", s_nu_max, "largest order");
  spectrum->add_option("--nu-step", s_nu_step, "order step")->check(CLI::PositiveNumber);
  spectrum->add_option("--method", s_method, "exact, series_small_q or series_large_q")
      ->check(CLI::IsMember({"exact", "series_small_q", "series_large_q"}));

  // times
  auto* times = app.add_subcommand("times", "recurrence times at the configured lambda");
  std::vector<std::string> t_methods;
  times->add_option("--method", t_methods, "time methods (default: sweep.methods)");

  // sweep
  app.add_subcommand("sweep", "recurrence times over the configured lambda grid");

  // evolve
  auto* evolve_cmd = app.add_subcommand("evolve", "split-operator propagation of a Gaussian packet");
  std::optional<double> e_V0t, e_kbar, e_lambda, e_dt, e_norm_tol;
  std::optional<long> e_steps;
  std::optional<std::string> e_frame, e_integrator;
  evolve_cmd->add_option("--V0-tilde", e_V0t, "scaled lattice depth");
  evolve_cmd->add_option("--kbar", e_kbar, "scaled Planck constant");
  evolve_cmd->add_option("--lambda", e_lambda, "drive amplitude");
  evolve_cmd->add_option("--dt", e_dt, "time step");
  evolve_cmd->add_option("--n-steps", e_steps, "number of steps");
  evolve_cmd->add_option("--frame", e_frame, "lab or comoving");
  evolve_cmd->add_option("--integrator", e_integrator, "strang or yoshida4");
  evolve_cmd->add_option("--norm-tolerance", e_norm_tol, "abort when |norm - 1| exceeds this");

  // poincare
  auto* poincare = app.add_subcommand("poincare", "stroboscopic sections of the classical dynamics");
  std::vector<double> p_lambdas;
  poincare->add_option("--lambda", p_lambdas, "drive amplitudes (one file each; default lattice.lambda)");

  // validate
  auto* validate = app.add_subcommand("validate", "acceptance report");
  std::vector<int> v_ids;
  validate->add_option("--check", v_ids, "check ids (default all)")->check(CLI::Range(1, validation_count()));

  // reproduce-figure
  auto* figure = app.add_subcommand("reproduce-figure", "data behind figures 1-4");
  int f_number = 0;
  figure->add_option("figure", f_number, "figure number")->required()->check(CLI::Range(1, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageExit;
  }

  try {
    RunConfig config = load(opt);
    const std::string command = app.get_subcommands().front()->get_name();

    if (*mathieu) {
      const MathieuMethod method = parse_mathieu_method(m_method.c_str());
      CsvWriter csv(table_path(opt, "mathieu.csv"), base_metadata(config, command),
                    {"order", "q", "kind", "method", "value"});
      for (double nu : m_orders) {
        const MathieuOrder order = m_kind == "even" ? MathieuOrder::even(nu) : MathieuOrder::odd(nu);
        for (double q : m_qs) {
          const MathieuCharacteristic c = characteristic(order, q, method);
          csv.row({nu, q, std::string(to_string(order.kind)), std::string(to_string(c.method)), c.value});
        }
      }
    } else if (*spectrum) {
      const ResonanceModel model = config.resonance_model();
      const MathieuMethod method = parse_mathieu_method(s_method.c_str());
      Metadata meta = base_metadata(config, command);
      meta.emplace_back("q", format_double(model.q));
      CsvWriter csv(table_path(opt, "spectrum.csv"), meta, {"j", "nu", "unwrapped", "wrapped", "method"});
      for (int j = 0; j < model.N; ++j) {
        for (int k = 0; k * s_nu_step <= s_nu_max + 1e-12; ++k) {
          const double nu = k * s_nu_step;
          const QuasiEnergy e = quasi_energy(model, j, nu, method);
          csv.row({long(j), nu, e.unwrapped, e.wrapped, std::string(to_string(method))});
        }
      }
    } else if (*times || app.got_subcommand("sweep")) {
      std::vector<double> lambdas;
      if (*times) {
        lambdas = {config.lattice.lambda};
      } else {
        for (int i = 0; i < config.sweep.n_points; ++i)
          lambdas.push_back(config.sweep.n_points == 1 ? config.sweep.lambda_min
                                                       : config.sweep.lambda_min + (config.sweep.lambda_max -
                                                                                    config.sweep.lambda_min) *
                                                                                       i / (config.sweep.n_points - 1));
      }
      std::vector<TimeMethod> methods;
      for (const auto& m : (*times && !t_methods.empty()) ? t_methods : config.sweep.methods)
        methods.push_back(parse_time_method(m.c_str()));
      CsvWriter csv(table_path(opt, command + ".csv"), base_metadata(config, command),
                    {"lambda", "method", "t_cl", "t_rev", "t_spr", "q", "nu", "flags"});
      for (const SweepRow& row : sweep_times(config.resonance_model(), lambdas, methods))
        csv.row({row.lambda, std::string(to_string(row.method)), row.times.t_cl, row.times.t_rev, row.times.t_spr,
                 row.q, row.nu, row.flags});
    } else if (*evolve_cmd) {
      if (e_kbar) {
        const double V0t = config.lattice_params().V0_tilde();
        config.lattice.kbar = *e_kbar;
        config.lattice.V0 = LatticeParams::from_scaled_depth(V0t, *e_kbar, config.lattice.lambda).V0;
      }
      if (e_V0t) config.lattice.V0 = LatticeParams::from_scaled_depth(*e_V0t, config.lattice.kbar, 0.0).V0;
      if (e_lambda) config.lattice.lambda = *e_lambda;
      if (e_dt) config.evolve.dt = *e_dt;
      if (e_steps) config.evolve.n_steps = *e_steps;
      if (e_frame) config.evolve.frame = *e_frame;
      if (e_integrator) config.evolve.integrator = *e_integrator;
      if (e_norm_tol) config.evolve.norm_tolerance = *e_norm_tol;
      config.validate();
      report(write_evolve_outputs(run_evolve(config), config, opt.out, command));
    } else if (*poincare) {
      if (p_lambdas.empty()) p_lambdas = {config.lattice.lambda};
      std::vector<std::string> written;
      for (double lambda : p_lambdas) {
        const SectionConfig section = section_config(config, lambda);
        Metadata meta = base_metadata(config, command);
        meta.emplace_back("lambda", format_double(lambda));
        meta.emplace_back("V0_tilde", format_double(section.V0_tilde));
        meta.emplace_back("periods", std::to_string(section.n_periods));
        meta.emplace_back("steps_per_period", std::to_string(section.steps_per_period));
        const std::string name =
            p_lambdas.size() == 1 ? "poincare.csv" : "poincare_lambda_" + format_double(lambda) + ".csv";
        CsvWriter csv(output_path(opt.out, name), meta, {"seed_id", "period_index", "z_mod", "p"});
        for (const SectionPoint& s : poincare_section(section))
          csv.row({long(s.seed), s.period, s.point.z, s.point.p});
        written.push_back(csv.path());
      }
      report(written);
    } else if (*validate) {
      std::optional<CsvWriter> csv;
      if (!opt.out.empty())
        csv.emplace(output_path(opt.out, "validation.csv"), base_metadata(config, command),
                    std::vector<std::string>{"id", "check", "source", "measured", "predicted", "rel_error",
                                             "tolerance", "pass", "note"});
      bool all = true;
      const std::vector<int> ids = v_ids;
      for (int id = 1; id <= validation_count(); ++id) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
        const ValidationRow row = run_validation(id);
        std::cout << format_row(row) << std::endl;
        if (csv)
          csv->row({long(row.id), row.name, row.source, row.measured, row.predicted, row.rel_error, row.tolerance,
                    std::string(row.pass ? "pass" : "fail"), row.note});
        all = all && row.pass;
      }
      return all ? 0 : kValidationExit;
    } else if (*figure) {
      report(reproduce_figure(f_number, opt.out.empty() ? "." : opt.out));
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "qrev: " << e.what() << '\n';
    return kUsageExit;
  } catch (const Error& e) {
    std::cerr << "qrev: " << e.what() << '\n';
    return kDomainExit;
  }
}
