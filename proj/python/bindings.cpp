// Python bindings.  Configurations are passed as JSON text in the same
// format the command-line tool reads.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

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

namespace py = pybind11;
using namespace qrev;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict times_dict(const TimeScales& t) {
  py::dict d;
  d["t_cl"] = t.t_cl;
  d["t_rev"] = t.t_rev;
  d["t_spr"] = t.t_spr;
  d["method"] = to_string(t.method);
  return d;
}

py::dict scale_dict(const RecurrenceScale& s) {
  py::dict d;
  d["found"] = s.found;
  d["estimate"] = s.estimate;
  d["prominence"] = s.prominence;
  return d;
}

double characteristic_value(double nu, double q, const std::string& kind, const std::string& method) {
  MathieuOrder order;
  if (kind == "even")
    order = MathieuOrder::even(nu);
  else if (kind == "odd")
    order = MathieuOrder::odd(nu);
  else
    throw DomainError("kind must be 'even' or 'odd'");
  return characteristic(order, q, parse_mathieu_method(method.c_str())).value;
}

py::dict py_times(const std::string& config_json, const std::string& method) {
  const RunConfig config = parse_config(config_json);
  const std::vector<SweepRow> rows =
      sweep_times(config.resonance_model(), {config.lattice.lambda}, {parse_time_method(method.c_str())});
  py::dict d = times_dict(rows.front().times);
  d["q"] = rows.front().q;
  d["nu"] = rows.front().nu;
  d["flags"] = rows.front().flags;
  return d;
}

py::dict py_sweep(const std::string& config_json) {
  const RunConfig config = parse_config(config_json);
  std::vector<double> lambdas;
  const SweepSection& s = config.sweep;
  for (int i = 0; i < s.n_points; ++i)
    lambdas.push_back(s.n_points == 1 ? s.lambda_min
                                      : s.lambda_min + (s.lambda_max - s.lambda_min) * i / (s.n_points - 1));
  std::vector<TimeMethod> methods;
  for (const auto& m : s.methods) methods.push_back(parse_time_method(m.c_str()));
  std::vector<SweepRow> rows;
  {
    py::gil_scoped_release release;
    rows = sweep_times(config.resonance_model(), lambdas, methods);
  }
  std::vector<double> lambda, t_cl, t_rev, t_spr, q;
  std::vector<std::string> method, flags;
  for (const SweepRow& r : rows) {
    lambda.push_back(r.lambda);
    t_cl.push_back(r.times.t_cl);
    t_rev.push_back(r.times.t_rev);
    t_spr.push_back(r.times.t_spr);
    q.push_back(r.q);
    method.push_back(to_string(r.method));
    flags.push_back(r.flags);
  }
  py::dict d;
  d["lambda"] = to_array(lambda);
  d["method"] = method;
  d["t_cl"] = to_array(t_cl);
  d["t_rev"] = to_array(t_rev);
  d["t_spr"] = to_array(t_spr);
  d["q"] = to_array(q);
  d["flags"] = flags;
  return d;
}

py::dict py_evolve(const std::string& config_json) {
  const RunConfig config = parse_config(config_json);
  EvolveRun run;
  {
    py::gil_scoped_release release;
    run = run_evolve(config);
  }
  py::dict d;
  d["tau"] = to_array(run.record.times);
  d["autocorrelation"] = to_array(run.record.autocorr);
  d["ipr_tau"] = to_array(run.record.ipr_times);
  d["ipr"] = to_array(run.record.ipr);
  d["p0"] = run.packet.p0;
  d["hints"] = times_dict(run.hints.times);
  d["hints_centred"] = run.hints.centred;
  if (run.recurrences) {
    py::dict r;
    r["cl"] = scale_dict(run.recurrences->cl);
    r["rev"] = scale_dict(run.recurrences->rev);
    r["spr"] = scale_dict(run.recurrences->spr);
    d["recurrences"] = r;
  } else {
    d["recurrences"] = py::none();
  }
  d["detection_note"] = run.detection_note;
  return d;
}

py::dict py_poincare(const std::string& config_json, std::optional<double> lambda) {
  const RunConfig config = parse_config(config_json);
  const SectionConfig section = section_config(config, lambda.value_or(config.lattice.lambda));
  std::vector<SectionPoint> points;
  {
    py::gil_scoped_release release;
    points = poincare_section(section);
  }
  std::vector<long> seed, period;
  std::vector<double> z, p;
  for (const SectionPoint& s : points) {
    seed.push_back(static_cast<long>(s.seed));
    period.push_back(s.period);
    z.push_back(s.point.z);
    p.push_back(s.point.p);
  }
  py::dict d;
  d["seed"] = to_array(seed);
  d["period"] = to_array(period);
  d["z"] = to_array(z);
  d["p"] = to_array(p);
  return d;
}

py::list py_validate(const std::vector<int>& ids) {
  std::vector<int> selected = ids;
  if (selected.empty())
    for (int id = 1; id <= validation_count(); ++id) selected.push_back(id);
  std::vector<ValidationRow> rows;
  {
    py::gil_scoped_release release;
    for (int id : selected) rows.push_back(run_validation(id));
  }
  py::list out;
  for (const ValidationRow& r : rows) {
    py::dict d;
    d["id"] = r.id;
    d["name"] = r.name;
    d["measured"] = r.measured;
    d["predicted"] = r.predicted;
    d["rel_error"] = r.rel_error;
    d["tolerance"] = r.tolerance;
    d["pass"] = r.pass;
    d["note"] = r.note;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Recurrence times of driven optical lattices";

  auto base = py::register_exception<Error>(m, "QrevError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("version", &version);
  m.def("characteristic", &characteristic_value, py::arg("nu"), py::arg("q"), py::arg("kind") = "even",
        py::arg("method") = "exact", "Mathieu characteristic value a_nu(q) (even) or b_nu(q) (odd).");
  m.def("band_width", &band_width, py::arg("nu"), py::arg("q"), "Asymptotic width b_{nu+1} - a_nu of band nu for q >> 1.");
  m.def("mathieu_q", &mathieu_q, py::arg("lambda_"), py::arg("V"), py::arg("N"), py::arg("zeta"), py::arg("kbar"));
  m.def(
      "canonical_config", [](const std::string& text) { return to_json(parse_config(text)); },
      py::arg("config_json") = "{}", "Validated configuration with every field present.");
  m.def(
      "config_hash", [](const std::string& text) { return config_hash(parse_config(text)); },
      py::arg("config_json") = "{}");
  m.def(
      "resonance_q", [](const std::string& text) { return parse_config(text).resonance_model().q; },
      py::arg("config_json") = "{}");
  m.def("times", &py_times, py::arg("config_json") = "{}", py::arg("method") = "lattice_deep",
        "Recurrence times at the configured lambda.");
  m.def("sweep", &py_sweep, py::arg("config_json") = "{}", "Recurrence times over the configured lambda grid.");
  m.def("evolve", &py_evolve, py::arg("config_json") = "{}",
        "Split-operator propagation; returns the autocorrelation and detected recurrences.");
  m.def("poincare", &py_poincare, py::arg("config_json") = "{}", py::arg("lambda_") = py::none(),
        "Stroboscopic section of the classical dynamics.");
  m.def("validate", &py_validate, py::arg("ids") = std::vector<int>{}, "Acceptance checks by id (all when empty).");
  m.def("validation_count", &validation_count);
}
