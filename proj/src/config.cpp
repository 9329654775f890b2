#include "qrev/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "qrev/classical.hpp"
#include "qrev/quantum.hpp"

namespace qrev {

namespace {

using json = nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require_object(j, where);
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

template <class T>
void read(const json& j, const char* key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong value type");
  }
}

template <class T>
void read_optional(const json& j, const char* key, const std::string& where, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(j, key, where, value);
  out = value;
}

// Integers given as JSON floats are rejected rather than truncated.
template <class T>
void read_integer(const json& j, const char* key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  out = j.at(key).get<T>();
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

LatticeParams RunConfig::lattice_params() const { return {lattice.V0, lattice.kbar, lattice.lambda}; }

ResonanceModel RunConfig::resonance_model() const {
  const CouplingMode mode = resonance.V ? CouplingMode::user_supplied : CouplingMode::harmonic_approx;
  return lattice_resonance_model(lattice_params(), resonance.n, resonance.N, resonance.M, resonance.l, resonance.regime,
                                 mode, resonance.V);
}

void RunConfig::validate() const {
  lattice_params().validate();
  if (resonance.N < 1) throw DomainError("resonance.N must be >= 1");
  if (resonance.n < 0) throw DomainError("resonance.n must be >= 0");
  if (resonance.V && !(*resonance.V > 0.0)) throw DomainError("resonance.V must be positive");
  if (!resonance.V && resonance.regime != Regime::deep)
    throw DomainError("resonance.V is required outside the deep regime");

  SpatialGrid::periodic(evolve.cells, evolve.points);
  DriveConfig drive;
  drive.V0_tilde = lattice_params().V0_tilde();
  drive.kbar = lattice.kbar;
  drive.lambda = lattice.lambda;
  drive.dt = evolve.dt;
  drive.n_steps = evolve.n_steps;
  drive.frame = parse_frame(evolve.frame.c_str());
  drive.integrator = parse_integrator(evolve.integrator.c_str());
  drive.norm_tolerance = evolve.norm_tolerance;
  drive.validate();
  if (evolve.density_stride < 0 || evolve.ipr_stride < 0 || evolve.density_subsample < 1)
    throw DomainError("evolve strides must be non-negative and density_subsample >= 1");
  const PacketSection& p = evolve.packet;
  require_finite(p.z0, "packet.z0");
  if (p.p0) require_finite(*p.p0, "packet.p0");
  if (!(p.delta_z > 0.0) || !std::isfinite(p.delta_z)) throw DomainError("packet.delta_z must be positive");
  if (p.delta_p && !(*p.delta_p > 0.0)) throw DomainError("packet.delta_p must be positive");

  SectionConfig section;
  section.lambda = lattice.lambda;
  section.V0_tilde = lattice_params().V0_tilde();
  section.n_periods = poincare.periods;
  section.steps_per_period = poincare.steps_per_period;
  section.validate();
  if (poincare.points.empty() && poincare.seeds < 1) throw DomainError("poincare.seeds must be >= 1");
  if (!(poincare.p_max > 0.0)) throw DomainError("poincare.p_max must be positive");

  require_finite(sweep.lambda_min, "sweep.lambda_min");
  require_finite(sweep.lambda_max, "sweep.lambda_max");
  if (sweep.lambda_min < 0.0 || sweep.lambda_max < sweep.lambda_min)
    throw DomainError("sweep needs 0 <= lambda_min <= lambda_max");
  if (sweep.n_points < 1) throw DomainError("sweep.n_points must be >= 1");
  if (sweep.methods.empty()) throw DomainError("sweep.methods must not be empty");
  for (const auto& m : sweep.methods) parse_time_method(m.c_str());
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  check_keys(doc, "config", {"lattice", "resonance", "evolve", "poincare", "sweep"});

  if (doc.contains("lattice")) {
    const json& j = doc["lattice"];
    check_keys(j, "lattice", {"V0", "kbar", "lambda"});
    read(j, "V0", "lattice", c.lattice.V0);
    read(j, "kbar", "lattice", c.lattice.kbar);
    read(j, "lambda", "lattice", c.lattice.lambda);
  }
  if (doc.contains("resonance")) {
    const json& j = doc["resonance"];
    check_keys(j, "resonance", {"N", "M", "l", "n", "regime", "V"});
    read_integer(j, "N", "resonance", c.resonance.N);
    read_integer(j, "M", "resonance", c.resonance.M);
    read_integer(j, "l", "resonance", c.resonance.l);
    read_integer(j, "n", "resonance", c.resonance.n);
    std::string regime = to_string(c.resonance.regime);
    read(j, "regime", "resonance", regime);
    c.resonance.regime = parse_regime(regime.c_str());
    read_optional(j, "V", "resonance", c.resonance.V);
  }
  if (doc.contains("evolve")) {
    const json& j = doc["evolve"];
    check_keys(j, "evolve", {"grid", "dt", "n_steps", "frame", "integrator", "norm_tolerance", "density_stride", "density_subsample",
                             "ipr_stride", "packet"});
    if (j.contains("grid")) {
      const json& g = j["grid"];
      check_keys(g, "evolve.grid", {"cells", "points"});
      read_integer(g, "cells", "evolve.grid", c.evolve.cells);
      read_integer(g, "points", "evolve.grid", c.evolve.points);
    }
    read(j, "dt", "evolve", c.evolve.dt);
    read_integer(j, "n_steps", "evolve", c.evolve.n_steps);
    read(j, "frame", "evolve", c.evolve.frame);
    read(j, "integrator", "evolve", c.evolve.integrator);
    read(j, "norm_tolerance", "evolve", c.evolve.norm_tolerance);
    read_integer(j, "density_stride", "evolve", c.evolve.density_stride);
    read_integer(j, "density_subsample", "evolve", c.evolve.density_subsample);
    read_integer(j, "ipr_stride", "evolve", c.evolve.ipr_stride);
    if (j.contains("packet")) {
      const json& p = j["packet"];
      check_keys(p, "evolve.packet", {"z0", "p0", "delta_z", "delta_p"});
      read(p, "z0", "evolve.packet", c.evolve.packet.z0);
      read_optional(p, "p0", "evolve.packet", c.evolve.packet.p0);
      read(p, "delta_z", "evolve.packet", c.evolve.packet.delta_z);
      read_optional(p, "delta_p", "evolve.packet", c.evolve.packet.delta_p);
    }
  }
  if (doc.contains("poincare")) {
    const json& j = doc["poincare"];
    check_keys(j, "poincare", {"seeds", "periods", "steps_per_period", "p_max", "points"});
    read_integer(j, "seeds", "poincare", c.poincare.seeds);
    read_integer(j, "periods", "poincare", c.poincare.periods);
    read_integer(j, "steps_per_period", "poincare", c.poincare.steps_per_period);
    read(j, "p_max", "poincare", c.poincare.p_max);
    read(j, "points", "poincare", c.poincare.points);
  }
  if (doc.contains("sweep")) {
    const json& j = doc["sweep"];
    check_keys(j, "sweep", {"lambda_min", "lambda_max", "n_points", "methods"});
    read(j, "lambda_min", "sweep", c.sweep.lambda_min);
    read(j, "lambda_max", "sweep", c.sweep.lambda_max);
    read_integer(j, "n_points", "sweep", c.sweep.n_points);
    read(j, "methods", "sweep", c.sweep.methods);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_json(const RunConfig& c) {
  json doc;
  doc["lattice"] = {{"V0", c.lattice.V0}, {"kbar", c.lattice.kbar}, {"lambda", c.lattice.lambda}};
  doc["resonance"] = {{"N", c.resonance.N},
                      {"M", c.resonance.M},
                      {"l", c.resonance.l},
                      {"n", c.resonance.n},
                      {"regime", to_string(c.resonance.regime)},
                      {"V", optional_json(c.resonance.V)}};
  doc["evolve"] = {{"grid", {{"cells", c.evolve.cells}, {"points", c.evolve.points}}},
                   {"dt", c.evolve.dt},
                   {"n_steps", c.evolve.n_steps},
                   {"frame", c.evolve.frame},
                   {"integrator", c.evolve.integrator},
                   {"norm_tolerance", c.evolve.norm_tolerance},
                   {"density_stride", c.evolve.density_stride},
                   {"density_subsample", c.evolve.density_subsample},
                   {"ipr_stride", c.evolve.ipr_stride},
                   {"packet",
                    {{"z0", c.evolve.packet.z0},
                     {"p0", optional_json(c.evolve.packet.p0)},
                     {"delta_z", c.evolve.packet.delta_z},
                     {"delta_p", optional_json(c.evolve.packet.delta_p)}}}};
  doc["poincare"] = {{"seeds", c.poincare.seeds},
                     {"periods", c.poincare.periods},
                     {"steps_per_period", c.poincare.steps_per_period},
                     {"p_max", c.poincare.p_max},
                     {"points", c.poincare.points}};
  doc["sweep"] = {{"lambda_min", c.sweep.lambda_min},
                  {"lambda_max", c.sweep.lambda_max},
                  {"n_points", c.sweep.n_points},
                  {"methods", c.sweep.methods}};
  return doc.dump();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016" PRIx64, h);
  return out;
}

std::string config_hash(const RunConfig& config) { return fnv1a_hex(to_json(config)); }

}  // namespace qrev
