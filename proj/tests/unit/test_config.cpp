#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qrev/config.hpp"
#include "qrev/error.hpp"
#include "qrev/io.hpp"

using namespace qrev;

TEST_CASE("default config round-trips through canonical JSON") {
  const RunConfig c = parse_config("{}");
  CHECK(c.lattice.V0 == 16.0);
  CHECK(c.evolve.points == 2048);
  CHECK_FALSE(c.evolve.packet.p0.has_value());
  const RunConfig again = parse_config(to_json(c));
  CHECK(to_json(again) == to_json(c));
  CHECK(config_hash(again) == config_hash(c));
  CHECK(config_hash(c).size() == 16);

  RunConfig changed = c;
  changed.lattice.lambda = 1.5000000000000002;
  CHECK(config_hash(changed) != config_hash(c));
}

TEST_CASE("config values are read from every section") {
  const RunConfig c = parse_config(R"({
    "lattice": {"V0": 28.125, "kbar": 0.16, "lambda": 3},
    "resonance": {"N": 1, "M": 0, "l": 0, "n": 2, "regime": "deep", "V": 0.5},
    "evolve": {"grid": {"cells": 8, "points": 1024}, "dt": 0.01, "n_steps": 10, "frame": "comoving",
               "integrator": "yoshida4", "norm_tolerance": 1e-6, "ipr_stride": 5,
               "packet": {"z0": 1.0, "p0": null, "delta_z": 0.8, "delta_p": 0.1}},
    "poincare": {"seeds": 4, "periods": 10, "points": [[0.5, 1.0], [1.0, -1.0]]},
    "sweep": {"lambda_min": 1, "lambda_max": 2, "n_points": 3, "methods": ["lattice_deep", "robust_general"]}
  })");
  CHECK(c.lattice.kbar == 0.16);
  CHECK(*c.resonance.V == 0.5);
  CHECK(c.evolve.cells == 8);
  CHECK(c.evolve.integrator == "yoshida4");
  CHECK(c.evolve.norm_tolerance == 1e-6);
  CHECK_FALSE(c.evolve.packet.p0.has_value());
  CHECK(*c.evolve.packet.delta_p == 0.1);
  REQUIRE(c.poincare.points.size() == 2);
  CHECK(c.poincare.points[1].second == -1.0);
  CHECK(c.sweep.methods.size() == 2);
  CHECK(c.resonance_model().q > 0.0);
}

TEST_CASE("strict parsing rejects malformed documents") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("[]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"extra": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"depth": 3}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"evolve": {"grid": {"cells": 8, "size": 3}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"evolve": {"packet": {"sigma": 1}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"V0": "deep"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"evolve": {"n_steps": 10.5}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/qrev.json"), ConfigError);
}

TEST_CASE("physical values are validated at load time") {
  CHECK_THROWS_AS(parse_config(R"({"lattice": {"V0": -1}})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"evolve": {"dt": 0.1}})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"evolve": {"grid": {"points": 1000}}})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"evolve": {"frame": "rotating"}})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"evolve": {"packet": {"delta_z": 0}}})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"poincare": {"steps_per_period": 100}})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"lambda_min": 2, "lambda_max": 1}})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"methods": ["guess"]}})"), DomainError);
  CHECK_THROWS_AS(parse_config(R"({"resonance": {"regime": "shallow"}})"), DomainError);
}

TEST_CASE("doubles are written in shortest round-trip form") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()}) {
    const std::string text = format_double(x);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("CSV writer emits metadata, header and quoted cells") {
  const std::string path = output_path((std::filesystem::temp_directory_path() / "qrev_test_out").string(), "table.csv");
  {
    CsvWriter csv(path, {{"config_hash", "abc"}}, {"x", "n", "label"});
    csv.row({0.25, 3L, std::string("a,b")});
    CHECK_THROWS_AS(csv.row({1.0}), Error);
  }
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == "# qrev_version: " + std::string(version()) + "\n# config_hash: abc\nx,n,label\n0.25,3,\"a,b\"\n");
  std::remove(path.c_str());
}
