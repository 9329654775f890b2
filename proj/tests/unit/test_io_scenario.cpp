#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qrev/config.hpp"
#include "qrev/quantum.hpp"
#include "qrev/scenario.hpp"

using namespace qrev;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig small_config(double lambda) {
  RunConfig c = figure4_config();
  c.lattice.lambda = lambda;
  c.evolve.cells = 8;
  c.evolve.points = 1024;
  c.evolve.n_steps = 400;
  c.evolve.ipr_stride = 50;
  return c;
}

}  // namespace

TEST_CASE("band-centre momentum puts the packet's mean energy at the band centre") {
  const RunConfig c = figure4_config();
  const SpatialGrid grid = SpatialGrid::periodic(c.evolve.cells, c.evolve.points);
  const double V0t = c.lattice_params().V0_tilde();
  const double kbar = c.lattice.kbar;
  const double p0 = band_centre_momentum(grid, V0t, kbar, c.resonance.n, c.evolve.packet.z0, c.evolve.packet.delta_z);
  CHECK(p0 == doctest::Approx(1.71003).epsilon(1e-5));

  // Mean energy measured on the grid, independent of the closed-form
  // Gaussian averages used to pick p0.
  const WaveFunction psi = init_gaussian(grid, c.evolve.packet.z0, p0, c.evolve.packet.delta_z, kbar);
  const double pm = psi.mean_momentum(kbar);
  const double dp = psi.momentum_spread(kbar);
  double potential = 0.0;
  for (int i = 0; i < grid.n_points; ++i)
    potential += std::norm(psi.psi[i]) * V0t / 2.0 * std::cos(2.0 * grid.z(i)) * grid.dz();
  const double energy = (pm * pm + dp * dp) / 2.0 + potential;

  const Eigenbasis basis = undriven_eigenbasis(grid, V0t, kbar, 2 * grid.cells * (c.resonance.n + 1));
  CHECK(energy == doctest::Approx(band_centres(basis)[c.resonance.n]).epsilon(1e-6));
}

TEST_CASE("lab-frame packet carries the drive's momentum offset") {
  const RunConfig c = small_config(1.5);
  const SpatialGrid grid = SpatialGrid::periodic(c.evolve.cells, c.evolve.points);
  const DriveConfig drive = drive_config(c);
  const PacketSetup lab = prepare_packet(c, grid, drive);
  RunConfig co = c;
  co.evolve.frame = "comoving";
  const PacketSetup comoving = prepare_packet(co, grid, drive_config(co));
  CHECK(comoving.psi.mean_momentum(c.lattice.kbar) == doctest::Approx(lab.p0).epsilon(1e-8));
  CHECK(lab.psi.mean_momentum(c.lattice.kbar) == doctest::Approx(lab.p0 - c.lattice.lambda).epsilon(1e-8));
  CHECK(lab.uncertainty_product == doctest::Approx(1.0));
}

TEST_CASE("detection hints fall back to the centred model when the ordering is invalid") {
  const Prediction own = predicted_times(figure4_config());
  CHECK(own.times.t_rev < 0.0);
  const Prediction hints = detection_hints(figure4_config());
  CHECK(hints.centred);
  CHECK(hints.times.t_cl > 0.0);
  CHECK(hints.times.t_rev > hints.times.t_cl);
  CHECK(hints.times.t_spr > hints.times.t_rev);

  RunConfig undriven = figure4_config();
  undriven.lattice.lambda = 0.0;
  CHECK_FALSE(detection_hints(undriven).centred);
}

TEST_CASE("figure presets match their targets") {
  const RunConfig f2 = figure2_config();
  CHECK(f2.resonance_model().q == doctest::Approx(85.14).epsilon(1e-4));
  CHECK(f2.evolve.packet.delta_z == doctest::Approx(0.8));
  CHECK(*f2.evolve.packet.p0 == 0.0);
  const RunConfig f4 = figure4_config();
  CHECK(f4.resonance_model().q == doctest::Approx(20.01).epsilon(1e-3));
  CHECK(coupling_for_q(f4, 2.0 * f4.resonance_model().q) > 0.0);
}

TEST_CASE("evolve output is byte-identical across thread counts") {
  const RunConfig c = small_config(1.5);
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "qrev_thread_test";
  fs::remove_all(root);

  setenv("QREV_THREADS", "1", 1);
  const auto one = write_evolve_outputs(run_evolve(c), c, (root / "t1").string(), "evolve");
  setenv("QREV_THREADS", "4", 1);
  const auto four = write_evolve_outputs(run_evolve(c), c, (root / "t4").string(), "evolve");
  unsetenv("QREV_THREADS");

  REQUIRE(one.size() == four.size());
  REQUIRE_FALSE(one.empty());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(fs::path(one[i]).filename() == fs::path(four[i]).filename());
    CHECK(slurp(one[i]) == slurp(four[i]));
  }
  fs::remove_all(root);
}
