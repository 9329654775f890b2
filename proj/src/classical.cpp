#include "qrev/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "qrev/error.hpp"
#include "qrev/support.hpp"

namespace qrev {

namespace {

constexpr double kPi = std::numbers::pi;

// Six-stage fourth-order symmetric splitting optimised for kinetic plus
// position-dependent potential (Blanes and Moan's SRKN_6^b); the clock
// advances with the drifts, so the force is evaluated at sub-step times.
struct Splitting {
  std::array<double, 7> kick;
  std::array<double, 6> drift;
  Splitting() {
    const double b1 = 0.0829844064174052;
    const double a1 = 0.245298957184271;
    const double b2 = 0.396309801498368;
    const double a2 = 0.604872665711080;
    const double b3 = -0.0390563049223486;
    const double a3 = 0.5 - (a1 + a2);
    const double b4 = 1.0 - 2.0 * (b1 + b2 + b3);
    kick = {b1, b2, b3, b4, b3, b2, b1};
    drift = {a1, a2, a3, a3, a2, a1};
  }
};

const Splitting& splitting() {
  static const Splitting s;
  return s;
}

inline void kick(PhasePoint& x, double lambda, double V0_tilde, double h) {
  x.p += h * (V0_tilde * std::sin(2.0 * x.z) - lambda * std::sin(x.tau));
}

inline void step4(PhasePoint& x, double lambda, double V0_tilde, double h) {
  const Splitting& s = splitting();
  for (int i = 0; i < 6; ++i) {
    kick(x, lambda, V0_tilde, s.kick[i] * h);
    x.z += s.drift[i] * h * x.p;
    x.tau += s.drift[i] * h;
  }
  kick(x, lambda, V0_tilde, s.kick[6] * h);
}

double wrapped_diff(double a, double b) { return std::remainder(a - b, 2.0 * kPi); }

}  // namespace

void SectionConfig::validate() const {
  if (!std::isfinite(lambda) || !std::isfinite(V0_tilde)) throw DomainError("lambda and V0_tilde must be finite");
  if (steps_per_period < 500) throw DomainError("steps_per_period must be >= 500");
  if (n_periods < 0) throw DomainError("n_periods must be >= 0");
  for (const PhasePoint& x : initial_conditions) {
    if (!std::isfinite(x.z) || !std::isfinite(x.p) || !std::isfinite(x.tau)) {
      throw DomainError("initial conditions must be finite");
    }
  }
}

double undriven_energy(const PhasePoint& x, double V0_tilde) {
  return 0.5 * x.p * x.p + 0.5 * V0_tilde * std::cos(2.0 * x.z);
}

PhasePoint reduce_to_cell(PhasePoint x) {
  const double cells = std::floor((x.z + kPi) / (2.0 * kPi));
  x.z -= cells * 2.0 * kPi;
  if (x.z >= kPi) {
    x.z -= 2.0 * kPi;
    x.winding += 1;
  }
  x.winding += static_cast<long>(cells);
  return x;
}

namespace {

// The force is 2 pi periodic in z; keeping z in the cell stops rounding in
// a growing coordinate from feeding a random walk into the energy.
inline void keep_in_cell(PhasePoint& x) {
  if (x.z >= kPi || x.z < -kPi) x = reduce_to_cell(x);
}

}  // namespace

PhasePoint advance(PhasePoint x, double lambda, double V0_tilde, double dt, long n_steps) {
  x = reduce_to_cell(x);
  for (long i = 0; i < n_steps; ++i) {
    step4(x, lambda, V0_tilde, dt);
    keep_in_cell(x);
  }
  return x;
}

std::vector<PhasePoint> integrate_trajectory(const PhasePoint& p0, const SectionConfig& config, int direction) {
  config.validate();
  if (!std::isfinite(p0.z) || !std::isfinite(p0.p) || !std::isfinite(p0.tau)) {
    throw DomainError("initial condition must be finite");
  }
  const double h = (direction < 0 ? -1.0 : 1.0) * 2.0 * kPi / config.steps_per_period;
  const long n = config.n_periods * config.steps_per_period;
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  PhasePoint x = reduce_to_cell(p0);
  out.push_back(x);
  for (long i = 0; i < n; ++i) {
    step4(x, config.lambda, config.V0_tilde, h);
    keep_in_cell(x);
    out.push_back(x);
  }
  return out;
}

std::vector<SectionPoint> poincare_section(const SectionConfig& config) {
  config.validate();
  if (config.initial_conditions.empty()) throw DomainError("poincare_section needs at least one seed");
  const std::size_t seeds = config.initial_conditions.size();
  const auto per_seed = static_cast<std::size_t>(config.n_periods) + 1;
  std::vector<SectionPoint> out(seeds * per_seed);
  const double h = 2.0 * kPi / config.steps_per_period;
  parallel_for(seeds, [&](std::size_t s) {
    PhasePoint x = config.initial_conditions[s];
    const double tau0 = x.tau;
    for (long m = 0; m <= config.n_periods; ++m) {
      if (m > 0) {
        x = advance(x, config.lambda, config.V0_tilde, h, config.steps_per_period);
        // Re-anchor the clock to suppress round-off drift in tau.
        x.tau = tau0 + 2.0 * kPi * m;
      }
      out[s * per_seed + m] = {s, m, reduce_to_cell(x)};
    }
  });
  return out;
}

std::vector<PhasePoint> default_seeds(double p_max, int count) {
  if (count < 1) throw DomainError("seed count must be positive");
  if (!(p_max > 0.0)) throw DomainError("p_max must be positive");
  int nz = static_cast<int>(std::ceil(std::sqrt(count * 1.6)));
  nz = std::max(1, std::min(nz, count));
  const int np = (count + nz - 1) / nz;
  std::vector<PhasePoint> out;
  for (int j = 0; j < np && static_cast<int>(out.size()) < count; ++j) {
    const double p = np == 1 ? 0.0 : -p_max + 2.0 * p_max * j / (np - 1);
    for (int i = 0; i < nz && static_cast<int>(out.size()) < count; ++i) {
      const double z = -kPi + 2.0 * kPi * (i + 0.5) / nz;
      out.push_back({z, p, 0.0, 0});
    }
  }
  return out;
}

namespace {

double dispersion(double z, double p, double lambda, double V0_tilde, long periods, int steps) {
  const double h = 2.0 * kPi / steps;
  PhasePoint x{z, p, 0.0, 0};
  double sum = 0.0;
  for (long m = 1; m <= periods; ++m) {
    x = advance(x, lambda, V0_tilde, h, steps);
    x.tau = 2.0 * kPi * m;
    const double dz = wrapped_diff(x.z, z);
    const double dp = x.p - p;
    sum += dz * dz + dp * dp;
  }
  return sum / periods;
}

std::pair<PhasePoint, double> nelder_mead(double z0, double p0, double sz, double sp, double lambda, double V0_tilde,
                                          long periods, int steps) {
  auto f = [&](const std::array<double, 2>& v) { return dispersion(v[0], v[1], lambda, V0_tilde, periods, steps); };
  std::array<std::array<double, 2>, 3> s = {{{z0, p0}, {z0 + 0.5 * sz, p0}, {z0, p0 + 0.5 * sp}}};
  std::array<double, 3> fv = {f(s[0]), f(s[1]), f(s[2])};
  for (int it = 0; it < 400; ++it) {
    std::array<int, 3> o = {0, 1, 2};
    std::sort(o.begin(), o.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const auto b = s[o[0]];
    const auto m = s[o[1]];
    const auto w = s[o[2]];
    if (std::abs(fv[o[2]] - fv[o[0]]) < 1e-16 && std::hypot(w[0] - b[0], w[1] - b[1]) < 1e-10) break;
    const std::array<double, 2> c = {0.5 * (b[0] + m[0]), 0.5 * (b[1] + m[1])};
    auto along = [&](double t) { return std::array<double, 2>{c[0] + t * (w[0] - c[0]), c[1] + t * (w[1] - c[1])}; };
    const auto r = along(-1.0);
    const double fr = f(r);
    if (fr < fv[o[0]]) {
      const auto e = along(-2.0);
      const double fe = f(e);
      s[o[2]] = fe < fr ? e : r;
      fv[o[2]] = std::min(fe, fr);
    } else if (fr < fv[o[1]]) {
      s[o[2]] = r;
      fv[o[2]] = fr;
    } else {
      const auto k = along(fr < fv[o[2]] ? -0.5 : 0.5);
      const double fk = f(k);
      if (fk < std::min(fr, fv[o[2]])) {
        s[o[2]] = k;
        fv[o[2]] = fk;
      } else {
        for (int idx : {o[1], o[2]}) {
          s[idx] = {0.5 * (s[idx][0] + b[0]), 0.5 * (s[idx][1] + b[1])};
          fv[idx] = f(s[idx]);
        }
      }
    }
  }
  const auto k = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  PhasePoint c = reduce_to_cell({s[k][0], s[k][1], 0.0, 0});
  c.winding = 0;
  return {c, fv[k]};
}

}  // namespace

double monodromy_trace(const PhasePoint& x, double lambda, double V0_tilde, int steps_per_period) {
  const double h = 2.0 * kPi / steps_per_period;
  const double e = 1e-6;
  auto map = [&](double z, double p) { return advance({z, p, x.tau, 0}, lambda, V0_tilde, h, steps_per_period); };
  const PhasePoint zp = map(x.z + e, x.p);
  const PhasePoint zm = map(x.z - e, x.p);
  const PhasePoint pp = map(x.z, x.p + e);
  const PhasePoint pm = map(x.z, x.p - e);
  return (zp.z - zm.z) / (2.0 * e) + (pp.p - pm.p) / (2.0 * e);
}

IslandCentre find_island_centre(double lambda, double V0_tilde, const IslandSearch& search, int steps_per_period) {
  if (search.grid < 2 || search.periods < 1) throw DomainError("island search needs grid >= 2 and periods >= 1");
  if (!(search.z_max > search.z_min) || !(search.p_max > search.p_min)) throw DomainError("empty island search box");
  const int g = search.grid;
  std::vector<double> cost(static_cast<std::size_t>(g) * g);
  auto zi = [&](int i) { return search.z_min + (search.z_max - search.z_min) * i / (g - 1); };
  auto pj = [&](int j) { return search.p_min + (search.p_max - search.p_min) * j / (g - 1); };
  parallel_for(cost.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) / g;
    const int j = static_cast<int>(k) % g;
    cost[k] = dispersion(zi(i), pj(j), lambda, V0_tilde, search.periods, steps_per_period);
  });

  // Refine the lowest few well-separated grid minima; several fixed points of
  // the stroboscopic map can exist, so keep the most stable elliptic one.
  std::vector<std::size_t> order(cost.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
  std::vector<std::size_t> starts;
  for (std::size_t k : order) {
    if (starts.size() >= 6) break;
    bool far = true;
    for (std::size_t s : starts) {
      if (std::abs(static_cast<int>(k / g) - static_cast<int>(s / g)) <= 2 &&
          std::abs(static_cast<int>(k % g) - static_cast<int>(s % g)) <= 2) {
        far = false;
      }
    }
    if (far) starts.push_back(k);
  }
  const double sz = (search.z_max - search.z_min) / (g - 1);
  const double sp = (search.p_max - search.p_min) / (g - 1);
  std::vector<IslandCentre> found(starts.size());
  parallel_for(starts.size(), [&](std::size_t n) {
    const int i = static_cast<int>(starts[n]) / g;
    const int j = static_cast<int>(starts[n]) % g;
    const auto [c, d] = nelder_mead(zi(i), pj(j), sz, sp, lambda, V0_tilde, search.periods, steps_per_period);
    found[n] = {c, d, monodromy_trace(c, lambda, V0_tilde, steps_per_period)};
  });
  const IslandCentre* best = nullptr;
  for (const IslandCentre& c : found) {
    if (c.dispersion > 1e-8 || std::abs(c.trace) >= 2.0) continue;
    if (best == nullptr || std::abs(c.trace) < std::abs(best->trace)) best = &c;
  }
  if (best == nullptr) {
    best = &*std::min_element(found.begin(), found.end(),
                              [](const IslandCentre& a, const IslandCentre& b) { return a.dispersion < b.dispersion; });
  }
  return *best;
}

Persistence island_persistence(const PhasePoint& centre, double lambda, double V0_tilde, long n_periods,
                               double radius, int steps_per_period) {
  if (steps_per_period < 500) throw DomainError("steps_per_period must be >= 500");
  const double h = 2.0 * kPi / steps_per_period;
  PhasePoint x = centre;
  Persistence out{true, 0.0};
  for (long m = 1; m <= n_periods; ++m) {
    x = advance(x, lambda, V0_tilde, h, steps_per_period);
    x.tau = centre.tau + 2.0 * kPi * m;
    const double d = std::hypot(wrapped_diff(x.z, centre.z), x.p - centre.p);
    out.max_distance = std::max(out.max_distance, d);
    if (d > radius) out.bounded = false;
  }
  return out;
}

double section_coverage(const PhasePoint& seed, double lambda, double V0_tilde, long n_periods,
                        const CoverageGrid& grid, int steps_per_period) {
  if (grid.bins < 1 || !(grid.p_max > grid.p_min)) throw DomainError("invalid coverage grid");
  if (steps_per_period < 500) throw DomainError("steps_per_period must be >= 500");
  const double h = 2.0 * kPi / steps_per_period;
  std::set<long> visited;
  PhasePoint x = seed;
  for (long m = 1; m <= n_periods; ++m) {
    x = advance(x, lambda, V0_tilde, h, steps_per_period);
    x.tau = seed.tau + 2.0 * kPi * m;
    const PhasePoint r = reduce_to_cell(x);
    if (r.p < grid.p_min || r.p >= grid.p_max) continue;
    const long i = std::min<long>(grid.bins - 1, static_cast<long>((r.z + kPi) / (2.0 * kPi) * grid.bins));
    const long j = std::min<long>(grid.bins - 1, static_cast<long>((r.p - grid.p_min) / (grid.p_max - grid.p_min) * grid.bins));
    visited.insert(i * grid.bins + j);
  }
  return static_cast<double>(visited.size()) / (static_cast<double>(grid.bins) * grid.bins);
}

PhasePoint separatrix_seed(double V0_tilde) {
  if (!(V0_tilde > 0.0)) throw DomainError("separatrix needs V0_tilde > 0");
  return {0.0, 1e-3, 0.0, 0};
}

}  // namespace qrev
