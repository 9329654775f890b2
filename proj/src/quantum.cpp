#include "qrev/quantum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>

#include "fft.hpp"
#include "qrev/error.hpp"
#include "qrev/support.hpp"

namespace qrev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const SpatialGrid& a, const SpatialGrid& b) {
  if (a.n_points != b.n_points || a.z_min != b.z_min || a.z_max != b.z_max) {
    throw DomainError("wave functions live on different grids");
  }
}

// psi(z) -> psi(z + shift) by a spectral phase ramp.
void spectral_shift(std::vector<cplx>& psi, const SpatialGrid& grid, double shift, const detail::Fft& fft) {
  fft.forward(psi.data());
  const double inv_n = 1.0 / grid.n_points;
  for (int i = 0; i < grid.n_points; ++i) {
    psi[i] *= std::exp(kI * (grid.wavenumber(i) * shift)) * inv_n;
  }
  fft.backward(psi.data());
}

double frame_action(double z, double tau, double lambda) {
  return -lambda * std::cos(tau) * z + lambda * lambda * (tau / 4.0 - 3.0 * std::sin(2.0 * tau) / 8.0);
}

}  // namespace

SpatialGrid SpatialGrid::periodic(int cells, int n_points) {
  if (cells < 1) throw DomainError("grid needs at least one lattice cell");
  if (!is_power_of_two(n_points) || n_points < 16) {
    throw DomainError("grid size must be a power of two >= 16, got " + std::to_string(n_points));
  }
  SpatialGrid g;
  g.n_points = n_points;
  g.cells = cells;
  g.z_min = -kPi * cells;
  g.z_max = kPi * cells;
  return g;
}

double SpatialGrid::wavenumber(int i) const {
  const int m = i < n_points / 2 ? i : i - n_points;
  return 2.0 * kPi * m / length();
}

double WaveFunction::norm() const {
  double s = 0.0;
  for (const cplx& v : psi) s += std::norm(v);
  return s * grid.dz();
}

void WaveFunction::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw DomainError("cannot normalise a zero wave function");
  const double f = 1.0 / std::sqrt(n);
  for (cplx& v : psi) v *= f;
}

cplx WaveFunction::overlap(const WaveFunction& other) const {
  require_same_grid(grid, other.grid);
  cplx s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) s += std::conj(psi[i]) * other.psi[i];
  return s * grid.dz();
}

double WaveFunction::mean_position() const {
  double s = 0.0;
  double w = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double p = std::norm(psi[i]);
    s += p * grid.z(i);
    w += p;
  }
  return s / w;
}

namespace {

std::pair<double, double> momentum_moments(const WaveFunction& wf, double kbar) {
  std::vector<cplx> spec = wf.psi;
  detail::Fft fft(wf.grid.n_points);
  fft.forward(spec.data());
  double w = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < wf.grid.n_points; ++i) {
    const double p = std::norm(spec[i]);
    const double k = kbar * wf.grid.wavenumber(i);
    w += p;
    m1 += p * k;
    m2 += p * k * k;
  }
  return {m1 / w, m2 / w};
}

}  // namespace

double WaveFunction::mean_momentum(double kbar) const { return momentum_moments(*this, kbar).first; }

double WaveFunction::momentum_spread(double kbar) const {
  const auto [m1, m2] = momentum_moments(*this, kbar);
  return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

double WaveFunction::inverse_participation_ratio() const {
  double s2 = 0.0;
  double s4 = 0.0;
  for (const cplx& v : psi) {
    const double p = std::norm(v);
    s2 += p;
    s4 += p * p;
  }
  const double dz = grid.dz();
  return s4 * dz / (s2 * dz * s2 * dz);
}

void DriveConfig::validate() const {
  if (!(V0_tilde >= 0.0) || !std::isfinite(V0_tilde)) throw DomainError("V0_tilde must be finite and >= 0");
  if (!(kbar > 0.0) || !std::isfinite(kbar)) throw DomainError("kbar must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and >= 0");
  if (!(dt > 0.0) || dt > 2.0 * kPi / 200.0 * (1.0 + 1e-12)) {
    throw DomainError("dt must lie in (0, 2 pi / 200]");
  }
  if (n_steps < 0) throw DomainError("n_steps must be >= 0");
  if (!(norm_tolerance > 0.0)) throw DomainError("norm_tolerance must be positive");
}

std::vector<double> TrajectoryRecord::autocorr_abs2() const {
  std::vector<double> out(autocorr.size());
  for (std::size_t i = 0; i < autocorr.size(); ++i) out[i] = std::norm(autocorr[i]);
  return out;
}

WaveFunction init_gaussian(const SpatialGrid& grid, double z0, double p0, double delta_z, double kbar) {
  if (!(kbar > 0.0)) throw DomainError("kbar must be positive");
  if (!(delta_z >= 2.0 * grid.dz())) {
    throw DomainError("packet width must cover at least two grid spacings");
  }
  if (delta_z > grid.length() / 8.0) throw DomainError("packet width too large for the grid");
  WaveFunction wf;
  wf.grid = grid;
  wf.psi.assign(grid.n_points, 0.0);
  const double L = grid.length();
  for (int i = 0; i < grid.n_points; ++i) {
    const double z = grid.z(i);
    for (int image = -1; image <= 1; ++image) {
      const double d = z - (z0 + image * L);
      wf.psi[i] += std::exp(-d * d / (4.0 * delta_z * delta_z) + kI * (p0 * d / kbar));
    }
  }
  wf.normalize();
  return wf;
}

double minimum_uncertainty_width(double kbar, double delta_p) {
  if (!(kbar > 0.0) || !(delta_p > 0.0)) throw DomainError("kbar and delta_p must be positive");
  return kbar / (2.0 * delta_p);
}

namespace {

class SplitStepper {
 public:
  SplitStepper(const SpatialGrid& grid, const DriveConfig& config) : grid_(grid), config_(config), fft_(grid.n_points) {
    const int n = grid.n_points;
    cos2z_.resize(n);
    sin2z_.resize(n);
    z_.resize(n);
    k2_.resize(n);
    for (int i = 0; i < n; ++i) {
      z_[i] = grid.z(i);
      cos2z_[i] = std::cos(2.0 * z_[i]);
      sin2z_[i] = std::sin(2.0 * z_[i]);
      const double k = grid.wavenumber(i);
      k2_[i] = k * k;
    }
    if (config.integrator == Integrator::strang) {
      weights_ = {1.0};
    } else {
      const double c = std::cbrt(2.0);
      const double w1 = 1.0 / (2.0 - c);
      weights_ = {w1, 1.0 - 2.0 * w1, w1};
    }
    for (double w : weights_) kinetic_.push_back(kinetic_phase(w * config.dt));
    half_kick_.resize(n);
  }

  void step(std::vector<cplx>& psi, double t) {
    double s = t;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      const double h = weights_[k] * config_.dt;
      strang(psi, s + 0.5 * h, h, kinetic_[k]);
      s += h;
    }
  }

 private:
  std::vector<cplx> kinetic_phase(double h) const {
    std::vector<cplx> out(grid_.n_points);
    const double inv_n = 1.0 / grid_.n_points;
    for (int i = 0; i < grid_.n_points; ++i) {
      out[i] = std::exp(-kI * (0.5 * config_.kbar * k2_[i] * h)) * inv_n;
    }
    return out;
  }

  void strang(std::vector<cplx>& psi, double t_mid, double h, const std::vector<cplx>& kinetic) {
    const int n = grid_.n_points;
    const double a = 0.5 * config_.V0_tilde;
    const double scale = -0.5 * h / config_.kbar;
    if (config_.frame == Frame::lab_phase_modulated) {
      const double phi = 2.0 * config_.lambda * std::sin(t_mid);
      const double cp = std::cos(phi);
      const double sp = std::sin(phi);
      for (int i = 0; i < n; ++i) {
        const double v = a * (cos2z_[i] * cp - sin2z_[i] * sp);
        half_kick_[i] = std::polar(1.0, scale * v);
      }
    } else {
      const double f = config_.lambda * std::sin(t_mid);
      for (int i = 0; i < n; ++i) {
        const double v = a * cos2z_[i] + f * z_[i];
        half_kick_[i] = std::polar(1.0, scale * v);
      }
    }
    for (int i = 0; i < n; ++i) psi[i] *= half_kick_[i];
    fft_.forward(psi.data());
    for (int i = 0; i < n; ++i) psi[i] *= kinetic[i];
    fft_.backward(psi.data());
    for (int i = 0; i < n; ++i) psi[i] *= half_kick_[i];
  }

  SpatialGrid grid_;
  DriveConfig config_;
  detail::Fft fft_;
  std::vector<double> z_, cos2z_, sin2z_, k2_;
  std::vector<double> weights_;
  std::vector<std::vector<cplx>> kinetic_;
  std::vector<cplx> half_kick_;
};

// Fraction of |psi_k|^2 in the outer fifth of the momentum grid.
double spectral_tail(const WaveFunction& wf) {
  std::vector<cplx> spec = wf.psi;
  detail::Fft fft(wf.grid.n_points);
  fft.forward(spec.data());
  const int n = wf.grid.n_points;
  double total = 0.0;
  double tail = 0.0;
  for (int i = 0; i < n; ++i) {
    const int m = i < n / 2 ? i : n - i;
    const double p = std::norm(spec[i]);
    total += p;
    if (m > 2 * n / 5) tail += p;
  }
  return tail / total;
}

}  // namespace

TrajectoryRecord evolve(const WaveFunction& psi, const DriveConfig& config, const RecordSpec& record) {
  config.validate();
  if (record.density_subsample < 1) throw DomainError("density_subsample must be >= 1");
  if (static_cast<int>(psi.psi.size()) != psi.grid.n_points) throw DomainError("wave function size mismatch");
  const SpatialGrid& grid = psi.grid;
  const double n0 = psi.norm();
  if (std::abs(n0 - 1.0) > 1e-8) throw DomainError("initial state is not normalised");
  const double kmax = grid.n_points / 2.0 * 2.0 * kPi / grid.length();
  const double needed = (config.lambda + std::sqrt(2.0 * config.V0_tilde)) / config.kbar;
  if (needed > 0.5 * kmax || spectral_tail(psi) > 1e-10) {
    std::ostringstream os;
    os << "grid may under-resolve the dynamics (max momentum " << config.kbar * kmax << ")";
    warn(os.str());
  }

  TrajectoryRecord out;
  const auto n_steps = static_cast<std::size_t>(config.n_steps);
  out.times.reserve(n_steps + 1);
  out.autocorr.reserve(n_steps + 1);
  out.norm_log.reserve(n_steps + 1);

  std::vector<cplx> state = psi.psi;
  const double dz = grid.dz();
  auto sample = [&](long step, double t) {
    cplx c = 0.0;
    double nrm = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
      c += std::conj(psi.psi[i]) * state[i];
      nrm += std::norm(state[i]);
    }
    nrm *= dz;
    out.times.push_back(t);
    out.autocorr.push_back(c * dz);
    out.norm_log.push_back(nrm);
    if (!(std::abs(nrm - 1.0) <= config.norm_tolerance)) {
      std::ostringstream os;
      os << "norm drifted to " << nrm << " at tau = " << t;
      throw NormDriftError(os.str());
    }
    if (record.density_stride > 0 && step % record.density_stride == 0) {
      std::vector<double> d;
      d.reserve(grid.n_points / record.density_subsample + 1);
      for (int i = 0; i < grid.n_points; i += record.density_subsample) d.push_back(std::norm(state[i]));
      out.density_times.push_back(t);
      out.density.push_back(std::move(d));
    }
    if (record.ipr_stride > 0 && step % record.ipr_stride == 0) {
      WaveFunction tmp{grid, state, t};
      out.ipr_times.push_back(t);
      out.ipr.push_back(tmp.inverse_participation_ratio());
    }
  };

  SplitStepper stepper(grid, config);
  sample(0, psi.time);
  for (long s = 0; s < config.n_steps; ++s) {
    const double t = psi.time + s * config.dt;
    stepper.step(state, t);
    sample(s + 1, psi.time + (s + 1) * config.dt);
  }
  out.final_state = WaveFunction{grid, std::move(state), psi.time + config.n_steps * config.dt};
  return out;
}

WaveFunction frame_transform(const WaveFunction& psi, double tau, const DriveConfig& config,
                             FrameDirection direction) {
  const SpatialGrid& grid = psi.grid;
  const double shift = config.lambda * std::sin(tau);
  detail::Fft fft(grid.n_points);
  WaveFunction out = psi;
  out.time = tau;
  if (direction == FrameDirection::comoving_to_lab) {
    spectral_shift(out.psi, grid, shift, fft);
    for (int i = 0; i < grid.n_points; ++i) {
      out.psi[i] *= std::polar(1.0, frame_action(grid.z(i), tau, config.lambda) / config.kbar);
    }
  } else {
    for (int i = 0; i < grid.n_points; ++i) {
      out.psi[i] *= std::polar(1.0, -frame_action(grid.z(i), tau, config.lambda) / config.kbar);
    }
    spectral_shift(out.psi, grid, -shift, fft);
  }
  return out;
}

Eigenbasis undriven_eigenbasis(const SpatialGrid& grid, double V0_tilde, double kbar, int count) {
  if (!(kbar > 0.0)) throw DomainError("kbar must be positive");
  if (!(V0_tilde >= 0.0)) throw DomainError("V0_tilde must be >= 0");
  const int n = grid.n_points;
  const int L = grid.cells;
  const int B = 2 * L;
  if (n % B != 0 || n / B < 3) throw DomainError("grid size must be a multiple of 2 cells with >= 3 modes per block");
  if (count < 1 || count > n / 4) throw DomainError("eigenstate count must lie in [1, n_points/4]");
  const int P = n / B;

  struct Block {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
  };
  std::vector<Block> blocks(L + 1);
  for (int r = 0; r <= L; ++r) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(P, P);
    for (int j = 0; j < P; ++j) {
      const double k = grid.wavenumber(r + j * B);
      H(j, j) = 0.5 * kbar * kbar * k * k;
      const int next = (j + 1) % P;
      H(j, next) += 0.25 * V0_tilde;
      H(next, j) += 0.25 * V0_tilde;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success) throw ConvergenceError("block eigensolver failed");
    Block b{solver.eigenvalues(), solver.eigenvectors()};

    // Self-conjugate blocks hold both c(m) and c(-m); fix parity inside
    // degenerate groups.
    if (r == 0 || r == L) {
      std::vector<int> partner(P);
      for (int j = 0; j < P; ++j) {
        const int i = r + j * B;
        const int ip = (n - i) % n;
        partner[j] = (ip - r) / B;
      }
      int start = 0;
      while (start < P) {
        int end = start + 1;
        while (end < P && std::abs(b.energies(end) - b.energies(start)) <= 1e-9 * std::max(1.0, std::abs(b.energies(start)))) {
          ++end;
        }
        const int g = end - start;
        if (g > 1) {
          Eigen::MatrixXd par(g, g);
          for (int a = 0; a < g; ++a) {
            for (int c = 0; c < g; ++c) {
              double s = 0.0;
              for (int j = 0; j < P; ++j) s += b.vectors(j, start + a) * b.vectors(partner[j], start + c);
              par(a, c) = s;
            }
          }
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(0.5 * (par + par.transpose()));
          b.vectors.middleCols(start, g) = b.vectors.middleCols(start, g) * ps.eigenvectors();
        }
        start = end;
      }
    }
    blocks[r] = std::move(b);
  }

  // (energy, block, level, part) with part 0 = whole, 1 = real, 2 = imaginary.
  using Entry = std::tuple<double, int, int, int>;
  std::vector<Entry> entries;
  for (int r = 0; r <= L; ++r) {
    for (int p = 0; p < P; ++p) {
      const double e = blocks[r].energies(p);
      if (r == 0 || r == L) {
        entries.emplace_back(e, r, p, 0);
      } else {
        entries.emplace_back(e, r, p, 1);
        entries.emplace_back(e, r, p, 2);
      }
    }
  }
  std::sort(entries.begin(), entries.end());
  entries.resize(count);

  Eigenbasis basis;
  basis.states_per_band = B;
  detail::Fft fft(n);
  const double norm = 1.0 / std::sqrt(grid.length());
  for (const auto& [e, r, p, part] : entries) {
    std::vector<cplx> c(n, 0.0);
    for (int j = 0; j < P; ++j) {
      const int i = r + j * B;
      c[i] = blocks[r].vectors(j, p) * std::exp(kI * (grid.wavenumber(i) * grid.z_min)) * norm;
    }
    fft.backward(c.data());
    if (part == 1) {
      for (cplx& v : c) v = std::sqrt(2.0) * v.real();
    } else if (part == 2) {
      for (cplx& v : c) v = std::sqrt(2.0) * v.imag();
    }
    WaveFunction wf{grid, std::move(c), 0.0};
    wf.normalize();
    basis.energies.push_back(e);
    basis.states.push_back(std::move(wf));
    basis.band.push_back(p);
  }
  return basis;
}

std::vector<double> band_centres(const Eigenbasis& basis) {
  if (basis.band.empty()) return {};
  const int bands = *std::max_element(basis.band.begin(), basis.band.end()) + 1;
  std::vector<double> sum(bands, 0.0);
  std::vector<int> cnt(bands, 0);
  for (std::size_t i = 0; i < basis.band.size(); ++i) {
    sum[basis.band[i]] += basis.energies[i];
    ++cnt[basis.band[i]];
  }
  std::vector<double> out;
  for (int b = 0; b < bands; ++b) {
    if (cnt[b] != basis.states_per_band) break;
    out.push_back(sum[b] / cnt[b]);
  }
  return out;
}

std::vector<cplx> expand(const Eigenbasis& basis, const WaveFunction& psi) {
  std::vector<cplx> out(basis.states.size());
  parallel_for(out.size(), [&](std::size_t k) { out[k] = basis.states[k].overlap(psi); });
  return out;
}

WaveFunction evolve_in_basis(const Eigenbasis& basis, const std::vector<cplx>& coefficients, double tau,
                             double kbar) {
  if (coefficients.size() != basis.states.size()) throw DomainError("coefficient count does not match the basis");
  if (basis.states.empty()) throw DomainError("empty eigenbasis");
  WaveFunction out{basis.states.front().grid, std::vector<cplx>(basis.states.front().psi.size(), 0.0), tau};
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    const cplx a = coefficients[k] * std::polar(1.0, -basis.energies[k] * tau / kbar);
    const auto& phi = basis.states[k].psi;
    for (std::size_t i = 0; i < phi.size(); ++i) out.psi[i] += a * phi[i];
  }
  return out;
}

EffectiveTrajectory effective_evolve(const EffectiveState& c0, const ResonanceModel& model, long n_steps, double dt,
                                     long snapshot_stride, double edge_tolerance) {
  const int S = static_cast<int>(c0.c.size());
  const int N = model.N;
  if (N < 1) throw DomainError("resonance order N must be >= 1");
  if (S < 2 * N + 1) throw DomainError("effective basis too small for the resonance order");
  if (!(dt > 0.0) || n_steps < 0) throw DomainError("need dt > 0 and n_steps >= 0");

  const double kbar = model.kbar;
  std::vector<double> diag(S);
  for (int i = 0; i < S; ++i) {
    const double d = c0.n_first + i - model.n_bar;
    diag[i] = kbar * d * (model.omega - 1.0 / N) + 0.5 * kbar * kbar * model.zeta * d * d;
  }
  const double coupling = model.lambda * model.V / 2.0;
  double rate = 0.0;
  for (double d : diag) rate = std::max(rate, std::abs(d));
  rate = (rate + 2.0 * std::abs(coupling)) / kbar;
  // RK4 is stable on the imaginary axis up to |h lambda| = 2 sqrt(2).
  if (rate * dt > 2.5) {
    std::ostringstream os;
    os << "dt = " << dt << " is unstable for this basis; need dt < " << 2.5 / rate;
    throw DomainError(os.str());
  }
  auto rhs = [&](const std::vector<cplx>& c, std::vector<cplx>& out) {
    for (int i = 0; i < S; ++i) {
      const cplx up = i + N < S ? c[i + N] : 0.0;
      const cplx down = i - N >= 0 ? c[i - N] : 0.0;
      const cplx h = diag[i] * c[i] - kI * coupling * (up - down);
      out[i] = -kI * h / kbar;
    }
  };

  EffectiveTrajectory traj;
  std::vector<cplx> c = c0.c;
  std::vector<cplx> k1(S), k2(S), k3(S), k4(S), tmp(S);
  auto record = [&](long step) {
    cplx a = 0.0;
    double nrm = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    for (int i = 0; i < S; ++i) {
      a += std::conj(c0.c[i]) * c[i];
      const double p = std::norm(c[i]);
      nrm += p;
      if (i < N) lo += p;
      if (i >= S - N) hi += p;
    }
    traj.times.push_back(step * dt);
    traj.autocorr.push_back(a);
    traj.norm_log.push_back(nrm);
    if (lo > edge_tolerance || hi > edge_tolerance) {
      std::ostringstream os;
      os << "population " << std::max(lo, hi) << " reached the basis edge at t = " << step * dt;
      throw TruncationError(os.str());
    }
    if (snapshot_stride > 0 && step % snapshot_stride == 0) traj.snapshots.push_back({c0.n_first, c});
  };

  record(0);
  for (long s = 0; s < n_steps; ++s) {
    rhs(c, k1);
    for (int i = 0; i < S; ++i) tmp[i] = c[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (int i = 0; i < S; ++i) tmp[i] = c[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (int i = 0; i < S; ++i) tmp[i] = c[i] + dt * k3[i];
    rhs(tmp, k4);
    for (int i = 0; i < S; ++i) c[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    record(s + 1);
  }
  traj.final_state = {c0.n_first, std::move(c)};
  return traj;
}

namespace {

struct Peak {
  bool found = false;
  std::size_t first = 0;  // plateau start
  std::size_t last = 0;   // plateau end
  double prominence = 0.0;
};

// Most prominent local maximum of y inside [lo, hi]; bases are searched
// within the same window.
Peak most_prominent(const std::vector<double>& y, std::size_t lo, std::size_t hi) {
  Peak best;
  if (hi >= y.size()) hi = y.size() - 1;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 <= hi && y[j + 1] == y[i]) ++j;
    if (j + 1 > hi || !(y[j + 1] < y[i])) {
      i = j;
      continue;
    }
    double left = y[i];
    for (std::size_t k = i; k-- > lo;) {
      if (y[k] > y[i]) break;
      left = std::min(left, y[k]);
    }
    double right = y[i];
    for (std::size_t k = j + 1; k <= hi; ++k) {
      if (y[k] > y[i]) break;
      right = std::min(right, y[k]);
    }
    const double prom = y[i] - std::max(left, right);
    if (!best.found || prom > best.prominence) best = {true, i, j, prom};
    i = j;
  }
  return best;
}

// Normalised autocorrelation of the mean-subtracted signal for lags
// [0, max_lag], via zero-padded FFT.
std::vector<double> signal_autocorrelation(const std::vector<double>& s, std::size_t max_lag) {
  const std::size_t n = s.size();
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
  int m = 1;
  while (static_cast<std::size_t>(m) < 2 * n) m *= 2;
  std::vector<cplx> buf(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) buf[i] = s[i] - mean;
  detail::Fft fft(m);
  fft.forward(buf.data());
  for (cplx& v : buf) v = std::norm(v);
  fft.backward(buf.data());
  std::vector<double> r(max_lag + 1);
  const double r0 = buf[0].real();
  // Unbiased estimate: each lag is averaged over its own overlap length.
  for (std::size_t k = 0; k <= max_lag && k < n; ++k) {
    r[k] = r0 > 0.0 ? buf[k].real() / (n - k) / (r0 / n) : 0.0;
  }
  return r;
}

std::vector<double> moving_max(const std::vector<double>& s, std::size_t half) {
  const std::size_t n = s.size();
  std::vector<double> out(n);
  std::deque<std::size_t> dq;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t hi = std::min(n - 1, i + half);
    while (next <= hi) {
      while (!dq.empty() && s[dq.back()] <= s[next]) dq.pop_back();
      dq.push_back(next++);
    }
    while (dq.front() + half < i) dq.pop_front();
    out[i] = s[dq.front()];
  }
  return out;
}

RecurrenceScale envelope_peak(const std::vector<double>& times, const std::vector<double>& abs2,
                              const std::vector<double>& env, double hint, double dt, std::size_t half,
                              const DetectionOptions& opts) {
  RecurrenceScale out;
  const double t0 = times.front();
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(opts.window_lo * hint / dt)));
  const auto hi = static_cast<std::size_t>(std::ceil(opts.window_hi * hint / dt));
  if (hi >= times.size() || lo + 2 > hi) return out;
  const Peak p = most_prominent(env, lo, hi);
  if (!p.found) return out;
  const std::size_t a = p.first > half ? p.first - half : 0;
  const std::size_t b = std::min(times.size() - 1, p.last + half);
  std::size_t arg = a;
  for (std::size_t i = a; i <= b; ++i) {
    if (abs2[i] > abs2[arg]) arg = i;
  }
  out.estimate = times[arg] - t0;
  out.prominence = p.prominence;
  out.found = p.prominence >= opts.prominence_threshold;
  return out;
}

}  // namespace

RecurrenceEstimate detect_recurrences(const std::vector<double>& times, const std::vector<double>& abs2,
                                      const RecurrenceHints& hints, const DetectionOptions& options) {
  if (times.size() != abs2.size() || times.size() < 8) throw DomainError("need matching series of >= 8 samples");
  if (!(hints.t_cl > 0.0) || !(hints.t_rev > 0.0)) throw DomainError("recurrence hints must be positive");
  if (!(options.window_lo >= 0.0) || !(options.window_hi > options.window_lo)) {
    throw DomainError("invalid detection window");
  }
  const double dt = (times.back() - times.front()) / (times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-6 * dt) throw DomainError("time grid is not uniform");
  }
  const double span = times.back() - times.front();
  if (span < options.window_hi * hints.t_rev) {
    throw DomainError("record shorter than the revival search window");
  }

  RecurrenceEstimate est;
  const auto max_lag = static_cast<std::size_t>(std::ceil(options.window_hi * hints.t_cl / dt)) + 1;
  const std::vector<double> r = signal_autocorrelation(abs2, max_lag);
  const auto lo = static_cast<std::size_t>(std::floor(options.window_lo * hints.t_cl / dt));
  const Peak p = most_prominent(r, lo, max_lag);
  if (p.found) {
    // Parabolic refinement around the plateau centre.
    const std::size_t c = (p.first + p.last) / 2;
    double offset = 0.0;
    if (c > 0 && c + 1 < r.size()) {
      const double den = r[c - 1] - 2.0 * r[c] + r[c + 1];
      if (den < 0.0) offset = 0.5 * (r[c - 1] - r[c + 1]) / den;
    }
    est.cl.estimate = (c + offset) * dt;
    est.cl.prominence = p.prominence;
    est.cl.found = p.prominence >= options.prominence_threshold;
  }

  const double period = est.cl.found ? est.cl.estimate : hints.t_cl;
  const auto half = static_cast<std::size_t>(std::max(1.0, std::round(0.5 * period / dt)));
  const std::vector<double> env = moving_max(abs2, half);
  est.rev = envelope_peak(times, abs2, env, hints.t_rev, dt, half, options);
  if (hints.t_spr && *hints.t_spr > 0.0 && std::isfinite(*hints.t_spr)) {
    est.spr = envelope_peak(times, abs2, env, *hints.t_spr, dt, half, options);
  }
  return est;
}

RecurrenceEstimate detect_recurrences(const TrajectoryRecord& record, const RecurrenceHints& hints,
                                      const DetectionOptions& options) {
  return detect_recurrences(record.times, record.autocorr_abs2(), hints, options);
}

const char* to_string(Frame frame) {
  return frame == Frame::lab_phase_modulated ? "lab_phase_modulated" : "comoving_tilted";
}

Frame parse_frame(const char* text) {
  const std::string s = text;
  if (s == "lab_phase_modulated" || s == "lab") return Frame::lab_phase_modulated;
  if (s == "comoving_tilted" || s == "comoving") return Frame::comoving_tilted;
  throw DomainError("unknown frame: " + s);
}

const char* to_string(Integrator integrator) { return integrator == Integrator::strang ? "strang" : "yoshida4"; }

Integrator parse_integrator(const char* text) {
  const std::string s = text;
  if (s == "strang") return Integrator::strang;
  if (s == "yoshida4") return Integrator::yoshida4;
  throw DomainError("unknown integrator: " + s);
}

}  // namespace qrev
