#include "qrev/mathieu.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>

#include "qrev/error.hpp"

namespace qrev {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

void check_q(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw DomainError("Mathieu parameter q must be finite and >= 0, got " + std::to_string(q));
  }
}

// Number of eigenvalues strictly below x (Sturm sequence of the LDL^T pivots).
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
  int count = 0;
  double pivot = diag[0] - x;
  if (pivot < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (pivot == 0.0) pivot = -1e-300;
    pivot = diag[i] - x - off[i - 1] * off[i - 1] / pivot;
    if (pivot < 0.0) ++count;
  }
  return count;
}

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
  int index = 0;
};

// Fourier-mode matrix whose `index`-th eigenvalue is the requested
// characteristic value, truncated to `modes` basis functions.
Tridiagonal build_matrix(const MathieuOrder& order, double q, int modes) {
  Tridiagonal t;
  if (order.is_integer()) {
    const int m = static_cast<int>(std::lround(order.value));
    t.diag.resize(modes);
    t.off.assign(modes - 1, q);
    if (order.kind == MathieuKind::even_a && m % 2 == 0) {
      // cos(2kx), k >= 0; symmetrised first coupling.
      for (int k = 0; k < modes; ++k) t.diag[k] = 4.0 * k * k;
      if (modes > 1) t.off[0] = std::numbers::sqrt2 * q;
      t.index = m / 2;
    } else if (m % 2 == 1) {
      // cos((2k+1)x) or sin((2k+1)x)
      for (int k = 0; k < modes; ++k) t.diag[k] = (2.0 * k + 1.0) * (2.0 * k + 1.0);
      t.diag[0] += order.kind == MathieuKind::even_a ? q : -q;
      t.index = (m - 1) / 2;
    } else {
      // sin((2k+2)x), k >= 0
      for (int k = 0; k < modes; ++k) t.diag[k] = (2.0 * k + 2.0) * (2.0 * k + 2.0);
      t.index = m / 2 - 1;
    }
    return t;
  }
  // exp(i (mu + 2k) x), k = -K..K
  const double mu = order.fractional_part();
  const int half = modes / 2;
  const int size = 2 * half + 1;
  t.diag.resize(size);
  t.off.assign(size - 1, q);
  for (int i = 0; i < size; ++i) {
    const double v = mu + 2.0 * (i - half);
    t.diag[i] = v * v;
  }
  // |mu + 2k| runs over every value congruent to +-nu mod 2; exactly
  // floor(nu) of them lie below nu.
  t.index = static_cast<int>(std::floor(order.value));
  return t;
}

double exact_value(const MathieuOrder& order, double q, const ExactOptions& options, int* modes_used) {
  const int index_hint = static_cast<int>(std::floor(order.value));
  int modes = std::max(options.initial_modes, order.is_integer() ? index_hint / 2 + 32 : index_hint + 32);
  Tridiagonal t = build_matrix(order, q, modes);
  double previous = detail::tridiagonal_eigenvalue(t.diag, t.off, t.index);
  while (true) {
    const int next = modes * 2;
    if (next > options.max_modes) {
      throw ConvergenceError("Mathieu exact branch did not stabilise below " +
                             std::to_string(options.max_modes) + " modes (order " +
                             std::to_string(order.value) + ", q " + std::to_string(q) + ")");
    }
    t = build_matrix(order, q, next);
    const double current = detail::tridiagonal_eigenvalue(t.diag, t.off, t.index);
    modes = next;
    if (std::abs(current - previous) <= options.tolerance * std::max(1.0, std::abs(current))) {
      if (modes_used) *modes_used = modes;
      return current;
    }
    previous = current;
  }
}

void check_small_q(const MathieuOrder& order, double q) {
  if (q >= 1.0) {
    throw DomainError("small-q series needs q < 1, got q = " + std::to_string(q));
  }
  const double nu = order.value;
  const bool half_integer = near_integer(nu - 0.5);
  if (nu < 5.0 && !half_integer) {
    throw DomainError("small-q series needs order >= 5 or a half-integer order, got " +
                      std::to_string(nu));
  }
}

void check_large_q(const MathieuOrder& order, double q) {
  if (q < 10.0) {
    throw DomainError("large-q series needs q >= 10, got q = " + std::to_string(q));
  }
  if (order.value >= 0.5 * std::sqrt(q)) {
    throw DomainError("large-q series needs order < sqrt(q)/2, got order " +
                      std::to_string(order.value) + " at q = " + std::to_string(q));
  }
}

}  // namespace

MathieuOrder MathieuOrder::even(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw DomainError("Mathieu order must be finite and >= 0, got " + std::to_string(nu));
  }
  return {MathieuKind::even_a, nu};
}

MathieuOrder MathieuOrder::odd(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw DomainError("Mathieu order must be finite and >= 0, got " + std::to_string(nu));
  }
  if (near_integer(nu) && std::lround(nu) == 0) {
    throw DomainError("b_0 does not exist");
  }
  return {MathieuKind::odd_b, nu};
}

bool MathieuOrder::is_integer() const { return near_integer(value); }

double MathieuOrder::fractional_part() const {
  double mu = std::fmod(value, 2.0);
  if (mu < 0.0) mu += 2.0;
  return mu;
}

int MathieuOrder::ladder_index() const {
  return static_cast<int>(std::floor((value - fractional_part()) / 2.0 + 0.5));
}

double detail::tridiagonal_eigenvalue(const std::vector<double>& diag,
                                      const std::vector<double>& off, int k) {
  const int n = static_cast<int>(diag.size());
  if (k < 0 || k >= n) throw DomainError("eigenvalue index out of range");
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (int i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i < n - 1 ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  const double pad = kEps * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  lo -= pad;
  hi += pad;
  for (int iter = 0; iter < 2200; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(diag, off, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

double small_q_series(double nu, double q) { return nu * nu + q * q / (2.0 * (nu * nu - 1.0)); }

double large_q_series(double nu, double q) {
  const double s = 2.0 * nu + 1.0;
  const double rq = std::sqrt(q);
  return -2.0 * q + 2.0 * s * rq - (s * s + 1.0) / 8.0 - (s * s * s + 3.0 * s) / (128.0 * rq);
}

MathieuCharacteristic characteristic(MathieuOrder order, double q, MathieuMethod method,
                                     const ExactOptions& options) {
  check_q(q);
  MathieuCharacteristic out{order, q, 0.0, method, 0};
  switch (method) {
    case MathieuMethod::exact:
      out.value = exact_value(order, q, options, &out.modes);
      return out;
    case MathieuMethod::series_small_q:
      if (order.is_integer() && std::lround(order.value) <= 4) {
        out.method = MathieuMethod::exact;
        out.value = exact_value(order, q, options, &out.modes);
        return out;
      }
      check_small_q(order, q);
      out.value = small_q_series(order.value, q);
      return out;
    case MathieuMethod::series_large_q: {
      check_large_q(order, q);
      // b_nu pairs with a_{nu-1} in the large-q limit.
      const double nu = order.kind == MathieuKind::even_a ? order.value : order.value - 1.0;
      if (nu < 0.0) throw DomainError("large-q series for b_nu needs nu >= 1");
      out.value = large_q_series(nu, q);
      return out;
    }
  }
  throw DomainError("unknown Mathieu method");
}

double char_value(MathieuOrder order, double q, MathieuMethod method, const ExactOptions& options) {
  return characteristic(order, q, method, options).value;
}

double band_width(int nu, double q) {
  if (nu < 0) throw DomainError("band index must be >= 0");
  if (!(q >= 1.0)) throw DomainError("band-width asymptotics need q >= 1, got " + std::to_string(q));
  const double log_width = (4.0 * nu + 5.0) * std::numbers::ln2 + 0.5 * std::log(2.0 / std::numbers::pi) +
                           (0.5 * nu + 0.75) * std::log(q) - 4.0 * std::sqrt(q) - std::lgamma(nu + 1.0);
  return std::exp(log_width);
}

int crossover_order(double q) {
  if (!(q >= 0.0)) throw DomainError("crossover needs q >= 0");
  return 2 * static_cast<int>(std::lround(std::sqrt(q / 2.0)));
}

namespace {

// Central-difference estimate of the d-th derivative with step h.
template <typename F>
double central_difference(const F& f, double x, double h, int d, double fx) {
  switch (d) {
    case 1:
      return (f(x + h) - f(x - h)) / (2.0 * h);
    case 2:
      return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h);
    default:
      return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
  }
}

// Two Richardson levels over steps h, h/2, h/4 (error series in h^2).
template <typename F>
double richardson(const F& f, double x, double h, int d, double fx) {
  const double d0 = central_difference(f, x, h, d, fx);
  const double d1 = central_difference(f, x, h / 2.0, d, fx);
  const double d2 = central_difference(f, x, h / 4.0, d, fx);
  const double r0 = (4.0 * d1 - d0) / 3.0;
  const double r1 = (4.0 * d2 - d1) / 3.0;
  return (16.0 * r1 - r0) / 15.0;
}

std::vector<double> continuous_derivatives(const MathieuOrder& order, double q, int max_deriv) {
  const double nu = order.value;
  // lambda_nu is even in nu, so stencils may cross zero.
  auto f = [&](double x) {
    return char_value(MathieuOrder{MathieuKind::even_a, std::abs(x)}, q);
  };
  const double fx = char_value(order, q);
  double h0 = 1e-3 * std::max(1.0, nu);
  // With q > 0 the curve jumps at integer orders; keep the widest stencil
  // (x +- 2h) inside the current band.
  double h_cap = std::numeric_limits<double>::infinity();
  if (q > 0.0 && !order.is_integer()) {
    const double frac = nu - std::floor(nu);
    const double dist = std::min(frac, 1.0 - frac);
    if (nu >= 1.0 || frac > 0.5) h_cap = 0.45 * dist;
  }
  h0 = std::min(h0, h_cap);

  std::vector<double> out;
  for (int d = 1; d <= max_deriv; ++d) {
    // Adaptive step: walk h upward and keep the estimate where consecutive
    // extrapolations agree best (truncation vs round-off balance).
    double best = richardson(f, nu, h0, d, fx);
    double best_gap = std::numeric_limits<double>::infinity();
    double h = h0;
    double previous = best;
    for (int k = 1; k <= 10; ++k) {
      const double h_next = h * 2.0;
      if (h_next > h_cap) break;
      const double current = richardson(f, nu, h_next, d, fx);
      const double gap = std::abs(current - previous);
      if (gap < best_gap) {
        best_gap = gap;
        best = previous;
      }
      previous = current;
      h = h_next;
    }
    out.push_back(best);
  }
  return out;
}

std::vector<double> ladder_derivatives(const MathieuOrder& order, double q, int max_deriv) {
  constexpr int kPoints = 7;
  const int first_allowed = order.kind == MathieuKind::even_a ? 0 : 1;
  const int start = std::max(first_allowed, static_cast<int>(std::lround(order.value)) - kPoints / 2);
  Eigen::Matrix<double, kPoints, kPoints> vandermonde;
  Eigen::Matrix<double, kPoints, 1> values;
  for (int i = 0; i < kPoints; ++i) {
    const int m = start + i;
    const double t = m - order.value;
    double power = 1.0;
    for (int j = 0; j < kPoints; ++j) {
      vandermonde(i, j) = power;
      power *= t;
    }
    values(i) = char_value(MathieuOrder{order.kind, static_cast<double>(m)}, q);
  }
  const Eigen::Matrix<double, kPoints, 1> coeffs = vandermonde.colPivHouseholderQr().solve(values);
  std::vector<double> out;
  double factorial = 1.0;
  for (int d = 1; d <= max_deriv; ++d) {
    factorial *= d;
    out.push_back(factorial * coeffs(d));
  }
  return out;
}

}  // namespace

std::vector<double> char_derivatives(MathieuOrder order, double q, int max_deriv, DerivativeMode mode) {
  check_q(q);
  if (max_deriv < 1 || max_deriv > 3) throw DomainError("max_deriv must be 1, 2 or 3");
  if (mode == DerivativeMode::automatic) {
    mode = (q > 0.0 && order.value < crossover_order(q)) ? DerivativeMode::level_ladder
                                                         : DerivativeMode::continuous;
  }
  if (mode == DerivativeMode::level_ladder) return ladder_derivatives(order, q, max_deriv);
  return continuous_derivatives(order, q, max_deriv);
}

const char* to_string(MathieuMethod method) {
  switch (method) {
    case MathieuMethod::exact:
      return "exact";
    case MathieuMethod::series_small_q:
      return "series_small_q";
    case MathieuMethod::series_large_q:
      return "series_large_q";
  }
  return "?";
}

const char* to_string(MathieuKind kind) { return kind == MathieuKind::even_a ? "even_a" : "odd_b"; }

MathieuMethod parse_mathieu_method(const char* text) {
  if (std::strcmp(text, "exact") == 0) return MathieuMethod::exact;
  if (std::strcmp(text, "series_small_q") == 0) return MathieuMethod::series_small_q;
  if (std::strcmp(text, "series_large_q") == 0) return MathieuMethod::series_large_q;
  throw DomainError(std::string("unknown Mathieu method '") + text + "'");
}

}  // namespace qrev
