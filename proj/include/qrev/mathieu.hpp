#pragma once

// Characteristic values of the Mathieu equation
//
//   y'' + (a - 2 q cos 2x) y = 0,
//
// computed exactly from a truncated Fourier-mode eigenproblem and from the
// small-q and large-q asymptotic series.  Orders may be fractional; for a
// non-integer order nu the even and odd characteristic values coincide and
// belong to the Floquet solution exp(i nu x) P(x) with P pi-periodic.

#include <vector>

namespace qrev {

enum class MathieuKind { even_a, odd_b };

enum class MathieuMethod { exact, series_small_q, series_large_q };

/// How order-derivatives are taken on the exact branch.
///
/// `continuous` differentiates the characteristic curve nu -> lambda_nu(q)
/// with small steps; it is meaningful where that curve is smooth (free-like
/// levels, nu above the crossover).  `level_ladder` differentiates the
/// smooth interpolant through the integer-order values a_0, a_1, ... which
/// is the right notion below the crossover, where the continuous curve is a
/// near-staircase of exponentially narrow bands.  `automatic` picks by
/// comparing nu with crossover_order(q).
enum class DerivativeMode { automatic, continuous, level_ladder };

struct MathieuOrder {
  MathieuKind kind = MathieuKind::even_a;
  double value = 0.0;

  /// Validates order >= 0 (and order >= 1 for integer odd_b).
  static MathieuOrder even(double nu);
  static MathieuOrder odd(double nu);

  bool is_integer() const;
  /// mu in nu = mu + 2k, mu in [0, 2).
  double fractional_part() const;
  /// k in nu = mu + 2k.
  int ladder_index() const;
};

struct MathieuCharacteristic {
  MathieuOrder order;
  double q = 0.0;
  double value = 0.0;
  MathieuMethod method = MathieuMethod::exact;
  /// Fourier modes used by the exact branch (0 for series).
  int modes = 0;
};

struct ExactOptions {
  int initial_modes = 64;
  int max_modes = 4096;
  double tolerance = 1e-12;
};

/// Full characteristic-value record.  `method` in the result is the branch
/// actually used: series_small_q requested for an integer order <= 4 is
/// routed to the exact branch, since the series is not valid there.
MathieuCharacteristic characteristic(MathieuOrder order, double q,
                                     MathieuMethod method = MathieuMethod::exact,
                                     const ExactOptions& options = {});

double char_value(MathieuOrder order, double q,
                  MathieuMethod method = MathieuMethod::exact,
                  const ExactOptions& options = {});

/// a_nu ~ b_nu ~ nu^2 + q^2 / (2 (nu^2 - 1)); no validity checks.
double small_q_series(double nu, double q);

/// a_nu ~ b_{nu+1} ~ -2q + 2 s sqrt(q) - (s^2+1)/8 - (s^3+3s)/(2^7 sqrt(q)),
/// s = 2 nu + 1; no validity checks.
double large_q_series(double nu, double q);

/// Asymptotic width b_{nu+1} - a_nu of the nu-th band for q >> 1.
double band_width(int nu, double q);

/// d/dnu ... d^max/dnu^max of the exact characteristic value (max in 1..3).
std::vector<double> char_derivatives(MathieuOrder order, double q, int max_deriv,
                                     DerivativeMode mode = DerivativeMode::automatic);

/// 2 * nearest_integer(sqrt(q/2)): where the spectrum turns from
/// oscillator-like (below) to free-rotor-like (above).
int crossover_order(double q);

const char* to_string(MathieuMethod method);
const char* to_string(MathieuKind kind);
MathieuMethod parse_mathieu_method(const char* text);

namespace detail {

/// k-th smallest (0-based) eigenvalue of the symmetric tridiagonal matrix
/// with diagonal `diag` and off-diagonal `off` (size diag.size() - 1), by
/// Sturm-sequence bisection.
double tridiagonal_eigenvalue(const std::vector<double>& diag,
                              const std::vector<double>& off, int k);

}  // namespace detail

}  // namespace qrev
