// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

namespace definetti {

/// Absolute and relative tolerance pair used by every numerical routine.
struct Accuracy {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;

  /// Throws InvalidArgument unless both tolerances are positive and finite.
  void validate() const;
  /// max(abs_tol, rel_tol * |value|)
  double target(double value) const;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;
/// 3 / sqrt(2 pi e), the additive term of the smooth-density constant.
inline constexpr double kThreeOverSqrt2PiE = 0.725912173557430049393490578806681964;

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, accurate in both tails.
double normal_cdf(double x);

/// Upper tail P[Z > t], computed directly (never as 1 - cdf).
double normal_tail(double t);

/// int_y^inf P[Z > s] ds = pdf(y) - y P[Z > y], without the cancellation
/// for large y.
double normal_tail_integral(double y);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln B(alpha, beta).
double log_beta_fn(double alpha, double beta);

double beta_fn(double alpha, double beta);

/// Regularized incomplete Beta I_x(alpha, beta).
double beta_inc_regularized(double x, double alpha, double beta);

/// Unregularized incomplete Beta integral: int_0^x t^(alpha-1) (1-t)^(beta-1) dt.
/// Note this is *not* divided by B(alpha, beta).
double beta_inc(double x, double alpha, double beta);

/// sqrt(x (1 - x)) on [0, 1]; the conditional standard deviation of a
/// Bernoulli(x) draw.
double fluctuation_scale(double x);

}  // namespace definetti
