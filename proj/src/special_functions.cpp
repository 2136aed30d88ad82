// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/special_functions.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "definetti/error.hpp"

namespace definetti {

namespace {

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    std::ostringstream os;
    os << fn << ": non-finite argument " << x;
    throw InvalidArgument(os.str());
  }
}

// Beyond this point the tail is taken from the Laplace continued fraction
// for the Mills ratio instead of erfc.
constexpr double kTailSwitch = 8.0;

// G(t) / omega(t) = 1 / (t + 1 / (t + 2 / (t + 3 / (t + ...)))), t >= 8.
double mills_ratio(double t) {
  double acc = t;
  for (int k = 60; k >= 1; --k) acc = t + k / acc;
  return 1.0 / acc;
}

// Modified Lentz evaluation of the incomplete-Beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIterations = 200;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  std::ostringstream os;
  os << "beta_inc: continued fraction did not converge in " << kMaxIterations
     << " iterations (x=" << x << ", alpha=" << a << ", beta=" << b << ")";
  throw IterationLimit(os.str());
}

void check_beta_params(double alpha, double beta, const char* fn) {
  require_finite(alpha, fn);
  require_finite(beta, fn);
  if (alpha <= 0.0 || beta <= 0.0) {
    std::ostringstream os;
    os << fn << ": parameters must be positive (alpha=" << alpha << ", beta=" << beta << ")";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

void Accuracy::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !std::isfinite(abs_tol) || !std::isfinite(rel_tol)) {
    std::ostringstream os;
    os << "Accuracy: tolerances must be positive (abs_tol=" << abs_tol << ", rel_tol=" << rel_tol << ")";
    throw InvalidArgument(os.str());
  }
}

double Accuracy::target(double value) const { return std::fmax(abs_tol, rel_tol * std::fabs(value)); }

double normal_pdf(double x) {
  require_finite(x, "normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_tail(double t) {
  require_finite(t, "normal_tail");
  if (t > kTailSwitch) return normal_pdf(t) * mills_ratio(t);
  return 0.5 * std::erfc(t / kSqrt2);
}

double normal_tail_integral(double y) {
  require_finite(y, "normal_tail_integral");
  if (y > kTailSwitch) {
    // omega - y G = omega * c / (y + c) with c the continued-fraction tail.
    double acc = y;
    for (int k = 60; k >= 2; --k) acc = y + k / acc;
    const double c = 1.0 / acc;
    return normal_pdf(y) * c / (y + c);
  }
  return normal_pdf(y) - y * normal_tail(y);
}

double normal_cdf(double x) {
  require_finite(x, "normal_cdf");
  return normal_tail(-x);
}

double log_gamma(double x) {
  require_finite(x, "log_gamma");
  if (x <= 0.0) {
    std::ostringstream os;
    os << "log_gamma: argument must be positive, got " << x;
    throw InvalidArgument(os.str());
  }
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_beta_fn(double alpha, double beta) {
  check_beta_params(alpha, beta, "beta_fn");
  return log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta);
}

double beta_fn(double alpha, double beta) { return std::exp(log_beta_fn(alpha, beta)); }

double beta_inc_regularized(double x, double alpha, double beta) {
  check_beta_params(alpha, beta, "beta_inc");
  require_finite(x, "beta_inc");
  if (x < 0.0 || x > 1.0) {
    std::ostringstream os;
    os << "beta_inc: x must lie in [0, 1], got " << x;
    throw InvalidArgument(os.str());
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      alpha * std::log(x) + beta * std::log1p(-x) - log_beta_fn(alpha, beta);
  if (x < (alpha + 1.0) / (alpha + beta + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(x, alpha, beta) / alpha;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(1.0 - x, beta, alpha) / beta;
}

double beta_inc(double x, double alpha, double beta) {
  const double reg = beta_inc_regularized(x, alpha, beta);
  return reg * beta_fn(alpha, beta);
}

double fluctuation_scale(double x) {
  require_finite(x, "fluctuation_scale");
  if (x < 0.0 || x > 1.0) {
    std::ostringstream os;
    os << "fluctuation_scale: x must lie in [0, 1], got " << x;
    throw InvalidArgument(os.str());
  }
  return std::sqrt(x * (1.0 - x));
}

}  // namespace definetti
