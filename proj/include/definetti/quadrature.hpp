// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <concepts>
#include <functional>
#include <span>

#include "definetti/special_functions.hpp"

namespace definetti {

enum class QuadratureScheme {
  gauss_kronrod_adaptive,
  tanh_sinh,
};

struct QuadratureConfig {
  // tanh-sinh is the default because most densities here have algebraic
  // endpoint singularities; Gauss-Kronrod is for smooth integrands.
  QuadratureScheme scheme = QuadratureScheme::tanh_sinh;
  int max_subdivisions = 500;
  Accuracy accuracy{};

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

/// Integrand evaluated at x together with the distances x - a and b - x to
/// the ends of the requested interval. Near an endpoint the distance is
/// exact even when x itself is rounded to the endpoint, which is what makes
/// algebraic endpoint singularities integrable to full precision.
using Integrand = std::function<double(double x, double from_lo, double from_hi)>;

/// Adaptive Gauss-Kronrod 10/21 with bisection of the worst interval.
QuadratureResult gauss_kronrod(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

/// Double-exponential quadrature, bisecting when a single panel does not
/// converge within the maximum refinement level.
QuadratureResult tanh_sinh(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

/// Dispatches on cfg.scheme. Never throws on non-convergence; inspect
/// `converged`.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

/// Integrates over consecutive pieces [p0,p1], [p1,p2], ... and sums.
QuadratureResult integrate_pieces(const Integrand& f, std::span<const double> points,
                                  const QuadratureConfig& cfg);

/// Like integrate(), but throws QuadratureFailure carrying the achieved
/// error when the tolerance is not met. `what` names the quantity.
double integrate_or_throw(const Integrand& f, double a, double b, const QuadratureConfig& cfg,
                          const char* what);

/// Runs with max_subdivisions and, if that does not converge, again with
/// twice as many. An estimate that moves by more than 10x the tolerance is
/// reported as DivergentIntegral; otherwise a non-converged result throws
/// QuadratureFailure.
QuadratureResult integrate_detect_divergence(const Integrand& f, double a, double b,
                                             const QuadratureConfig& cfg, const char* what);

template <class F>
  requires std::invocable<F, double> && (!std::invocable<F, double, double, double>)
Integrand plain(F f) {
  return [f = std::move(f)](double x, double, double) { return f(x); };
}

}  // namespace definetti
