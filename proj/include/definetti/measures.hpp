// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "definetti/quadrature.hpp"

namespace definetti {

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Beta(alpha, beta) density on (0, 1).
struct BetaDensity {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Density C_p (x - 1/2)^(gamma - 1) on (1/2, 3/4), gamma in (0, 1).
/// Its d_W rate interpolates between n^-1/2 and n^-1 as gamma varies.
struct PowerSpikeDensity {
  double gamma = 0.5;

  /// C_p = gamma / (1/4)^gamma.
  double normalizer() const;
};

/// Rejection-sampling envelope: p(x) <= bound * Beta(proposal_alpha,
/// proposal_beta) pdf(x) on the support.
struct RejectionEnvelope {
  double proposal_alpha = 1.0;
  double proposal_beta = 1.0;
  double bound = 1.0;
};

/// Piecewise cubic Hermite density through (x, p, p') nodes.
class HermiteTable {
 public:
  struct Node {
    double x;
    double p;
    double dp;
  };

  explicit HermiteTable(std::vector<Node> nodes);

  double lo() const { return nodes_.front().x; }
  double hi() const { return nodes_.back().x; }
  std::span<const Node> nodes() const { return nodes_; }

  double density(double x) const;
  double derivative(double x) const;
  /// int_lo^x p
  double cumulative(double x) const;
  /// int_a^b t p(t) dt
  double first_moment(double a, double b) const;

 private:
  std::size_t segment(double x) const;
  double segment_integral(std::size_t i, double s) const;

  std::vector<Node> nodes_;
  std::vector<double> cumulative_;
};

/// User-supplied smooth density. The derivative is always explicit; it is
/// never obtained by differencing p.
struct SmoothDensity {
  std::function<double(double)> p;
  std::function<double(double)> p_prime;
  /// p(u) ~ u^exponent_lo near 0 and (1-u)^exponent_hi near 1.
  double exponent_lo = 0.0;
  double exponent_hi = 0.0;
  std::optional<RejectionEnvelope> envelope;
  /// Set when the density comes from a table; enables exact CDF and
  /// partial means.
  std::shared_ptr<const HermiteTable> table;

  double support_lo() const { return table ? table->lo() : 0.0; }
  double support_hi() const { return table ? table->hi() : 1.0; }
};

using ContinuousPart = std::variant<BetaDensity, PowerSpikeDensity, SmoothDensity>;

enum class MeasureKind {
  beta,
  atomic,
  smooth_density,
  power_spike,
  composite,
};

const char* to_string(MeasureKind kind);

/// Point handed to density integrands. `t` is the abscissa, `tc` = 1 - t,
/// both accurate near their respective endpoints; `p` and `dp` are the
/// density and its derivative at t. `variance_dp` = t (1 - t) p'(t), formed
/// so that it stays finite where p' alone overflows.
struct DensityPoint {
  double t;
  double tc;
  double p;
  double dp;
  double variance_dp;
};

using DensityIntegrand = std::function<double(const DensityPoint&)>;

/// A de Finetti mixing measure: finitely many atoms plus an optional
/// absolutely continuous part carrying the remaining mass. Immutable once
/// built.
class MixingMeasure {
 public:
  static MixingMeasure beta(double alpha, double beta);
  static MixingMeasure atomic(std::vector<Atom> atoms);
  static MixingMeasure power_spike(double gamma);
  static MixingMeasure smooth(SmoothDensity density, const QuadratureConfig& cfg = {});
  static MixingMeasure tabulated(std::vector<HermiteTable::Node> nodes,
                                 std::optional<RejectionEnvelope> envelope = std::nullopt);
  /// Atoms with total mass q < 1 plus (1 - q) times `continuous`.
  static MixingMeasure composite(std::vector<Atom> atoms, ContinuousPart continuous,
                                 const QuadratureConfig& cfg = {});

  MeasureKind kind() const;
  std::span<const Atom> atoms() const { return atoms_; }
  const ContinuousPart* continuous() const { return continuous_ ? &*continuous_ : nullptr; }
  double continuous_weight() const { return continuous_weight_; }
  /// True when the whole mass is carried by a density.
  bool has_density() const { return continuous_.has_value() && atoms_.empty(); }
  /// mu({0, 1})
  double boundary_mass() const;
  /// Smallest closed interval carrying all the mass.
  std::pair<double, double> support() const;
  /// Support interval of the continuous part, if any.
  std::optional<std::pair<double, double>> continuous_support() const;
  const QuadratureConfig& quadrature() const { return cfg_; }

  double cdf(double x) const;
  /// Left limit F(x-).
  double cdf_left(double x) const;
  /// int over (a, b] of x mu(dx).
  double partial_mean(double a, double b) const;
  /// int_a^b (F(x) - F(a)) dx when no atom lies strictly inside (a, b).
  double continuous_excess(double a, double b) const;

  double mean() const { return mean_; }
  double second_moment() const { return second_moment_; }

  /// int_a^b h(t, p(t), p'(t)) dt over the continuous part (unweighted by
  /// continuous_weight). Endpoint singularities of the density are
  /// integrated with exact endpoint distances.
  QuadratureResult integrate_density(const DensityIntegrand& h, double a, double b,
                                     const QuadratureConfig& cfg,
                                     std::span<const double> breakpoints = {}) const;

  /// JSON description (see measure_json.cpp for the schema).
  std::string to_json() const;
  static MixingMeasure from_json(const std::string& text, const QuadratureConfig& cfg = {});

 private:
  MixingMeasure() = default;
  void finalize();

  std::vector<Atom> atoms_;
  std::optional<ContinuousPart> continuous_;
  double continuous_weight_ = 0.0;
  double mean_ = 0.0;
  double second_moment_ = 0.0;
  QuadratureConfig cfg_{};
};

/// Which route bound_constants takes for the smooth-density constant.
enum class ConstantsRoute {
  automatic,   // closed form where one exists (Beta), quadrature otherwise
  quadrature,  // force the generic quadrature path
};

enum class ConstantsMethod {
  closed_form,
  quadrature,
};

struct BoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> c_alpha_beta;
  ConstantsMethod method = ConstantsMethod::closed_form;
};

/// E[theta (1 - theta)]
double moment_theta_one_minus_theta(const MixingMeasure& mu);

/// E[theta^2 + (1 - theta)^2]
double moment_sq_plus_comp_sq(const MixingMeasure& mu);

/// Lower and upper constants of the 1/n sandwich for a measure with a
/// density. Throws InvalidArgument for measures with atoms and
/// DivergentIntegral when int u(1-u)|p'(u)| du is infinite.
BoundConstants bound_constants(const MixingMeasure& mu, const QuadratureConfig& cfg,
                               ConstantsRoute route = ConstantsRoute::automatic);

/// E|a theta + b| for theta ~ Beta(alpha, beta), closed form.
double lemma_F(double alpha, double beta, double a, double b);

/// Removes the mass at {0, 1} and renormalizes. Returns the interior
/// measure and q = mu({0, 1}).
std::pair<MixingMeasure, double> kill_boundary(const MixingMeasure& mu);

inline double cdf(const MixingMeasure& mu, double x) { return mu.cdf(x); }
inline double partial_mean(const MixingMeasure& mu, double a, double b) {
  return mu.partial_mean(a, b);
}

}  // namespace definetti
