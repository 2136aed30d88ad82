// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "definetti/error.hpp"
#include "definetti/special_functions.hpp"

namespace definetti {

namespace {

constexpr double kAtomMassTolerance = 1e-12;
constexpr double kCallableNormTolerance = 1e-8;
constexpr double kTableNormTolerance = 1e-6;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_beta(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha <= 0.0 || beta <= 0.0) {
    std::ostringstream os;
    os << "Beta measure: parameters must be positive and finite (alpha=" << alpha << ", beta=" << beta
       << ")";
    throw InvalidArgument(os.str());
  }
}

void check_gamma(double gamma) {
  if (!std::isfinite(gamma) || gamma <= 0.0 || gamma >= 1.0) {
    std::ostringstream os;
    os << "power-spike measure: gamma must lie in (0, 1), got " << gamma;
    throw InvalidArgument(os.str());
  }
}

std::pair<double, double> part_support(const ContinuousPart& c) {
  return std::visit(Overloaded{
                        [](const BetaDensity&) { return std::pair{0.0, 1.0}; },
                        [](const PowerSpikeDensity&) { return std::pair{0.5, 0.75}; },
                        [](const SmoothDensity& s) { return std::pair{s.support_lo(), s.support_hi()}; },
                    },
                    c);
}

// Density and derivative at a point given by exact distances to the ends of
// the support.
DensityPoint part_point(const ContinuousPart& c, double from_lo, double from_hi) {
  return std::visit(
      Overloaded{
          [&](const BetaDensity& b) {
            const double t = from_lo;
            const double tc = from_hi;
            if (!(t > 0.0) || !(tc > 0.0)) return DensityPoint{t, tc, 0.0, 0.0, 0.0};
            const double p = std::exp((b.alpha - 1.0) * std::log(t) + (b.beta - 1.0) * std::log(tc) -
                                      log_beta_fn(b.alpha, b.beta));
            const double dp = p * ((b.alpha - 1.0) / t - (b.beta - 1.0) / tc);
            return DensityPoint{t, tc, p, dp, p * ((b.alpha - 1.0) * tc - (b.beta - 1.0) * t)};
          },
          [&](const PowerSpikeDensity& s) {
            const double offset = from_lo;
            const double t = 0.5 + offset;
            const double tc = 0.5 - offset;
            if (!(offset > 0.0) || !(from_hi > 0.0)) return DensityPoint{t, tc, 0.0, 0.0, 0.0};
            const double cp = s.normalizer();
            const double p = cp * std::pow(offset, s.gamma - 1.0);
            const double dp = (s.gamma - 1.0) * p / offset;
            return DensityPoint{t, tc, p, dp, (s.gamma - 1.0) * p * (t * tc / offset)};
          },
          [&](const SmoothDensity& s) {
            const double lo = s.support_lo();
            const double hi = s.support_hi();
            const double t = lo == 0.0 ? from_lo : lo + from_lo;
            const double tc = hi == 1.0 ? from_hi : 1.0 - t;
            if (!(from_lo > 0.0) || !(from_hi > 0.0)) return DensityPoint{t, tc, 0.0, 0.0, 0.0};
            const double dp = s.p_prime(t);
            return DensityPoint{t, tc, s.p(t), dp, t * tc * dp};
          },
      },
      c);
}

bool singular_hint(const ContinuousPart& c) {
  return std::visit(Overloaded{
                        [](const BetaDensity& b) { return b.alpha < 1.0 || b.beta < 1.0; },
                        [](const PowerSpikeDensity&) { return true; },
                        [](const SmoothDensity& s) { return s.exponent_lo < 0.0 || s.exponent_hi < 0.0; },
                    },
                    c);
}

QuadratureResult integrate_part(const ContinuousPart& c, const DensityIntegrand& h, double a, double b,
                                const QuadratureConfig& cfg, std::span<const double> breakpoints) {
  const auto [lo, hi] = part_support(c);
  a = std::max(a, lo);
  b = std::min(b, hi);
  if (!(a < b)) return QuadratureResult{0.0, 0.0, 0, true};

  std::vector<double> points{a};
  for (double x : breakpoints) {
    if (x > a && x < b) points.push_back(x);
  }
  if (const auto* s = std::get_if<SmoothDensity>(&c); s && s->table) {
    for (const auto& node : s->table->nodes()) {
      if (node.x > a && node.x < b) points.push_back(node.x);
    }
  }
  points.push_back(b);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  QuadratureConfig local = cfg;
  if (singular_hint(c)) local.scheme = QuadratureScheme::tanh_sinh;

  QuadratureResult total{0.0, 0.0, 0, true};
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double pa = points[i];
    const double pb = points[i + 1];
    const double off_lo = pa - lo;
    const double off_hi = hi - pb;
    Integrand f = [&](double, double dlo, double dhi) {
      return h(part_point(c, off_lo + dlo, off_hi + dhi));
    };
    const QuadratureResult r = integrate(f, pa, pb, local);
    total.value += r.value;
    total.error += r.error;
    total.subdivisions += r.subdivisions;
    total.converged = total.converged && r.converged;
  }
  return total;
}

double checked(const QuadratureResult& r, const char* what) {
  if (!r.converged) {
    std::ostringstream os;
    os << what << ": quadrature did not converge (estimate " << r.value << ", achieved error " << r.error
       << ")";
    throw QuadratureFailure(os.str(), r.value, r.error);
  }
  return r.value;
}

double part_cdf(const ContinuousPart& c, double x, const QuadratureConfig& cfg) {
  const auto [lo, hi] = part_support(c);
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return std::visit(
      Overloaded{
          [&](const BetaDensity& b) { return beta_inc_regularized(x, b.alpha, b.beta); },
          [&](const PowerSpikeDensity& s) { return std::pow(4.0 * (x - 0.5), s.gamma); },
          [&](const SmoothDensity& s) {
            if (s.table) return s.table->cumulative(x);
            const auto r = integrate_part(c, [](const DensityPoint& d) { return d.p; }, lo, x, cfg, {});
            return std::clamp(checked(r, "smooth density cdf"), 0.0, 1.0);
          },
      },
      c);
}

// int over (a, b] of t p(t) dt
double part_partial_mean(const ContinuousPart& c, double a, double b, const QuadratureConfig& cfg) {
  const auto [lo, hi] = part_support(c);
  a = std::clamp(a, lo, hi);
  b = std::clamp(b, lo, hi);
  if (!(a < b)) return 0.0;
  return std::visit(
      Overloaded{
          [&](const BetaDensity& d) {
            const double scale = d.alpha / (d.alpha + d.beta);
            return scale * (beta_inc_regularized(b, d.alpha + 1.0, d.beta) -
                            beta_inc_regularized(a, d.alpha + 1.0, d.beta));
          },
          [&](const PowerSpikeDensity& s) {
            const double g = s.gamma;
            auto antiderivative = [g](double offset) {
              return 0.5 * std::pow(4.0 * offset, g) + g / (g + 1.0) * std::pow(4.0, g) * std::pow(offset, g + 1.0);
            };
            return antiderivative(b - 0.5) - antiderivative(a - 0.5);
          },
          [&](const SmoothDensity& s) {
            if (s.table) return s.table->first_moment(a, b);
            const auto r = integrate_part(c, [](const DensityPoint& d) { return d.t * d.p; }, a, b, cfg, {});
            return checked(r, "smooth density partial mean");
          },
      },
      c);
}

struct PartMoments {
  double mean;
  double second;
  double binary_variance;  // E[t (1 - t)]
};

PartMoments part_moments(const ContinuousPart& c, const QuadratureConfig& cfg) {
  return std::visit(
      Overloaded{
          [](const BetaDensity& d) {
            const double s = d.alpha + d.beta;
            return PartMoments{d.alpha / s, d.alpha * (d.alpha + 1.0) / (s * (s + 1.0)),
                               d.alpha * d.beta / (s * (s + 1.0))};
          },
          [](const PowerSpikeDensity& d) {
            const double g = d.gamma;
            const double m1 = 0.25 * g / (g + 1.0);     // E[theta - 1/2]
            const double m2 = g / (g + 2.0) / 16.0;      // E[(theta - 1/2)^2]
            const double mean = 0.5 + m1;
            // theta (1 - theta) = 1/4 - (theta - 1/2)^2
            return PartMoments{mean, 0.25 + m1 + m2, 0.25 - m2};
          },
          [&](const SmoothDensity&) {
            const double half[] = {0.5};
            const double mean = checked(
                integrate_part(c, [](const DensityPoint& d) { return d.t * d.p; }, 0.0, 1.0, cfg, half),
                "smooth density mean");
            const double var = checked(
                integrate_part(c, [](const DensityPoint& d) { return d.t * d.tc * d.p; }, 0.0, 1.0, cfg, half),
                "smooth density E[theta(1-theta)]");
            return PartMoments{mean, mean - var, var};
          },
      },
      c);
}

}  // namespace

double PowerSpikeDensity::normalizer() const { return gamma * std::pow(4.0, gamma); }

// ---------------------------------------------------------------------------
// HermiteTable

HermiteTable::HermiteTable(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw InvalidArgument("tabulated density: need at least two nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (!std::isfinite(n.x) || !std::isfinite(n.p) || !std::isfinite(n.dp)) {
      throw InvalidArgument("tabulated density: non-finite entry");
    }
    if (n.x < 0.0 || n.x > 1.0) throw InvalidArgument("tabulated density: x outside [0, 1]");
    if (n.p < 0.0) throw InvalidArgument("tabulated density: negative density value");
    if (i > 0 && !(n.x > nodes_[i - 1].x)) {
      throw InvalidArgument("tabulated density: x grid must be strictly increasing");
    }
  }
  cumulative_.assign(nodes_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + segment_integral(i, 1.0);
  }
}

std::size_t HermiteTable::segment(double x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x, [](double v, const Node& n) { return v < n.x; });
  std::size_t i = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, nodes_.size() - 2);
}

double HermiteTable::density(double x) const {
  if (x < lo() || x > hi()) return 0.0;
  const std::size_t i = segment(x);
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  const double h = b.x - a.x;
  const double s = (x - a.x) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * a.p + (s3 - 2 * s2 + s) * h * a.dp + (-2 * s3 + 3 * s2) * b.p +
         (s3 - s2) * h * b.dp;
}

double HermiteTable::derivative(double x) const {
  if (x < lo() || x > hi()) return 0.0;
  const std::size_t i = segment(x);
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  const double h = b.x - a.x;
  const double s = (x - a.x) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * a.p + (3 * s2 - 4 * s + 1) * h * a.dp + (-6 * s2 + 6 * s) * b.p +
          (3 * s2 - 2 * s) * h * b.dp) /
         h;
}

double HermiteTable::segment_integral(std::size_t i, double s) const {
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  const double h = b.x - a.x;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s3 * s;
  return h * ((0.5 * s4 - s3 + s) * a.p + (0.25 * s4 - 2.0 * s3 / 3.0 + 0.5 * s2) * h * a.dp +
              (-0.5 * s4 + s3) * b.p + (0.25 * s4 - s3 / 3.0) * h * b.dp);
}

double HermiteTable::cumulative(double x) const {
  if (x <= lo()) return 0.0;
  if (x >= hi()) return cumulative_.back();
  const std::size_t i = segment(x);
  const double s = (x - nodes_[i].x) / (nodes_[i + 1].x - nodes_[i].x);
  return cumulative_[i] + segment_integral(i, s);
}

double HermiteTable::first_moment(double a, double b) const {
  a = std::max(a, lo());
  b = std::min(b, hi());
  if (!(a < b)) return 0.0;
  // t p(t) is a quartic on each segment; three-point Gauss is exact.
  constexpr double kNode = 0.774596669241483377035853079956479922;
  constexpr double kW0 = 8.0 / 9.0;
  constexpr double kW1 = 5.0 / 9.0;
  double total = 0.0;
  for (std::size_t i = segment(a); i + 1 < nodes_.size(); ++i) {
    const double sa = std::max(a, nodes_[i].x);
    const double sb = std::min(b, nodes_[i + 1].x);
    if (sa >= sb) {
      if (nodes_[i].x >= b) break;
      continue;
    }
    const double c = 0.5 * (sa + sb);
    const double hw = 0.5 * (sb - sa);
    auto g = [&](double t) { return t * density(t); };
    total += hw * (kW0 * g(c) + kW1 * (g(c - hw * kNode) + g(c + hw * kNode)));
  }
  return total;
}

// ---------------------------------------------------------------------------
// MixingMeasure

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::beta:
      return "beta";
    case MeasureKind::atomic:
      return "atomic";
    case MeasureKind::smooth_density:
      return "smooth";
    case MeasureKind::power_spike:
      return "power_spike";
    case MeasureKind::composite:
      return "composite";
  }
  return "unknown";
}

MixingMeasure MixingMeasure::beta(double alpha, double beta) {
  check_beta(alpha, beta);
  MixingMeasure m;
  m.continuous_ = BetaDensity{alpha, beta};
  m.continuous_weight_ = 1.0;
  m.finalize();
  return m;
}

MixingMeasure MixingMeasure::atomic(std::vector<Atom> atoms) {
  MixingMeasure m;
  m.atoms_ = std::move(atoms);
  m.finalize();
  return m;
}

MixingMeasure MixingMeasure::power_spike(double gamma) {
  check_gamma(gamma);
  MixingMeasure m;
  m.continuous_ = PowerSpikeDensity{gamma};
  m.continuous_weight_ = 1.0;
  m.finalize();
  return m;
}

MixingMeasure MixingMeasure::smooth(SmoothDensity density, const QuadratureConfig& cfg) {
  if (!density.p || !density.p_prime) {
    throw InvalidArgument("smooth density: both p and p' must be supplied");
  }
  return composite({}, std::move(density), cfg);
}

MixingMeasure MixingMeasure::tabulated(std::vector<HermiteTable::Node> nodes,
                                       std::optional<RejectionEnvelope> envelope) {
  auto table = std::make_shared<const HermiteTable>(std::move(nodes));
  SmoothDensity s;
  s.p = [table](double x) { return table->density(x); };
  s.p_prime = [table](double x) { return table->derivative(x); };
  s.envelope = envelope;
  s.table = table;
  return composite({}, std::move(s));
}

MixingMeasure MixingMeasure::composite(std::vector<Atom> atoms, ContinuousPart continuous,
                                       const QuadratureConfig& cfg) {
  cfg.validate();
  std::visit(Overloaded{
                 [](const BetaDensity& b) { check_beta(b.alpha, b.beta); },
                 [](const PowerSpikeDensity& s) { check_gamma(s.gamma); },
                 [](const SmoothDensity& s) {
                   if (!s.p || !s.p_prime) throw InvalidArgument("smooth density: both p and p' must be supplied");
                 },
             },
             continuous);
  MixingMeasure m;
  m.cfg_ = cfg;
  double atom_mass = 0.0;
  for (const Atom& a : atoms) atom_mass += a.mass;
  m.atoms_ = std::move(atoms);
  m.continuous_ = std::move(continuous);
  m.continuous_weight_ = 1.0 - atom_mass;
  if (!(m.continuous_weight_ > 0.0)) {
    throw InvalidArgument("composite measure: atoms must carry total mass < 1");
  }
  m.finalize();
  return m;
}

void MixingMeasure::finalize() {
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> merged;
  for (const Atom& a : atoms_) {
    if (!std::isfinite(a.location) || a.location < 0.0 || a.location > 1.0) {
      std::ostringstream os;
      os << "atomic measure: atom location " << a.location << " outside [0, 1]";
      throw InvalidArgument(os.str());
    }
    if (!std::isfinite(a.mass) || a.mass <= 0.0) {
      std::ostringstream os;
      os << "atomic measure: atom mass must be positive, got " << a.mass;
      throw InvalidArgument(os.str());
    }
    if (!merged.empty() && merged.back().location == a.location) {
      merged.back().mass += a.mass;
    } else {
      merged.push_back(a);
    }
  }
  atoms_ = std::move(merged);
  if (!continuous_) {
    if (atoms_.empty()) throw InvalidArgument("atomic measure: no atoms");
    double total = 0.0;
    for (const Atom& a : atoms_) total += a.mass;
    if (std::fabs(total - 1.0) > kAtomMassTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "atomic measure: masses sum to " << total << ", expected 1";
      throw InvalidArgument(os.str());
    }
    continuous_weight_ = 0.0;
  }

  if (const auto* s = continuous_ ? std::get_if<SmoothDensity>(&*continuous_) : nullptr) {
    double norm;
    double tol;
    if (s->table) {
      norm = s->table->cumulative(s->table->hi());
      tol = kTableNormTolerance;
    } else {
      const double half[] = {0.5};
      norm = checked(
          integrate_part(*continuous_, [](const DensityPoint& d) { return d.p; }, 0.0, 1.0, cfg_, half),
          "smooth density normalization");
      tol = kCallableNormTolerance;
    }
    if (std::fabs(norm - 1.0) > tol) {
      std::ostringstream os;
      os.precision(12);
      os << "smooth density: integrates to " << norm << ", expected 1 within " << tol;
      throw InvalidArgument(os.str());
    }
  }

  mean_ = 0.0;
  second_moment_ = 0.0;
  for (const Atom& a : atoms_) {
    mean_ += a.mass * a.location;
    second_moment_ += a.mass * a.location * a.location;
  }
  if (continuous_) {
    const PartMoments pm = part_moments(*continuous_, cfg_);
    mean_ += continuous_weight_ * pm.mean;
    second_moment_ += continuous_weight_ * pm.second;
  }
}

MeasureKind MixingMeasure::kind() const {
  if (!continuous_) return MeasureKind::atomic;
  if (!atoms_.empty()) return MeasureKind::composite;
  return std::visit(Overloaded{
                        [](const BetaDensity&) { return MeasureKind::beta; },
                        [](const PowerSpikeDensity&) { return MeasureKind::power_spike; },
                        [](const SmoothDensity&) { return MeasureKind::smooth_density; },
                    },
                    *continuous_);
}

double MixingMeasure::boundary_mass() const {
  double q = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location == 0.0 || a.location == 1.0) q += a.mass;
  }
  return q;
}

std::pair<double, double> MixingMeasure::support() const {
  double lo = 1.0;
  double hi = 0.0;
  for (const Atom& a : atoms_) {
    lo = std::min(lo, a.location);
    hi = std::max(hi, a.location);
  }
  if (continuous_) {
    const auto [clo, chi] = part_support(*continuous_);
    lo = std::min(lo, clo);
    hi = std::max(hi, chi);
  }
  return {lo, hi};
}

std::optional<std::pair<double, double>> MixingMeasure::continuous_support() const {
  if (!continuous_) return std::nullopt;
  return part_support(*continuous_);
}

double MixingMeasure::cdf(double x) const {
  if (std::isnan(x)) throw InvalidArgument("cdf: NaN argument");
  if (x < 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location > x) break;
    total += a.mass;
  }
  if (continuous_) total += continuous_weight_ * part_cdf(*continuous_, x, cfg_);
  return std::min(total, 1.0);
}

double MixingMeasure::cdf_left(double x) const {
  if (std::isnan(x)) throw InvalidArgument("cdf: NaN argument");
  if (x <= 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location >= x) break;
    total += a.mass;
  }
  if (continuous_) total += continuous_weight_ * part_cdf(*continuous_, x, cfg_);
  return std::min(total, 1.0);
}

double MixingMeasure::partial_mean(double a, double b) const {
  if (!(a <= b)) throw InvalidArgument("partial_mean: require a <= b");
  double total = 0.0;
  for (const Atom& atom : atoms_) {
    if (atom.location > a && atom.location <= b) total += atom.mass * atom.location;
  }
  if (continuous_) total += continuous_weight_ * part_partial_mean(*continuous_, a, b, cfg_);
  return total;
}

double MixingMeasure::continuous_excess(double a, double b) const {
  if (!continuous_ || !(a < b)) return 0.0;
  const double df = part_cdf(*continuous_, b, cfg_) - part_cdf(*continuous_, a, cfg_);
  if (df == 0.0) return 0.0;
  return continuous_weight_ * (b * df - part_partial_mean(*continuous_, a, b, cfg_));
}

QuadratureResult MixingMeasure::integrate_density(const DensityIntegrand& h, double a, double b,
                                                  const QuadratureConfig& cfg,
                                                  std::span<const double> breakpoints) const {
  if (!continuous_) return QuadratureResult{0.0, 0.0, 0, true};
  return integrate_part(*continuous_, h, a, b, cfg, breakpoints);
}

// ---------------------------------------------------------------------------
// Operations

double moment_theta_one_minus_theta(const MixingMeasure& mu) {
  double total = 0.0;
  for (const Atom& a : mu.atoms()) total += a.mass * a.location * (1.0 - a.location);
  if (const ContinuousPart* c = mu.continuous()) {
    total += mu.continuous_weight() * part_moments(*c, mu.quadrature()).binary_variance;
  }
  return total;
}

double moment_sq_plus_comp_sq(const MixingMeasure& mu) {
  // t^2 + (1 - t)^2 = 1 - 2 t (1 - t)
  return 1.0 - 2.0 * moment_theta_one_minus_theta(mu);
}

double lemma_F(double alpha, double beta, double a, double b) {
  check_beta(alpha, beta);
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("lemma_F: non-finite coefficients");
  if (a == 0.0) return std::fabs(b);
  if (a < 0.0) return lemma_F(alpha, beta, -a, -b);
  const double mean = alpha / (alpha + beta);
  const double linear = a * mean + b;  // [a B(alpha+1, beta) + b B(alpha, beta)] / B(alpha, beta)
  if (b > 0.0) return linear;
  if (b <= -a) return -linear;
  const double root = -b / a;
  // B_i(x, alpha+1, beta) / B(alpha, beta) = mean * I_x(alpha+1, beta)
  return -2.0 * a * mean * beta_inc_regularized(root, alpha + 1.0, beta) -
         2.0 * b * beta_inc_regularized(root, alpha, beta) + linear;
}

BoundConstants bound_constants(const MixingMeasure& mu, const QuadratureConfig& cfg, ConstantsRoute route) {
  cfg.validate();
  if (!mu.has_density()) {
    throw InvalidArgument(std::string("bound_constants: measure of kind '") + to_string(mu.kind()) +
                          "' has no density");
  }
  const ContinuousPart& part = *mu.continuous();
  BoundConstants out;

  std::optional<double> closed;
  if (const auto* b = std::get_if<BetaDensity>(&part)) {
    const double al = b->alpha;
    const double be = b->beta;
    const double s = al + be;
    // [B(al+2, be) + B(al, be+2)] / B(al, be)
    const double squares = (al * (al + 1.0) + be * (be + 1.0)) / (s * (s + 1.0));
    closed = squares + lemma_F(al, be, 2.0, -1.0) + lemma_F(al, be, s - 2.0, 1.0 - al) + kThreeOverSqrt2PiE;
    out.c_alpha_beta = closed;
  }

  if (closed && route == ConstantsRoute::automatic) {
    out.c1 = moment_theta_one_minus_theta(mu);
    out.c2 = *closed;
    out.method = ConstantsMethod::closed_form;
    return out;
  }

  const double half[] = {0.5};
  auto density_integral = [&](const DensityIntegrand& h, const char* what) {
    return checked(mu.integrate_density(h, 0.0, 1.0, cfg, half), what);
  };
  out.c1 = density_integral([](const DensityPoint& d) { return d.t * d.tc * d.p; }, "C1 integral");
  const double first = density_integral(
      [](const DensityPoint& d) { return (std::fabs(d.tc - d.t) + d.t * d.t + d.tc * d.tc) * d.p; },
      "C2 density term");

  DensityIntegrand derivative_term = [](const DensityPoint& d) { return std::fabs(d.variance_dp); };
  QuadratureResult r = mu.integrate_density(derivative_term, 0.0, 1.0, cfg, half);
  if (!r.converged) {
    QuadratureConfig doubled = cfg;
    doubled.max_subdivisions *= 2;
    const QuadratureResult r2 = mu.integrate_density(derivative_term, 0.0, 1.0, doubled, half);
    if (!std::isfinite(r.value) || !std::isfinite(r2.value) ||
        std::fabs(r2.value - r.value) > 10.0 * cfg.accuracy.target(r2.value)) {
      std::ostringstream os;
      os << "bound_constants: int u(1-u)|p'(u)| du appears divergent (estimate moved from " << r.value
         << " to " << r2.value << " when doubling subdivisions)";
      throw DivergentIntegral(os.str());
    }
    r = r2;
    checked(r, "C2 derivative term");
  }
  out.c2 = first + r.value + kThreeOverSqrt2PiE;
  out.method = ConstantsMethod::quadrature;
  return out;
}

std::pair<MixingMeasure, double> kill_boundary(const MixingMeasure& mu) {
  const double q = mu.boundary_mass();
  if (q == 0.0) return {mu, 0.0};
  if (q >= 1.0 - kAtomMassTolerance) {
    throw InvalidArgument("kill_boundary: all mass sits on {0, 1}; the distance is identically zero");
  }
  std::vector<Atom> interior;
  for (const Atom& a : mu.atoms()) {
    if (a.location != 0.0 && a.location != 1.0) interior.push_back({a.location, a.mass / (1.0 - q)});
  }
  if (const ContinuousPart* c = mu.continuous()) {
    return {MixingMeasure::composite(std::move(interior), *c, mu.quadrature()), q};
  }
  // Renormalized masses can drift from 1 by a few ulps; rescale exactly.
  double total = 0.0;
  for (const Atom& a : interior) total += a.mass;
  for (Atom& a : interior) a.mass /= total;
  return {MixingMeasure::atomic(std::move(interior)), q};
}

}  // namespace definetti
