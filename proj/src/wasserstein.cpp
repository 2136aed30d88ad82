// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "definetti/error.hpp"
#include "definetti/parallel.hpp"
#include "definetti/special_functions.hpp"

namespace definetti {

namespace {

constexpr double kCrossingTolerance = 1e-13;
constexpr int kMaxBisections = 200;
// Slack for inequalities whose two sides come out of quadrature.
constexpr double kQuadratureSlack = 1e-10;
// Inner-window half width in units of 1/sqrt(n); the normal tail beyond it
// is below 1e-44 because f(t) <= 1/2.
constexpr double kWindow = 7.0;
constexpr int kMaxExtensions = 64;

// Smallest x in [a, b] with F(x) >= c, for F continuous on [a, b).
double crossing(const CdfTarget& target, double c, double a, double b) {
  double lo = a;
  double hi = b;
  for (int i = 0; i < kMaxBisections; ++i) {
    if (hi - lo <= kCrossingTolerance) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if (target.cdf(mid) < c) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "crossing point bisection did not converge on [" << a << ", " << b << "] (level " << c << ")";
  throw BisectionFailure(os.str());
}

// G_n(x) - F_mu(x), G_n the CDF of theta + f(theta) Z / sqrt(n).
double perturbed_gap(const MixingMeasure& mu, double x, double sqrt_n, const QuadratureConfig& inner) {
  double total = 0.0;
  for (const Atom& a : mu.atoms()) {
    const double f = fluctuation_scale(a.location);
    if (f == 0.0) continue;
    const double z = sqrt_n * (x - a.location) / f;
    total += x < a.location ? a.mass * normal_tail(-z) : -a.mass * normal_tail(z);
  }
  if (mu.continuous() == nullptr) return total;

  const double reach = kWindow / sqrt_n;
  auto kernel = [&](bool above) {
    return [=](const DensityPoint& d) {
      if (d.p == 0.0) return 0.0;
      const double f = std::sqrt(d.t * d.tc);
      if (f == 0.0) return 0.0;
      const double gap = above ? d.t - x : x - d.t;
      return normal_tail(sqrt_n * gap / f) * d.p;
    };
  };
  const QuadratureResult up = mu.integrate_density(kernel(true), x, x + reach, inner);
  const QuadratureResult down = mu.integrate_density(kernel(false), x - reach, x, inner);
  // The inner target sits close to the rounding floor of the density
  // integral; results within ten times of it still leave the outer sum
  // inside its budget.
  const double accepted = 10.0 * inner.accuracy.abs_tol;
  auto usable = [&](const QuadratureResult& r) { return r.converged || r.error <= accepted; };
  if (!usable(up) || !usable(down)) {
    std::ostringstream os;
    os.precision(17);
    os << "dw_perturbed_prior: inner integral at x=" << x << " did not converge (achieved error "
       << std::max(up.error, down.error) << ")";
    throw QuadratureFailure(os.str(), up.value - down.value, up.error + down.error);
  }
  return total + mu.continuous_weight() * (up.value - down.value);
}

QuadratureResult perturbed_piece(const MixingMeasure& mu, double a, double b, double sqrt_n,
                                 const QuadratureConfig& outer, const QuadratureConfig& inner) {
  return gauss_kronrod(plain([&](double x) { return std::fabs(perturbed_gap(mu, x, sqrt_n, inner)); }), a,
                       b, outer);
}

[[noreturn]] void fail_outer(double value, double error, double target) {
  std::ostringstream os;
  os << "dw_perturbed_prior: tolerance " << target << " not reached within max_subdivisions (estimate "
     << value << ", achieved error " << error << ")";
  throw QuadratureFailure(os.str(), value, error);
}

std::string describe(const MixingMeasure& mu) { return mu.to_json(); }

}  // namespace

std::vector<double> MeasureCdf::jumps() const {
  std::vector<double> out;
  for (const Atom& a : mu_.atoms()) out.push_back(a.location);
  return out;
}

GridStepCdf::GridStepCdf(std::span<const double> probs) : n_(static_cast<int>(probs.size()) - 1) {
  if (n_ < 1) throw InvalidArgument("GridStepCdf: need at least two grid points");
  cumulative_.resize(probs.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    cumulative_[k] = acc;
  }
}

int GridStepCdf::index(double x) const {
  if (x < 0.0) return -1;
  int k = static_cast<int>(std::min<double>(std::floor(x * n_), n_));
  while (k < n_ && static_cast<double>(k + 1) / n_ <= x) ++k;
  while (k >= 0 && static_cast<double>(k) / n_ > x) --k;
  return k;
}

double GridStepCdf::cdf(double x) const {
  const int k = index(x);
  return k < 0 ? 0.0 : cumulative_[static_cast<std::size_t>(k)];
}

double GridStepCdf::cdf_left(double x) const {
  const int k = index(x);
  if (k < 0) return 0.0;
  if (static_cast<double>(k) / n_ == x) return k == 0 ? 0.0 : cumulative_[static_cast<std::size_t>(k) - 1];
  return cumulative_[static_cast<std::size_t>(k)];
}

std::vector<double> GridStepCdf::jumps() const {
  std::vector<double> out;
  for (int k = 0; k <= n_; ++k) out.push_back(static_cast<double>(k) / n_);
  return out;
}

CellDistances cell_distances(std::span<const double> probs, const CdfTarget& target) {
  const GridStepCdf law(probs);
  std::vector<double> points = law.jumps();
  for (double x : target.jumps()) {
    if (x < 0.0 || x > 1.0) throw InvalidArgument("cell_distances: target has mass outside [0, 1]");
    points.push_back(x);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  CellDistances out{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i];
    const double b = points[i + 1];
    const double c = law.cdf(a);
    const double fa = target.cdf(a);
    const double fb = target.cdf_left(b);
    out.kolmogorov = std::max({out.kolmogorov, std::fabs(c - fa), std::fabs(c - fb)});
    if ((fa - c) * (fb - c) >= 0.0) {
      out.wasserstein += std::fabs((b - a) * (c - fa) - target.continuous_excess(a, b));
      continue;
    }
    const double x = crossing(target, c, a, b);
    out.wasserstein += std::fabs((x - a) * (c - fa) - target.continuous_excess(a, x));
    out.wasserstein += std::fabs((b - x) * (c - target.cdf(x)) - target.continuous_excess(x, b));
  }
  return out;
}

double dw_mean_vs_prior(const ExactMeanLaw& law, const MixingMeasure& mu) {
  return cell_distances(law.probs, MeasureCdf(mu)).wasserstein;
}

double dk_mean_vs_prior(const ExactMeanLaw& law, const MixingMeasure& mu) {
  return cell_distances(law.probs, MeasureCdf(mu)).kolmogorov;
}

double dw_perturbed_prior(const MixingMeasure& mu, long n, const QuadratureConfig& cfg) {
  if (n < 1) throw InvalidArgument("dw_perturbed_prior: n must be >= 1");
  cfg.validate();
  if (mu.boundary_mass() != 0.0) {
    throw InvalidArgument("dw_perturbed_prior: the measure charges {0, 1}; remove the boundary mass first");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double unit = 1.0 / sqrt_n;

  QuadratureConfig outer = cfg;
  outer.scheme = QuadratureScheme::gauss_kronrod_adaptive;
  QuadratureConfig inner = cfg;
  inner.scheme = QuadratureScheme::tanh_sinh;
  inner.accuracy.abs_tol = cfg.accuracy.abs_tol * 1e-2;
  inner.accuracy.rel_tol = std::min(cfg.accuracy.rel_tol, 1e-12);

  const auto [lo, hi] = mu.support();
  std::vector<double> points{lo, hi, 0.0, 1.0, 0.5, lo + unit, hi - unit};
  for (const Atom& a : mu.atoms()) points.push_back(a.location);
  if (auto cs = mu.continuous_support()) {
    for (double e : {cs->first, cs->second}) {
      points.insert(points.end(), {e, e - unit, e + unit});
    }
  }
  std::erase_if(points, [&](double x) { return x < lo || x > hi; });
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const std::size_t pieces = points.size() > 1 ? points.size() - 1 : 0;
  const double budget = cfg.accuracy.abs_tol;
  QuadratureConfig piece_cfg = outer;
  piece_cfg.accuracy.abs_tol = budget / static_cast<double>(pieces + 2);
  std::vector<QuadratureResult> results(pieces);
  parallel_for(pieces, [&](std::size_t i) {
    results[i] = perturbed_piece(mu, points[i], points[i + 1], sqrt_n, piece_cfg, inner);
  });

  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  for (const QuadratureResult& r : results) {
    value += r.value;
    error += r.error;
    converged = converged && r.converged;
  }

  // Tails beyond the support, in steps of 4/sqrt(n) until a step adds
  // less than abs_tol / 10.
  QuadratureConfig tail_cfg = outer;
  tail_cfg.accuracy.abs_tol = budget / 4.0;
  const double step = 4.0 * unit;
  for (int side = 0; side < 2; ++side) {
    double edge = side == 0 ? lo : hi;
    for (int j = 0;; ++j) {
      if (j == kMaxExtensions) fail_outer(value, error, budget);
      const double next = side == 0 ? edge - step : edge + step;
      const QuadratureResult r = side == 0 ? perturbed_piece(mu, next, edge, sqrt_n, tail_cfg, inner)
                                           : perturbed_piece(mu, edge, next, sqrt_n, tail_cfg, inner);
      value += r.value;
      error += r.error;
      converged = converged && r.converged;
      edge = next;
      if (r.value < budget / 10.0) break;
    }
  }
  if (!converged || error > cfg.accuracy.target(value)) fail_outer(value, error, cfg.accuracy.target(value));
  return value;
}

double dual_lower_bound_abs(const MixingMeasure& mu, long n, const QuadratureConfig& cfg) {
  if (n < 1) throw InvalidArgument("dual_lower_bound_abs: n must be >= 1");
  if (mu.boundary_mass() != 0.0) throw InvalidArgument("dual_lower_bound_abs: the measure charges {0, 1}");
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  // E|a + Z| - |a| = 2 (omega(a) - |a| G(|a|)); scaled by f / sqrt(n).
  auto term = [&](double t, double tc) {
    const double f = std::sqrt(t * tc);
    if (f == 0.0) return 0.0;
    const double a = sqrt_n * std::fabs(t - 0.5) / f;
    return 2.0 * f / sqrt_n * normal_tail_integral(a);
  };
  double total = 0.0;
  for (const Atom& a : mu.atoms()) total += a.mass * term(a.location, 1.0 - a.location);
  if (mu.continuous()) {
    const double half[] = {0.5};
    const QuadratureResult r = mu.integrate_density(
        [&](const DensityPoint& d) { return term(d.t, d.tc) * d.p; }, 0.0, 1.0, cfg, half);
    if (!r.converged) {
      throw QuadratureFailure("dual_lower_bound_abs: quadrature did not converge", r.value, r.error);
    }
    total += mu.continuous_weight() * r.value;
  }
  return total;
}

double dual_lower_bound_psi(const ExactMeanLaw& law, const MixingMeasure& mu) {
  // psi(x) = x (x - 1), so E[psi(theta)] = -E[theta (1 - theta)].
  double expected = 0.0;
  for (int k = 0; k <= law.n; ++k) {
    const double x = static_cast<double>(k) / law.n;
    expected += law.probs[static_cast<std::size_t>(k)] * x * (x - 1.0);
  }
  return expected + moment_theta_one_minus_theta(mu);
}

ChenCheck chen_bound_check(double t, long n) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("chen_bound_check: t must lie in (0, 1)");
  if (n < 1) throw InvalidArgument("chen_bound_check: n must be >= 1");
  if (n > 100000000) throw InvalidArgument("chen_bound_check: n too large");
  const double nd = static_cast<double>(n);
  const double scale = std::sqrt(nd * t * (1.0 - t));
  auto z = [&](long k) { return (static_cast<double>(k) - nd * t) / scale; };

  // int_a^b Phi = T(-b) - T(-a) and int_a^b (1 - Phi) = T(a) - T(b),
  // with T the normal tail integral.
  auto below = [](double a, double b) { return normal_tail_integral(-b) - normal_tail_integral(-a); };
  double lhs = normal_tail_integral(-z(0));  // int_{-inf}^{z_0} Phi
  double cum = 0.0;
  for (long k = 0; k < n; ++k) {
    cum += binomial_pmf(static_cast<int>(n), static_cast<int>(k), t);
    const double a = z(k);
    const double b = z(k + 1);
    const double pa = normal_cdf(a);
    const double pb = normal_cdf(b);
    if (cum >= pb) {
      lhs += cum * (b - a) - below(a, b);
    } else if (cum <= pa) {
      lhs += below(a, b) - cum * (b - a);
    } else {
      // Phi(x) = cum inside the cell: locate it and split.
      double l = a;
      double h = b;
      for (int i = 0; i < kMaxBisections && h - l > kCrossingTolerance * std::max(1.0, std::fabs(a)); ++i) {
        const double mid = 0.5 * (l + h);
        if (normal_cdf(mid) < cum) {
          l = mid;
        } else {
          h = mid;
        }
      }
      const double x = 0.5 * (l + h);
      lhs += cum * (x - a) - below(a, x);
      lhs += below(x, b) - cum * (b - x);
    }
  }
  lhs += normal_tail_integral(z(n));  // int_{z_n}^inf (1 - Phi)
  const double rhs = (t * t + (1.0 - t) * (1.0 - t)) / scale;
  return ChenCheck{lhs, rhs};
}

std::vector<std::string> DistanceReport::violations() const {
  std::vector<std::string> out;
  auto fail = [&](const std::string& what, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << what << " violated: " << lhs << " vs " << rhs;
    out.push_back(os.str());
  };
  if (dw_exact) {
    if (lower_bound > *dw_exact + kQuadratureSlack) fail("lower_bound <= dw_exact", lower_bound, *dw_exact);
    if (*dw_exact > upper_crude + kQuadratureSlack) fail("dw_exact <= upper_crude", *dw_exact, upper_crude);
    if (upper_smooth && *dw_exact > *upper_smooth + kQuadratureSlack) {
      fail("dw_exact <= upper_smooth", *dw_exact, *upper_smooth);
    }
    if (dk && *dw_exact > *dk + kQuadratureSlack) fail("dw_exact <= dk", *dw_exact, *dk);
    if (dual_lower_psi && *dual_lower_psi > *dw_exact + kQuadratureSlack) {
      fail("dual_lower_psi <= dw_exact", *dual_lower_psi, *dw_exact);
    }
    if (dw_perturbed && std::fabs(*dw_exact - *dw_perturbed) > equivalence_gap_bound + kQuadratureSlack) {
      fail("|dw_exact - dw_perturbed| <= equivalence_gap_bound", std::fabs(*dw_exact - *dw_perturbed),
           equivalence_gap_bound);
    }
  }
  return out;
}

DistanceReport distance_report(const MixingMeasure& mu, long n, const QuadratureConfig& cfg,
                               ReportOptions options) {
  if (n < 1) throw InvalidArgument("distance_report: n must be >= 1");
  DistanceReport r;
  r.n = n;
  const double nd = static_cast<double>(n);
  const double c1 = moment_theta_one_minus_theta(mu);
  r.lower_bound = c1 / nd;
  r.upper_crude = std::sqrt(c1 / nd);
  r.equivalence_gap_bound = moment_sq_plus_comp_sq(mu) / nd;
  if (mu.has_density()) {
    try {
      r.upper_smooth = bound_constants(mu, cfg).c2 / nd;
    } catch (const DivergentIntegral&) {
      // no smooth-density bound for this measure
    }
  }
  if (options.exact) {
    if (n > 1000000) throw InvalidArgument("distance_report: exact law limited to n <= 10^6");
    const ExactMeanLaw law = mean_law(mu, static_cast<int>(n), cfg);
    const CellDistances d = cell_distances(law.probs, MeasureCdf(mu));
    r.dw_exact = d.wasserstein;
    r.dk = d.kolmogorov;
    r.dual_lower_psi = dual_lower_bound_psi(law, mu);
  }
  if (options.perturbed) {
    // Boundary atoms do not move under the perturbation, so they only
    // rescale the distance.
    const double q = mu.boundary_mass();
    if (q == 0.0) {
      r.dw_perturbed = dw_perturbed_prior(mu, n, cfg);
    } else if (q < 1.0 - 1e-12) {
      const auto [interior, mass] = kill_boundary(mu);
      r.dw_perturbed = (1.0 - mass) * dw_perturbed_prior(interior, n, cfg);
    } else {
      r.dw_perturbed = 0.0;
    }
  }
  const std::vector<std::string> bad = r.violations();
  if (!bad.empty()) {
    std::ostringstream os;
    os << "invariant violated for measure " << describe(mu) << " at n=" << n << ": " << bad.front();
    throw InvariantViolation(os.str());
  }
  return r;
}

}  // namespace definetti
