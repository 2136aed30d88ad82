// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "definetti/error.hpp"

namespace definetti {

void QuadratureConfig::validate() const {
  accuracy.validate();
  if (max_subdivisions < 1) {
    std::ostringstream os;
    os << "QuadratureConfig: max_subdivisions must be >= 1, got " << max_subdivisions;
    throw InvalidArgument(os.str());
  }
}

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208041328210, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool converged = false;

  bool operator<(const Panel& other) const { return error < other.error; }
};

// Distances to the ends of the original interval [lo, hi] for a node at
// offset d_a from panel start a (or d_b from panel end b).
struct Frame {
  double lo;
  double hi;
};

Panel gk21(const Integrand& f, double a, double b, Frame frame) {
  constexpr double kEpmach = std::numeric_limits<double>::epsilon();
  constexpr double kUflow = std::numeric_limits<double>::min();
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double off_lo = a - frame.lo;
  const double off_hi = frame.hi - b;
  auto eval = [&](double x, double from_a, double from_b) {
    return f(x, off_lo + from_a, off_hi + from_b);
  };

  const double fc = eval(centr, hlgth, hlgth);
  double resg = 0.0;
  double resk = fc * kWgk[10];
  double resabs = std::fabs(resk);
  std::array<double, 10> fv1{};
  std::array<double, 10> fv2{};
  for (int j = 0; j < 10; ++j) {
    const double absc = hlgth * kXgk[j];
    const double f1 = eval(centr - absc, hlgth - absc, hlgth + absc);
    const double f2 = eval(centr + absc, hlgth + absc, hlgth - absc);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::fabs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  }
  const double result = resk * hlgth;
  resabs *= std::fabs(hlgth);
  resasc *= std::fabs(hlgth);
  double abserr = std::fabs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0) {
    abserr = resasc * std::fmin(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  }
  if (resabs > kUflow / (50.0 * kEpmach)) abserr = std::fmax(kEpmach * 50.0 * resabs, abserr);
  return Panel{a, b, result, abserr, false};
}

constexpr double kHalfPi = 1.57079632679489661923132169163975144;
// exp(-2u) must stay representable; u = pi/2 sinh(t) < 354 for t <= 6.
constexpr double kTanhSinhTmax = 6.0;
constexpr int kTanhSinhMaxLevel = 8;
constexpr int kTanhSinhMinLevel = 3;

// One tanh-sinh panel refined level by level until two successive
// estimates agree to `target`.
Panel tanh_sinh_panel(const Integrand& f, double a, double b, Frame frame, double abs_target,
                      double rel_tol) {
  const double hw = 0.5 * (b - a);
  const double off_lo = a - frame.lo;
  const double off_hi = frame.hi - b;

  auto term = [&](double t) -> double {
    const double u = kHalfPi * std::sinh(t);
    const double e = std::exp(-2.0 * std::fabs(u));
    const double comp = 2.0 * e / (1.0 + e);  // 1 - tanh|u|
    const double weight = kHalfPi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    const double near = hw * comp;
    if (!(near > 0.0)) return 0.0;
    const double far = hw * (2.0 - comp);
    double x;
    double from_a;
    double from_b;
    if (t >= 0.0) {
      from_b = near;
      from_a = far;
      x = b - near;
    } else {
      from_a = near;
      from_b = far;
      x = a + near;
    }
    return hw * weight * f(x, off_lo + from_a, off_hi + from_b);
  };

  // Level 0: unit step over [-tmax, tmax]; find where the tails stop
  // mattering so refinements skip them.
  const int kmax = static_cast<int>(kTanhSinhTmax);
  std::vector<double> left(kmax + 1), right(kmax + 1);
  double sum = term(0.0);
  double biggest = std::fabs(sum);
  for (int k = 1; k <= kmax; ++k) {
    right[k] = term(static_cast<double>(k));
    left[k] = term(-static_cast<double>(k));
    sum += right[k] + left[k];
    biggest = std::fmax(biggest, std::fmax(std::fabs(right[k]), std::fabs(left[k])));
  }
  auto cutoff = [&](const std::vector<double>& side) {
    double tcut = 0.5;
    for (int k = kmax; k >= 1; --k) {
      if (std::fabs(side[k]) > 1e-20 * biggest) {
        tcut = std::fmin(kTanhSinhTmax, k + 1.0);
        break;
      }
    }
    return tcut;
  };
  const double tcut_right = cutoff(right);
  const double tcut_left = cutoff(left);

  double estimate = sum;
  double h = 1.0;
  double error = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= kTanhSinhMaxLevel; ++level) {
    h *= 0.5;
    double fresh = 0.0;
    for (double t = h; t <= tcut_right; t += 2.0 * h) fresh += term(t);
    for (double t = h; t <= tcut_left; t += 2.0 * h) fresh += term(-t);
    const double next = 0.5 * estimate + h * fresh;
    if (!std::isfinite(next)) return Panel{a, b, next, std::numeric_limits<double>::infinity(), false};
    error = std::fabs(next - estimate);
    estimate = next;
    if (level >= kTanhSinhMinLevel && error <= std::fmax(abs_target, rel_tol * std::fabs(estimate))) {
      return Panel{a, b, estimate, error, true};
    }
  }
  return Panel{a, b, estimate, error, false};
}

bool splittable(double a, double b) {
  const double m = 0.5 * (a + b);
  return m > a && m < b;
}

QuadratureResult finish(const std::vector<Panel>& done, std::priority_queue<Panel> heap,
                        const Accuracy& acc) {
  std::vector<Panel> all = done;
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadratureResult r;
  for (const auto& p : all) {
    r.value += p.value;
    r.error += p.error;
  }
  r.subdivisions = static_cast<int>(all.size());
  r.converged = std::isfinite(r.value) && r.error <= acc.target(r.value);
  return r;
}

}  // namespace

QuadratureResult gauss_kronrod(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  cfg.validate();
  if (a == b) return QuadratureResult{0.0, 0.0, 0, true};
  if (!(a < b)) throw InvalidArgument("gauss_kronrod: require a <= b");
  const Frame frame{a, b};
  std::priority_queue<Panel> heap;
  std::vector<Panel> done;
  Panel first = gk21(f, a, b, frame);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int count = 1;
  while (count < cfg.max_subdivisions && !heap.empty()) {
    if (std::isfinite(total) && total_err <= cfg.accuracy.target(total)) break;
    Panel worst = heap.top();
    heap.pop();
    if (!splittable(worst.a, worst.b)) {
      done.push_back(worst);
      continue;
    }
    const double m = 0.5 * (worst.a + worst.b);
    Panel l = gk21(f, worst.a, m, frame);
    Panel r = gk21(f, m, worst.b, frame);
    total += l.value + r.value - worst.value;
    total_err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  return finish(done, std::move(heap), cfg.accuracy);
}

QuadratureResult tanh_sinh(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  cfg.validate();
  if (a == b) return QuadratureResult{0.0, 0.0, 0, true};
  if (!(a < b)) throw InvalidArgument("tanh_sinh: require a <= b");
  const Frame frame{a, b};
  const double width = b - a;
  const Accuracy& acc = cfg.accuracy;
  auto panel = [&](double lo, double hi) {
    const double share = acc.abs_tol * (hi - lo) / width;
    return tanh_sinh_panel(f, lo, hi, frame, share, acc.rel_tol);
  };

  std::priority_queue<Panel> heap;
  std::vector<Panel> done;
  Panel first = panel(a, b);
  double total = first.value;
  double total_err = first.error;
  if (first.converged) {
    done.push_back(first);
  } else {
    heap.push(first);
  }
  int count = 1;
  while (count < cfg.max_subdivisions && !heap.empty()) {
    if (std::isfinite(total) && total_err <= acc.target(total)) break;
    Panel worst = heap.top();
    heap.pop();
    if (!splittable(worst.a, worst.b)) {
      done.push_back(worst);
      continue;
    }
    const double m = 0.5 * (worst.a + worst.b);
    for (const Panel& p : {panel(worst.a, m), panel(m, worst.b)}) {
      total += p.value;
      total_err += p.error;
      if (p.converged) {
        done.push_back(p);
      } else {
        heap.push(p);
      }
    }
    total -= worst.value;
    total_err -= worst.error;
    ++count;
  }
  return finish(done, std::move(heap), acc);
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  switch (cfg.scheme) {
    case QuadratureScheme::gauss_kronrod_adaptive:
      return gauss_kronrod(f, a, b, cfg);
    case QuadratureScheme::tanh_sinh:
      return tanh_sinh(f, a, b, cfg);
  }
  throw InvalidArgument("integrate: unknown quadrature scheme");
}

QuadratureResult integrate_pieces(const Integrand& f, std::span<const double> points,
                                  const QuadratureConfig& cfg) {
  QuadratureResult total{0.0, 0.0, 0, true};
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] <= points[i]) continue;
    const QuadratureResult r = integrate(f, points[i], points[i + 1], cfg);
    total.value += r.value;
    total.error += r.error;
    total.subdivisions += r.subdivisions;
    total.converged = total.converged && r.converged;
  }
  return total;
}

double integrate_or_throw(const Integrand& f, double a, double b, const QuadratureConfig& cfg,
                          const char* what) {
  const QuadratureResult r = integrate(f, a, b, cfg);
  if (!r.converged) {
    std::ostringstream os;
    os << what << ": quadrature did not converge on [" << a << ", " << b << "] (estimate " << r.value
       << ", achieved error " << r.error << ", subdivisions " << r.subdivisions << ")";
    throw QuadratureFailure(os.str(), r.value, r.error);
  }
  return r.value;
}

QuadratureResult integrate_detect_divergence(const Integrand& f, double a, double b,
                                             const QuadratureConfig& cfg, const char* what) {
  const QuadratureResult first = integrate(f, a, b, cfg);
  if (first.converged) return first;
  QuadratureConfig doubled = cfg;
  doubled.max_subdivisions = 2 * cfg.max_subdivisions;
  const QuadratureResult second = integrate(f, a, b, doubled);
  const double tol = cfg.accuracy.target(second.value);
  if (!std::isfinite(first.value) || !std::isfinite(second.value) ||
      std::fabs(second.value - first.value) > 10.0 * tol) {
    std::ostringstream os;
    os << what << ": integral appears divergent on [" << a << ", " << b << "] (estimate moved from "
       << first.value << " to " << second.value << " when doubling subdivisions)";
    throw DivergentIntegral(os.str());
  }
  if (!second.converged) {
    std::ostringstream os;
    os << what << ": quadrature did not converge (estimate " << second.value << ", achieved error "
       << second.error << ")";
    throw QuadratureFailure(os.str(), second.value, second.error);
  }
  return second;
}

}  // namespace definetti
