#include "sntail/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sntail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kHalfPi = 1.57079632679489661923;

// ln cosh(y) without overflow.
double log_cosh(double y) {
  const double ay = std::abs(y);
  return ay + std::log1p(std::exp(-2.0 * ay)) - kLn2;
}

// Visits the tanh-sinh nodes of one refinement level mapped into [a, b],
// passing (abscissa, ln weight) to the callback. The weight includes the
// interval half-width but not the step h. |t| <= 3.6 is enough: beyond it
// the abscissas collide with the interval ends at double precision.
template <class F>
int for_each_node(double a, double b, double h, bool odd_only, F&& visit) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const double log_r = std::log(r);
  const int kmax = static_cast<int>(std::ceil(3.6 / h));
  int visits = 0;
  for (int k = odd_only ? 1 : 0; k <= kmax; k += odd_only ? 2 : 1) {
    const double t = k * h;
    const double s = kHalfPi * std::sinh(t);
    const double u = std::tanh(s);
    if (k > 0 && 1.0 - u <= 0.0) break;  // node collapsed onto an endpoint
    const double log_w = log_r + std::log(kHalfPi) + log_cosh(t) - 2.0 * log_cosh(s);
    visit(c + r * u, log_w);
    ++visits;
    if (k > 0) {
      visit(c - r * u, log_w);
      ++visits;
    }
  }
  return visits;
}

void check_interval(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
    throw domain_error("quadrature: invalid interval");
  }
}

}  // namespace

void QuadSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_log_tol > 0.0) || !(bracket_margin > 0.0)) {
    throw domain_error("QuadSpec: tolerances and margins must be positive");
  }
  if (max_nodes < 64) {
    throw domain_error("QuadSpec: max_nodes must be at least 64");
  }
}

double logsumexp(std::span<const double> v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  if (m == kInf) return kInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double log_sub(double a, double b) {
  if (b == -kInf) return a;
  if (a < b) throw domain_error("log_sub: negative difference");
  if (a == b) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

std::pair<int, double> signed_log_sum(
    std::span<const std::pair<int, double>> terms) {
  double pos = -kInf, neg = -kInf;
  for (const auto& [sign, ln_mag] : terms) {
    if (sign > 0) {
      pos = log_add(pos, ln_mag);
    } else if (sign < 0) {
      neg = log_add(neg, ln_mag);
    }
  }
  if (pos == neg) return {0, -kInf};
  if (pos > neg) return {1, log_sub(pos, neg)};
  return {-1, log_sub(neg, pos)};
}

double log_tail_cutoff(const std::function<double(double)>& log_f,
                       const char* what) {
  double peak = log_f(0.0);
  double s = 0.0;
  double step = 0x1p-20 * 0.25;
  while (s < 1000.0) {
    s += step;
    if (step < 0.25) step = std::min(step * 2.0, 0.25);
    const double v = log_f(s);
    if (v > peak) peak = v;
    if (v < peak - 60.0) return s;
  }
  throw convergence_error(std::string(what) + ": integrand fails to decay");
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 const QuadSpec& spec) {
  spec.validate();
  check_interval(a, b);
  if (a == b) return 0.0;

  double h = 0.5;
  double integral = 0.0;
  double prev_delta = kInf;
  int used = 0;
  for (int level = 0;; ++level) {
    double level_sum = 0.0;
    used += for_each_node(a, b, h, level > 0, [&](double x, double log_w) {
      level_sum += std::exp(log_w) * f(x);
    });
    const double prev = integral;
    integral = (level == 0) ? h * level_sum : 0.5 * integral + h * level_sum;
    const double delta = std::abs(integral - prev);
    if (level >= 3 && delta <= spec.rel_tol * std::abs(integral) + 1e-300) {
      return integral;
    }
    // Roundoff plateau: genuine tanh-sinh convergence shrinks the level
    // delta at least geometrically, so a stalled delta at ~1e-12 relative
    // means the sum is as converged as doubles allow, even if rel_tol is
    // tighter than that.
    if (level >= 4 && delta <= 1e-12 * std::abs(integral) &&
        delta >= 0.5 * prev_delta) {
      return integral;
    }
    prev_delta = delta;
    if (used >= spec.max_nodes) {
      throw convergence_error("tanh_sinh: node budget exhausted");
    }
    h *= 0.5;
  }
}

double tanh_sinh_log(const std::function<double(double)>& log_f, double a,
                     double b, const QuadSpec& spec) {
  spec.validate();
  check_interval(a, b);
  if (a == b) return -kInf;

  double h = 0.5;
  double log_integral = -kInf;
  int used = 0;
  std::vector<double> terms;
  for (int level = 0;; ++level) {
    terms.clear();
    used += for_each_node(a, b, h, level > 0, [&](double x, double log_w) {
      terms.push_back(log_w + log_f(x));
    });
    const double level_sum = logsumexp(terms);
    const double prev = log_integral;
    log_integral = (level == 0)
                       ? std::log(h) + level_sum
                       : log_add(log_integral - kLn2, std::log(h) + level_sum);
    if (level >= 3) {
      if (log_integral == -kInf && prev == -kInf) return -kInf;
      if (std::abs(log_integral - prev) <= spec.abs_log_tol) return log_integral;
    }
    if (used >= spec.max_nodes) {
      throw convergence_error("tanh_sinh_log: node budget exhausted");
    }
    h *= 0.5;
  }
}

double tanh_sinh_log_2d(const std::function<double(double, double)>& log_f,
                        double ax, double bx, double ay, double by,
                        const QuadSpec& spec) {
  // Inner integrals feed every outer node, so run them a little tighter.
  QuadSpec inner = spec;
  inner.abs_log_tol = 0.5 * spec.abs_log_tol;
  return tanh_sinh_log(
      [&](double x) {
        return tanh_sinh_log([&](double y) { return log_f(x, y); }, ay, by,
                             inner);
      },
      ax, bx, spec);
}

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double fa, double fb, double xtol, double ftol,
                  int max_iter) {
  if (std::isnan(fa) || std::isnan(fb)) {
    throw domain_error("brent_root: NaN at bracket endpoint");
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw domain_error("brent_root: endpoints do not bracket a root");
  }

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 =
        2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(fb) <= ftol || std::abs(xm) <= tol1) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation, falling back to secant
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw convergence_error("brent_root: iteration budget exhausted");
}

}  // namespace sntail
