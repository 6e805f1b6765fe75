#include "sntail/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sntail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = 2.71828182845904523536;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw domain_error(std::string(what) + ": non-finite input");
  }
}

// Owen's T for h >= 0, 0 <= a <= 1, by tanh-sinh quadrature of the
// defining integrand exp(-h^2 (1+x^2)/2) / (2 pi (1+x^2)) over [0, a].
// The integrand is smooth; absolute accuracy far exceeds 1e-14.
double owen_t_core(double h, double a) {
  if (a == 0.0) return 0.0;
  QuadSpec spec;
  spec.rel_tol = 1e-15;
  const double hh = 0.5 * h * h;
  return tanh_sinh(
      [hh](double x) {
        const double opx2 = 1.0 + x * x;
        return std::exp(-hh * opx2) / (2.0 * kPi * opx2);
      },
      0.0, a, spec);
}

// Halley refinement for w e^w = z on 0 < z < e, seeded with ln(1+z).
double lambert_w0_small(double z) {
  double w = std::log1p(z);
  double prev_step = kInf;
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double denom = ew * (w + 1.0) - f * (w + 2.0) / (2.0 * (w + 1.0));
    const double step = f / denom;
    w -= step;
    const double astep = std::abs(step);
    // Converged, or stalled at roundoff (steps no longer shrink).
    if (astep <= 1e-16 * (1.0 + std::abs(w))) return w;
    if (astep >= prev_step && astep <= 1e-12 * (1.0 + std::abs(w))) return w;
    prev_step = astep;
  }
  throw convergence_error("lambert_w0: no convergence (small branch)");
}

// AS 241 rational approximation to the normal quantile (Wichura's PPND16),
// good to roughly double precision over (0, 1).
double ppnd16(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -value : value;
}

// One Newton step for log Phi(z) = log_u, performed on the log scale so it
// stays well conditioned arbitrarily deep in the tail.
double log_newton_polish(double z, double log_u) {
  const double lcdf = log_std_normal_cdf(z).value;
  const double lpdf = log_std_normal_pdf(z);
  return z - (lcdf - log_u) * std::exp(lcdf - lpdf);
}

}  // namespace

double std_normal_pdf(double z) {
  require_finite(z, "std_normal_pdf");
  return std::exp(-0.5 * z * z - 0.5 * kLn2Pi);
}

double log_std_normal_pdf(double z) {
  require_finite(z, "log_std_normal_pdf");
  return -0.5 * z * z - 0.5 * kLn2Pi;
}

double std_normal_cdf(double z) {
  require_finite(z, "std_normal_cdf");
  return 0.5 * std::erfc(-z / kSqrt2);
}

LogProb log_std_normal_cdf(double z) {
  require_finite(z, "log_std_normal_cdf");
  if (z <= -8.0) {
    // Mills-ratio asymptotic series
    //   Phi(z) = phi(z)/|z| * sum_k (-1)^k (2k-1)!!/z^{2k}.
    // The series is divergent; truncate at machine convergence or at the
    // first term that stops shrinking, whichever comes first. At z = -8
    // the smallest term is ~2e-14 relative, ample for the log value.
    const double zz = z * z;
    double term = 1.0, sum = 1.0, prev_mag = 1.0;
    for (int k = 1; k < 128; ++k) {
      term *= -(2.0 * k - 1.0) / zz;
      const double mag = std::abs(term);
      if (mag >= prev_mag) break;
      sum += term;
      prev_mag = mag;
      if (mag <= 1e-18 * sum) break;
    }
    return log_prob(log_std_normal_pdf(z) - std::log(-z) + std::log(sum));
  }
  if (z <= 0.0) {
    return log_prob(std::log(0.5 * std::erfc(-z / kSqrt2)));
  }
  return log_prob(std::log1p(-0.5 * std::erfc(z / kSqrt2)));
}

double owen_t(double h, double a) {
  require_finite(h, "owen_t");
  require_finite(a, "owen_t");
  // T is even in h and odd in a; reduce to h >= 0, a >= 0.
  h = std::abs(h);
  const double sign = (a < 0.0) ? -1.0 : 1.0;
  a = std::abs(a);
  if (a == 0.0) return 0.0;
  if (h == 0.0) return sign * std::atan(a) / (2.0 * kPi);
  if (a <= 1.0) return sign * owen_t_core(h, a);
  // For a > 1, pass to the complementary triangle:
  //   T(h, a) = (Q(h) + Q(ah))/2 - Q(h) Q(ah) - T(ah, 1/a),  Q = Phi(-.)
  const double qh = std_normal_cdf(-h);
  const double qah = std_normal_cdf(-a * h);
  const double t = 0.5 * (qh + qah) - qh * qah - owen_t_core(a * h, 1.0 / a);
  return sign * t;
}

double lambert_w0(double z) {
  if (std::isnan(z) || z < 0.0) {
    throw domain_error("lambert_w0: argument must be nonnegative");
  }
  if (z == 0.0) return 0.0;
  if (z == kInf) throw domain_error("lambert_w0: non-finite input");
  if (z < kE) return lambert_w0_small(z);
  return lambert_w0_log_arg(std::log(z));
}

double lambert_w0_log_arg(double ln_z) {
  require_finite(ln_z, "lambert_w0_log_arg");
  if (ln_z < 1.0) return lambert_w0(std::exp(ln_z));
  // Solve g(w) = w + ln w - ln_z = 0 (strictly increasing for w > 0) by
  // Halley from the two-term asymptotic seed ln z - ln ln z.
  double w = (ln_z > 1.0) ? ln_z - std::log(ln_z) : 1.0;
  double prev_step = kInf;
  for (int it = 0; it < 64; ++it) {
    const double g = w + std::log(w) - ln_z;
    const double g1 = 1.0 + 1.0 / w;
    const double g2 = -1.0 / (w * w);
    const double step = 2.0 * g * g1 / (2.0 * g1 * g1 - g * g2);
    w -= step;
    if (!(w > 0.0)) w = 1e-12;  // safeguard; never triggered from our seeds
    const double astep = std::abs(step);
    // Converged, or stalled at roundoff: near the root the residual sits at
    // ~ulp(ln_z), so steps of order 1e-16 * w * ln w / (1 + 1/w) can repeat
    // forever without shrinking below the primary threshold.
    if (astep <= 1e-16 * (1.0 + w)) return w;
    if (astep >= prev_step && astep <= 1e-12 * (1.0 + w)) return w;
    prev_step = astep;
  }
  throw convergence_error("lambert_w0_log_arg: no convergence");
}

void TailFormCoefficients::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
      !std::isfinite(d) || !(a > 0.0) || !(b < 0.0) || !(c > 0.0) ||
      !(d > 0.0)) {
    throw domain_error(
        "TailFormCoefficients: need a, c, d > 0 and b < 0, all finite");
  }
}

double tail_form_log_w_arg(const TailFormCoefficients& cf, double log_u) {
  cf.validate();
  if (std::isnan(log_u) || !(log_u < 0.0)) {
    throw domain_error("tail_form_log_w_arg: log_u must be negative");
  }
  const double babs = -cf.b;
  return std::log(cf.c * cf.d / babs) + (cf.d / babs) * (std::log(cf.a) - log_u);
}

double solve_tail_form_log(const TailFormCoefficients& cf, double log_u) {
  const double y = tail_form_log_w_arg(cf, log_u);
  if (y < 1.0) {
    throw range_error("solve_tail_form: Lambert-W argument below e; "
                      "u is outside the asymptotic range");
  }
  const double w = lambert_w0_log_arg(y);
  const double babs = -cf.b;
  return -std::pow(babs * w / (cf.c * cf.d), 1.0 / cf.d);
}

double solve_tail_form(const TailFormCoefficients& cf, double u) {
  if (std::isnan(u) || !(u > 0.0) || !(u < 1.0)) {
    throw domain_error("solve_tail_form: u must lie in (0, 1)");
  }
  return solve_tail_form_log(cf, std::log(u));
}

double solve_tail_form_expanded_log(const TailFormCoefficients& cf,
                                    double log_u) {
  const double y = tail_form_log_w_arg(cf, log_u);
  if (y < 1.0) {
    throw range_error("solve_tail_form_expanded: Lambert-W argument below e; "
                      "u is outside the asymptotic range");
  }
  const double babs = -cf.b;
  return -std::pow((babs / (cf.c * cf.d)) * (y - std::log(y)), 1.0 / cf.d);
}

double solve_tail_form_expanded(const TailFormCoefficients& cf, double u) {
  if (std::isnan(u) || !(u > 0.0) || !(u < 1.0)) {
    throw domain_error("solve_tail_form_expanded: u must lie in (0, 1)");
  }
  return solve_tail_form_expanded_log(cf, std::log(u));
}

double std_normal_quantile(double u) {
  if (std::isnan(u) || !(u > 0.0) || !(u < 1.0)) {
    throw domain_error("std_normal_quantile: u must lie in (0, 1)");
  }
  const double z = ppnd16(u);
  return log_newton_polish(z, std::log(u));
}

double std_normal_quantile_log(double log_u) {
  if (std::isnan(log_u) || !(log_u < 0.0)) {
    throw domain_error("std_normal_quantile_log: log_u must be negative");
  }
  double z;
  if (log_u > -700.0) {
    z = ppnd16(std::exp(log_u));
  } else {
    z = std_normal_quantile_asymptotic_log(log_u);
  }
  z = log_newton_polish(z, log_u);
  return log_newton_polish(z, log_u);
}

double std_normal_quantile_asymptotic(double u) {
  if (std::isnan(u) || !(u > 0.0)) {
    throw domain_error("std_normal_quantile_asymptotic: u must be positive");
  }
  if (u > 0.1) {
    throw domain_error("std_normal_quantile_asymptotic: valid for u <= 0.1");
  }
  return std_normal_quantile_asymptotic_log(std::log(u));
}

double std_normal_quantile_asymptotic_log(double log_u) {
  if (std::isnan(log_u) || !(log_u < 0.0)) {
    throw domain_error("std_normal_quantile_asymptotic_log: log_u must be negative");
  }
  if (log_u > std::log(0.1)) {
    throw domain_error("std_normal_quantile_asymptotic_log: valid for u <= 0.1");
  }
  // -sqrt(-2 ln(u sqrt(-4 pi ln u))), evaluated on the log scale.
  const double inner = log_u + 0.5 * std::log(-4.0 * kPi * log_u);
  if (!(inner < 0.0)) {
    throw range_error("std_normal_quantile_asymptotic: inner log nonnegative");
  }
  return -std::sqrt(-2.0 * inner);
}

}  // namespace sntail
