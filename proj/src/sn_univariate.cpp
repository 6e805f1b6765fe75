#include "sntail/sn_univariate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sntail {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw domain_error(std::string(what) + ": non-finite input");
  }
}

}  // namespace

void SkewNormalLaw::validate() const {
  if (!std::isfinite(lambda)) {
    throw domain_error("SkewNormalLaw: lambda must be finite");
  }
  quad.validate();
}

double sn_pdf(const SkewNormalLaw& law, double x) {
  law.validate();
  require_finite(x, "sn_pdf");
  return 2.0 * std_normal_pdf(x) * std_normal_cdf(law.lambda * x);
}

double sn_log_pdf(const SkewNormalLaw& law, double x) {
  law.validate();
  require_finite(x, "sn_log_pdf");
  return std::log(2.0) + log_std_normal_pdf(x) +
         log_std_normal_cdf(law.lambda * x).value;
}

double sn_cdf(const SkewNormalLaw& law, double z) {
  law.validate();
  require_finite(z, "sn_cdf");
  const double p = std_normal_cdf(z) - 2.0 * owen_t(z, law.lambda);
  return std::clamp(p, 0.0, 1.0);
}

LogProb sn_log_tail_cdf(const SkewNormalLaw& law, double z) {
  law.validate();
  require_finite(z, "sn_log_tail_cdf");
  if (z > 0.0) {
    throw domain_error("sn_log_tail_cdf: z must be <= 0; use sn_cdf");
  }
  if (law.lambda == 0.0) return log_std_normal_cdf(z);

  // t = z - s maps (-inf, z] onto s >= 0.
  const double lambda = law.lambda;
  const auto log_f = [&](double s) {
    const double t = z - s;
    return std::log(2.0) + log_std_normal_pdf(t) +
           log_std_normal_cdf(lambda * t).value;
  };
  const double cut = log_tail_cutoff(log_f, "sn_log_tail_cdf");
  return log_prob(tanh_sinh_log(log_f, 0.0, cut, law.quad));
}

LogProb sn_log_cdf(const SkewNormalLaw& law, double z) {
  if (std::isfinite(z) && z > 0.0) {
    return log_prob(std::log(sn_cdf(law, z)));
  }
  return sn_log_tail_cdf(law, z);
}

CapitanioBounds capitanio_bounds(const SkewNormalLaw& law, double z) {
  law.validate();
  require_finite(z, "capitanio_bounds");
  if (law.lambda == 0.0) {
    throw shape_error("capitanio_bounds: lambda = 0 unsupported");
  }
  if (!(z < 0.0)) {
    throw domain_error("capitanio_bounds: z must be negative");
  }
  const double lam = law.lambda;
  const double zz = z * z;
  const double lz = std::log(-z);

  if (lam > 0.0) {
    // (1/pi) e^{-(1+lam^2) z^2/2} [ z^{-2}/(lam(1+lam^2)) - (...) z^{-4} ]
    // with upper bound keeping only the z^{-2} term. The bracketed factor
    // of the lower bound is t1 (1 - (2 + 1/lam^2)/z^2).
    const double pre = -std::log(kPi) - 0.5 * (1.0 + lam * lam) * zz;
    const double t1 = -2.0 * lz - std::log(lam * (1.0 + lam * lam));
    const double shrink = (2.0 + 1.0 / (lam * lam)) / zz;
    if (shrink >= 1.0) {
      throw range_error(
          "capitanio_bounds: |z| below the validity range (lower bound "
          "nonpositive)");
    }
    return {LogProb{pre + t1 + std::log1p(-shrink)}, LogProb{pre + t1}};
  }

  // lam < 0: pre = 2 phi(z); bracket terms share
  //   |z|^{-1} - sqrt(2/pi) z^{-2} e^{-z^2 lam^2/2} / (|lam|(1+lam^2)),
  // the lower closes with -|z|^{-3}, the upper instead adds the positive
  // z^{-4} correction (and omits the -|z|^{-3} term).
  const double alam = -lam;
  const double opl = 1.0 + lam * lam;
  const double pre = std::log(2.0) - 0.5 * kLn2Pi - 0.5 * zz;
  const double half_l2pi = 0.5 * std::log(2.0 / kPi);
  const std::pair<int, double> t_a{+1, -lz};
  const std::pair<int, double> t_b{
      -1, half_l2pi - 2.0 * lz - 0.5 * zz * lam * lam - std::log(alam * opl)};
  const std::pair<int, double> t_c{-1, -3.0 * lz};
  const std::pair<int, double> t_d{
      +1, half_l2pi - 4.0 * lz - 0.5 * zz * lam * lam +
              std::log(2.0 / (alam * opl * opl) +
                       1.0 / (alam * alam * alam * opl))};

  const std::array<std::pair<int, double>, 3> lo_terms{t_a, t_b, t_c};
  const auto lo = signed_log_sum(lo_terms);
  if (lo.first <= 0) {
    throw range_error(
        "capitanio_bounds: |z| below the validity range (lower bound "
        "nonpositive)");
  }
  const std::array<std::pair<int, double>, 3> hi_terms{t_a, t_b, t_d};
  const auto hi = signed_log_sum(hi_terms);
  return {LogProb{pre + lo.second}, LogProb{pre + hi.second}};
}

LogProb sn_tail_asymptotic(const SkewNormalLaw& law, double z) {
  law.validate();
  require_finite(z, "sn_tail_asymptotic");
  if (law.lambda == 0.0) {
    throw shape_error("sn_tail_asymptotic: lambda = 0 unsupported");
  }
  if (!(z < 0.0)) {
    throw domain_error("sn_tail_asymptotic: z must be negative");
  }
  const double lam = law.lambda;
  if (lam > 0.0) {
    return LogProb{-std::log(kPi * lam * (1.0 + lam * lam)) -
                   2.0 * std::log(-z) - 0.5 * (1.0 + lam * lam) * z * z};
  }
  return LogProb{0.5 * std::log(2.0 / kPi) - std::log(-z) - 0.5 * z * z};
}

TailFormCoefficients sn_tail_form_coefficients(double lambda) {
  if (!std::isfinite(lambda)) {
    throw domain_error("sn_tail_form_coefficients: lambda must be finite");
  }
  if (lambda == 0.0) {
    throw shape_error("sn_tail_form_coefficients: lambda = 0 unsupported");
  }
  if (lambda > 0.0) {
    return {1.0 / (kPi * lambda * (1.0 + lambda * lambda)), -2.0,
            0.5 * (1.0 + lambda * lambda), 2.0};
  }
  return {std::sqrt(2.0 / kPi), -1.0, 0.5, 2.0};
}

double sn_quantile_asymptotic_log(const SkewNormalLaw& law, double log_u) {
  law.validate();
  if (std::isnan(log_u) || !(log_u < 0.0)) {
    throw domain_error("sn_quantile_asymptotic: log_u must be negative");
  }
  const double lam = law.lambda;
  if (lam == 0.0) {
    throw shape_error("sn_quantile_asymptotic: lambda = 0 unsupported");
  }
  if (lam > 0.0) {
    const double a = std::log(2.0 * kPi * lam) + log_u;
    if (!(a < 0.0)) {
      throw range_error("sn_quantile_asymptotic: u outside asymptotic range");
    }
    const double inner = a + std::log(-a);
    if (!(inner < 0.0)) {
      throw range_error("sn_quantile_asymptotic: u outside asymptotic range");
    }
    return -std::sqrt(-(2.0 / (1.0 + lam * lam)) * inner);
  }
  // lambda-free branch: -sqrt(-2 ln((u/2) sqrt(-4 pi ln((u/2) sqrt(2 pi))))).
  const double b = log_u - std::log(2.0);
  const double c_inner = b + 0.5 * kLn2Pi;
  if (!(c_inner < 0.0)) {
    throw range_error("sn_quantile_asymptotic: u outside asymptotic range");
  }
  const double e_inner =
      b + 0.5 * (std::log(4.0 * kPi) + std::log(-c_inner));
  if (!(e_inner < 0.0)) {
    throw range_error("sn_quantile_asymptotic: u outside asymptotic range");
  }
  return -std::sqrt(-2.0 * e_inner);
}

double sn_quantile_asymptotic(const SkewNormalLaw& law, double u) {
  if (std::isnan(u) || !(u > 0.0) || !(u < 1.0)) {
    throw domain_error("sn_quantile_asymptotic: u must lie in (0, 1)");
  }
  return sn_quantile_asymptotic_log(law, std::log(u));
}

double sn_quantile(const SkewNormalLaw& law, double log_u) {
  law.validate();
  if (std::isnan(log_u) || !(log_u < 0.0)) {
    throw domain_error("sn_quantile: log_u must be negative");
  }

  const auto h = [&](double z) { return sn_log_cdf(law, z).value - log_u; };

  double lo = -10.0, hi = 40.0;
  bool seeded = false;
  if (log_u <= std::log(1e-3)) {
    try {
      const double z0 = (law.lambda == 0.0)
                            ? std_normal_quantile_asymptotic_log(log_u)
                            : sn_quantile_asymptotic_log(law, log_u);
      const double m = law.quad.bracket_margin;
      lo = m * z0;
      hi = z0 / m;
      seeded = true;
    } catch (const range_error&) {
      // u not deep enough for the seed; keep the coarse bracket.
    }
  }

  double h_lo = h(lo), h_hi = h(hi);
  int expansions = 0;
  while (h_lo > 0.0 || h_hi < 0.0) {
    if (++expansions > law.quad.max_nodes) {
      throw convergence_error("sn_quantile: bracketing failed");
    }
    if (h_lo > 0.0) {
      lo = seeded ? lo * law.quad.bracket_margin : lo * 2.0 - 1.0;
      h_lo = h(lo);
    }
    if (h_hi < 0.0) {
      hi = seeded ? hi / law.quad.bracket_margin : hi * 2.0 + 1.0;
      if (seeded && hi > -1e-3) {
        // Seeded bracket shrinks toward 0 and can never cross it; the root
        // can sit at z >= 0 for extreme lambda, so fall back to widening.
        hi = 1.0;
        seeded = false;
      }
      h_hi = h(hi);
    }
  }

  const double ftol = 1e-12 * std::max(1.0, std::abs(log_u));
  const double xtol = 1e-14 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  return brent_root(h, lo, hi, h_lo, h_hi, xtol, ftol, 200);
}

double marginal_lambda(double theta, double rho) {
  require_finite(theta, "marginal_lambda");
  if (std::isnan(rho) || !(std::abs(rho) < 1.0)) {
    throw domain_error("marginal_lambda: need |rho| < 1");
  }
  return theta * (1.0 + rho) /
         std::sqrt(1.0 + theta * theta * (1.0 - rho * rho));
}

}  // namespace sntail
