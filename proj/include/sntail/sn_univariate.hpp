#pragma once

#include "sntail/log_prob.hpp"
#include "sntail/quadrature.hpp"
#include "sntail/specfun.hpp"

namespace sntail {

// Univariate skew normal law SN(lambda), density 2 phi(x) Phi(lambda x).
// lambda = 0 reduces to the standard normal; the asymptotic-branch
// operations reject it because the skewed tail formulas have no
// lambda -> 0 limit.
struct SkewNormalLaw {
  double lambda = 0.0;
  QuadSpec quad{};

  void validate() const;
};

double sn_pdf(const SkewNormalLaw& law, double x);
double sn_log_pdf(const SkewNormalLaw& law, double x);

// Exact cdf via Owen's T: F(z; lambda) = Phi(z) - 2 T(z, lambda).
double sn_cdf(const SkewNormalLaw& law, double z);

// ln F(z; lambda) for z <= 0 by log-domain quadrature of the density over
// (-inf, z]; usable far below linear underflow. z > 0 is rejected (use
// sn_cdf, or sn_log_cdf which dispatches on the sign).
LogProb sn_log_tail_cdf(const SkewNormalLaw& law, double z);
LogProb sn_log_cdf(const SkewNormalLaw& law, double z);

// Two-sided Capitanio bracket of F(z; lambda) for z < 0, lambda != 0,
// evaluated termwise in log domain. The bracket is only valid once |z| is
// large enough that the lower bound is positive; below that a range error
// is thrown. Values are raw log-scale bounds, not clamped to [0, 1].
struct CapitanioBounds {
  LogProb lower;
  LogProb upper;
};
CapitanioBounds capitanio_bounds(const SkewNormalLaw& law, double z);

// Leading-order tail approximation of ln F(z; lambda) for z < 0:
//   lambda > 0:  -ln(pi lambda (1+lambda^2)) - 2 ln|z| - (1+lambda^2) z^2/2
//   lambda < 0:  ln sqrt(2/pi) - ln|z| - z^2/2
// Not clamped: at desk-scale |z| the value may exceed 0.
LogProb sn_tail_asymptotic(const SkewNormalLaw& law, double z);

// Exact quantile: the z with ln F(z) = log_u, by safeguarded bracketing
// around the asymptotic seed (u <= 1e-3) or a coarse fixed bracket.
double sn_quantile(const SkewNormalLaw& law, double log_u);

// Closed-form asymptotic quantile (two-term Lambert-W expansion written
// out): lambda > 0 uses A = ln(2 pi lambda u) and
//   -sqrt(-(2/(1+lambda^2)) (A + ln(-A)));
// lambda < 0 is lambda-free:
//   -sqrt(-2 ln((u/2) sqrt(-4 pi ln((u/2) sqrt(2 pi))))).
double sn_quantile_asymptotic(const SkewNormalLaw& law, double u);
double sn_quantile_asymptotic_log(const SkewNormalLaw& law, double log_u);

// Coefficients of the tail equation u = a|z|^b exp(-c|z|^d) matching the
// sn_tail_asymptotic branch for this lambda; feed to solve_tail_form for
// the full Lambert-W inversion instead of the two-term expansion.
TailFormCoefficients sn_tail_form_coefficients(double lambda);

// Marginal shape of the first component of the equi-skewed bivariate law:
// lambda = theta (1+rho) / sqrt(1 + theta^2 (1-rho^2)).
double marginal_lambda(double theta, double rho);

}  // namespace sntail
