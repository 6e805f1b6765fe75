#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sntail/log_prob.hpp"
#include "sntail/sn_bivariate.hpp"

namespace sntail {

// One diagonal tail-dependence evaluation at u: the common marginal
// quantile x_u, the joint probability C(u,u), the exact coefficient
// lambda_L(u) = C(u,u)/u, and the closed-form asymptote with their ratio.
struct TailPoint {
  double log_u = 0.0;
  double x_u = 0.0;
  LogProb log_joint{};
  LogProb log_lambda_exact{};  // log_joint - log_u, exactly
  LogProb log_lambda_asym{};
  double ratio = 0.0;  // exp(log_lambda_exact - log_lambda_asym)
};

// Exact lower-tail dependence coefficient at u (log_u < ln 1/2): x_u from
// the marginal skew-normal quantile, C(u,u) from joint_diag_log_cdf. The
// asymptotic side picks the branch by sign(theta), dispatching to
// normal_baseline at theta = 0.
TailPoint lambda_l_exact(const BivSkewNormalLaw& law, double log_u);

// Closed-form asymptote of ln lambda_L(u):
//   theta > 0: beta^2 ln u + ln K + (beta^2 - 1/2) ln(-ln u), with
//     K = (alpha^3/(pi lambda^4 beta (1+beta^2)^2)) sqrt(2/pi)
//         (2 pi lambda)^{1+beta^2} ((1+lambda^2)/2)^{3/2};
//   theta < 0: ((1-rho)/(1+rho)) ln u + ln((1+rho)/2)
//         + (1/2) ln((1+rho)/(1-rho)) - (rho/(1+rho)) ln(-pi ln u),
//     independent of |theta|.
// theta = 0 is rejected (use normal_baseline).
LogProb lambda_l_asymptotic(const BivSkewNormalLaw& law, double log_u);

// Upper-tail counterparts via reflection: lambda_U of X equals lambda_L of
// -X ~ SN2(-theta, R) evaluated at 1 - u, so both delegate to the
// lower-tail operation on the reflected law.
TailPoint lambda_u_exact(const BivSkewNormalLaw& law, double log_one_minus_u);
LogProb lambda_u_asymptotic(const BivSkewNormalLaw& law,
                            double log_one_minus_u);

// Symmetric-normal diagonal baseline:
//   ((1-rho)/(1+rho)) ln u + ln 2 + (1/2) ln((1+rho)/(1-rho))
//     - (rho/(1+rho)) ln(-4 pi ln u).
LogProb normal_baseline(double rho, double log_u);

// d/du C(u,u) at u = F1(x), i.e. 2 P(X2 <= x | X1 = x): via the 1-D
// reduction
//   2 int_{-inf}^{sqrt((1-rho)/(1+rho)) x} phi(z)
//       Phi(theta sqrt(1-rho^2) z + theta (1+rho) x) dz / Phi(lambda x),
// computed in the log domain. theta = 0 collapses to the closed form
// 2 Phi(sqrt((1-rho)/(1+rho)) x). Note the result is a derivative, not a
// probability: values up to 2 are legitimate.
LogProb conditional_tail_derivative_log(const BivSkewNormalLaw& law,
                                        double x);
double conditional_tail_derivative(const BivSkewNormalLaw& law, double x);

// de Haan comparison for the theta < 0 branch: lambda_L(u) ~ C'(u)/(tau+1)
// with tau = (1-rho)/(1+rho). lhs = ln lambda_L(u) exact, rhs =
// ln dC/du at x_u minus ln(tau + 1); gap = lhs - rhs in nats.
struct DeHaanCheck {
  LogProb lhs{};
  LogProb rhs{};
  double gap = 0.0;
};
DeHaanCheck de_haan_check(const BivSkewNormalLaw& law, double log_u);

// Monte Carlo estimate of lambda_L(u) = P(X1 <= x_u | X2 <= x_u) using the
// exact marginal quantile; binomial standard error over the conditioning
// count. Requires u >= 1e-4 (deeper is hopeless for MC) and n >= 10^4.
struct MCEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t joint_count = 0;
  std::size_t cond_count = 0;
};
MCEstimate estimate_lambda_l_mc(const BivSkewNormalLaw& law, double u,
                                std::size_t n, std::uint64_t seed);

// Least-squares fit of ln C(u,u) on [1, ln u, ln(-ln u)] over a TailPoint
// grid; kappa_hat is the ln u coefficient (the tail order; the log-log
// regressor absorbs the slowly varying factor). Requires >= 4 grid points,
// strictly decreasing in u, spanning >= 4 decades.
struct TailOrderFit {
  double kappa_hat = 0.0;
  double slope_se = 0.0;
  std::vector<TailPoint> grid;
};
TailOrderFit fit_tail_order(const BivSkewNormalLaw& law,
                            std::span<const double> log_u_grid);

// Tail order the fit should recover: 1 + beta^2 for theta > 0, 2/(1+rho)
// for theta <= 0.
double tail_order_target(const BivSkewNormalLaw& law);

}  // namespace sntail
