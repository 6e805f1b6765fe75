#pragma once

#include "sntail/log_prob.hpp"
#include "sntail/quadrature.hpp"

namespace sntail {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2Pi = 1.83787706640934548356;  // ln(2 pi)
inline constexpr double kSqrt2 = 1.41421356237309504880;

double std_normal_pdf(double z);
double log_std_normal_pdf(double z);

// Phi(z) to 1e-15 absolute.
double std_normal_cdf(double z);

// ln Phi(z) to 1e-12 relative on the log value. Deep left tail (z <= -8)
// uses the Mills-ratio asymptotic series, never ln of the linear cdf.
LogProb log_std_normal_cdf(double z);

// Owen's T function to 1e-14 absolute.
double owen_t(double h, double a);

// Principal-branch Lambert W on z >= 0: w >= 0 with w e^w = z.
double lambert_w0(double z);

// Solves w + ln w = ln_z (that is, w e^w = e^{ln_z}) for arguments given in
// log form, so tail inversions never materialise an overflowing W argument.
double lambert_w0_log_arg(double ln_z);

// Coefficients of the tail equation u = a |g|^b exp(-c |g|^d) with g < 0.
struct TailFormCoefficients {
  double a;  // > 0
  double b;  // < 0
  double c;  // > 0
  double d;  // > 0

  void validate() const;
};

// ln of the Lambert-W argument (cd/|b|) (a/u)^{d/|b|} for the given u.
// The inversion below is valid once this is >= 1 (W argument >= e).
double tail_form_log_w_arg(const TailFormCoefficients& cf, double log_u);

// Exact Lambert-W inversion of the tail equation; returns g(u) < 0.
double solve_tail_form_log(const TailFormCoefficients& cf, double log_u);
double solve_tail_form(const TailFormCoefficients& cf, double u);

// Two-term expansion of the same inversion:
// |g| = {(|b|/(cd)) (y - ln y)}^{1/d} with y the log of the W argument.
double solve_tail_form_expanded_log(const TailFormCoefficients& cf,
                                    double log_u);
double solve_tail_form_expanded(const TailFormCoefficients& cf, double u);

// Exact standard normal quantile: Phi(result) = u to 1e-12 relative in u.
double std_normal_quantile(double u);
double std_normal_quantile_log(double log_u);

// Asymptotic quantile -sqrt(-2 ln(u sqrt(-4 pi ln u))); valid for u <= 0.1
// with the inner logarithm negative.
double std_normal_quantile_asymptotic(double u);
double std_normal_quantile_asymptotic_log(double log_u);

}  // namespace sntail
