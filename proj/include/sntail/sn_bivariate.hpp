#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

#include "sntail/log_prob.hpp"
#include "sntail/quadrature.hpp"
#include "sntail/sn_univariate.hpp"

namespace sntail {

// Equi-skewed bivariate skew normal: density
//   f(x1, x2) = 2 phi_2(x1, x2; rho) Phi(theta (x1 + x2))
// with exchangeable correlation [[1, rho], [rho, 1]].
//
// Everything downstream leans on the normal mean-mixture representation
// X = alpha V + Z, V = |N(0,1)| independent of Z ~ N_2(0, psi), with
//   q     = 1 + 2 theta^2 (1 + rho)
//   alpha = theta (1 + rho) / sqrt(q)
//   psi   = [[1 + theta^2(1 - rho^2), rho - theta^2(1 - rho^2)], ...] / q
//   beta  = sqrt((1 - rho) q / (1 + rho))
// beta is the shape of the standardized max(Z1*, Z2*) law; lambda is the
// common marginal skewness theta (1 + rho) / sqrt(1 + theta^2 (1 - rho^2)).
struct BivSkewNormalLaw {
  double theta = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  Eigen::Matrix2d psi = Eigen::Matrix2d::Identity();
  QuadSpec quad{};
};

// Builds the law and its mixture parameters. Requires finite theta and
// |rho| < 1. The mixture identities (alpha^2 (1 + lambda^2) = lambda^2,
// alpha / lambda > 0, psi positive definite) are checked after derivation.
BivSkewNormalLaw derive_params(double theta, double rho,
                               const QuadSpec& quad = {});

double biv_log_pdf(const BivSkewNormalLaw& law, double x1, double x2);
double biv_pdf(const BivSkewNormalLaw& law, double x1, double x2);

// Evaluation route for the diagonal joint cdf P(X1 <= x, X2 <= x).
//   mixture: 1-D log-domain integral over the half-normal mixing variable,
//            P = E_V[ F_SN(beta)((x - alpha V) / (alpha / lambda)) ];
//            requires theta != 0 (alpha / lambda is 0/0 at theta = 0).
//   grid:    2-D log-domain quadrature of the density over (-inf, x]^2.
//   auto_dispatch: mixture when theta != 0, dedicated normal orthant
//            otherwise; falls back to grid if the mixture quadrature fails.
enum class JointMethod { auto_dispatch, mixture, grid };

LogProb joint_diag_log_cdf(const BivSkewNormalLaw& law, double x,
                           JointMethod method = JointMethod::auto_dispatch);

// Deep-tail approximation for the positive-skew branch, theta > 0, x < 0:
//   ln P(X1 <= x, X2 <= x) ~ ln Kc - 3 ln|x| - (lambda^2/(2 alpha^2)) (1+beta^2) x^2,
//   Kc = (alpha^3 / (pi lambda^4 beta (1 + beta^2)^2)) sqrt(2/pi).
// Not clamped: at desk-scale |x| the value may exceed 0.
LogProb joint_diag_tail_asymptotic(const BivSkewNormalLaw& law, double x);

// ln P(Z1 <= x, Z2 <= x) for a standard bivariate normal with correlation
// rho, via the 1-D reduction  integral phi(t) Phi((x - rho t)/sqrt(1-rho^2)) dt
// over (-inf, x].
LogProb normal_orthant_log(double rho, double x, const QuadSpec& spec = {});

struct SampleBatch {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::array<double, 2>> rows;
};

// Draws n rows of alpha V + Z, keyed by (seed, row): uniform channels
// 4*row + c with c = 0 feeding V and c = 1, 2 feeding chol(psi) * g.
// Bit-for-bit reproducible for a fixed seed.
SampleBatch sample(const BivSkewNormalLaw& law, std::size_t n,
                   std::uint64_t seed);

}  // namespace sntail
