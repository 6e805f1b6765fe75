#include "sntail/taildep.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "sntail/errors.hpp"
#include "sntail/sn_univariate.hpp"
#include "sntail/specfun.hpp"

namespace sntail {

namespace {

// Both tail coefficients are defined on u in (0, 1/2].
void require_tail_u(double log_u, const char* what) {
  if (!(log_u < std::log(0.5))) {
    throw domain_error(std::string(what) + ": require log_u < ln(1/2)");
  }
}

BivSkewNormalLaw reflected(const BivSkewNormalLaw& law) {
  return derive_params(-law.theta, law.rho, law.quad);
}

}  // namespace

TailPoint lambda_l_exact(const BivSkewNormalLaw& law, double log_u) {
  require_tail_u(log_u, "lambda_l_exact");
  TailPoint pt;
  pt.log_u = log_u;
  const SkewNormalLaw marginal{law.lambda, law.quad};
  pt.x_u = sn_quantile(marginal, log_u);
  pt.log_joint = joint_diag_log_cdf(law, pt.x_u);
  pt.log_lambda_exact = LogProb{pt.log_joint.value - log_u};
  pt.log_lambda_asym = law.theta == 0.0
                           ? normal_baseline(law.rho, log_u)
                           : lambda_l_asymptotic(law, log_u);
  pt.ratio = std::exp(pt.log_lambda_exact.value - pt.log_lambda_asym.value);
  return pt;
}

LogProb lambda_l_asymptotic(const BivSkewNormalLaw& law, double log_u) {
  if (law.theta == 0.0) {
    throw shape_error(
        "lambda_l_asymptotic: theta = 0 has no skewed branch; use "
        "normal_baseline");
  }
  if (!(log_u < 0.0)) {
    throw range_error("lambda_l_asymptotic: require u < 1");
  }
  if (law.theta > 0.0) {
    const double b = law.beta;
    const double b2 = b * b;
    const double l = law.lambda;
    const double log_k = 3.0 * std::log(law.alpha) - std::log(kPi) -
                         4.0 * std::log(l) - std::log(b) -
                         2.0 * std::log1p(b2) + 0.5 * std::log(2.0 / kPi) +
                         (1.0 + b2) * std::log(2.0 * kPi * l) +
                         1.5 * std::log((1.0 + l * l) / 2.0);
    return LogProb{b2 * log_u + log_k + (b2 - 0.5) * std::log(-log_u)};
  }
  const double r = law.rho;
  return LogProb{(1.0 - r) / (1.0 + r) * log_u + std::log((1.0 + r) / 2.0) +
                 0.5 * std::log((1.0 + r) / (1.0 - r)) -
                 r / (1.0 + r) * std::log(-kPi * log_u)};
}

TailPoint lambda_u_exact(const BivSkewNormalLaw& law,
                         double log_one_minus_u) {
  return lambda_l_exact(reflected(law), log_one_minus_u);
}

LogProb lambda_u_asymptotic(const BivSkewNormalLaw& law,
                            double log_one_minus_u) {
  return lambda_l_asymptotic(reflected(law), log_one_minus_u);
}

LogProb normal_baseline(double rho, double log_u) {
  if (!(std::abs(rho) < 1.0)) {
    throw domain_error("normal_baseline: require |rho| < 1");
  }
  if (!(log_u < 0.0)) {
    throw range_error("normal_baseline: require u < 1");
  }
  return LogProb{(1.0 - rho) / (1.0 + rho) * log_u + std::log(2.0) +
                 0.5 * std::log((1.0 + rho) / (1.0 - rho)) -
                 rho / (1.0 + rho) * std::log(-4.0 * kPi * log_u)};
}

LogProb conditional_tail_derivative_log(const BivSkewNormalLaw& law,
                                        double x) {
  if (!std::isfinite(x)) {
    throw domain_error("conditional_tail_derivative: non-finite x");
  }
  const double tr = std::sqrt((1.0 - law.rho) / (1.0 + law.rho));
  if (law.theta == 0.0) {
    // The Phi ratio in the integrand is identically 1.
    return LogProb{std::log(2.0) + log_std_normal_cdf(tr * x).value};
  }
  const double ub = tr * x;
  const double c1 = law.theta * std::sqrt((1.0 - law.rho) * (1.0 + law.rho));
  const double c2 = law.theta * (1.0 + law.rho) * x;
  const auto log_f = [&](double s) {
    const double z = ub - s;
    return log_std_normal_pdf(z) + log_std_normal_cdf(c1 * z + c2).value;
  };
  const double cut = log_tail_cutoff(log_f, "conditional_tail_derivative");
  const double log_i = tanh_sinh_log(log_f, 0.0, cut, law.quad);
  return LogProb{std::log(2.0) + log_i -
                 log_std_normal_cdf(law.lambda * x).value};
}

double conditional_tail_derivative(const BivSkewNormalLaw& law, double x) {
  return std::exp(conditional_tail_derivative_log(law, x).value);
}

DeHaanCheck de_haan_check(const BivSkewNormalLaw& law, double log_u) {
  if (!(law.theta < 0.0)) {
    throw shape_error("de_haan_check: theta < 0 branch only");
  }
  require_tail_u(log_u, "de_haan_check");
  const SkewNormalLaw marginal{law.lambda, law.quad};
  const double x_u = sn_quantile(marginal, log_u);
  const double tau = (1.0 - law.rho) / (1.0 + law.rho);
  DeHaanCheck chk;
  chk.lhs = LogProb{joint_diag_log_cdf(law, x_u).value - log_u};
  chk.rhs = LogProb{conditional_tail_derivative_log(law, x_u).value -
                    std::log1p(tau)};
  chk.gap = chk.lhs.value - chk.rhs.value;
  return chk;
}

MCEstimate estimate_lambda_l_mc(const BivSkewNormalLaw& law, double u,
                                std::size_t n, std::uint64_t seed) {
  if (!(u >= 1e-4) || !(u < 1.0)) {
    throw domain_error("estimate_lambda_l_mc: require 1e-4 <= u < 1");
  }
  if (n < 10000) {
    throw domain_error("estimate_lambda_l_mc: require n >= 10^4");
  }
  const SkewNormalLaw marginal{law.lambda, law.quad};
  const double x_u = sn_quantile(marginal, std::log(u));
  const SampleBatch batch = sample(law, n, seed);
  std::size_t joint = 0;
  std::size_t cond = 0;
  for (const auto& row : batch.rows) {
    if (row[1] <= x_u) {
      ++cond;
      joint += row[0] <= x_u ? 1 : 0;
    }
  }
  if (cond == 0) {
    throw insufficient_samples_error(
        "estimate_lambda_l_mc: no samples below the conditioning quantile");
  }
  MCEstimate est;
  est.joint_count = joint;
  est.cond_count = cond;
  est.estimate = static_cast<double>(joint) / static_cast<double>(cond);
  est.standard_error = std::sqrt(est.estimate * (1.0 - est.estimate) /
                                 static_cast<double>(cond));
  return est;
}

TailOrderFit fit_tail_order(const BivSkewNormalLaw& law,
                            std::span<const double> log_u_grid) {
  if (log_u_grid.size() < 4) {
    throw domain_error("fit_tail_order: need at least 4 grid points");
  }
  for (std::size_t i = 1; i < log_u_grid.size(); ++i) {
    if (!(log_u_grid[i] < log_u_grid[i - 1])) {
      throw domain_error(
          "fit_tail_order: grid must be strictly decreasing in u");
    }
  }
  if (!(log_u_grid.front() - log_u_grid.back() >=
        4.0 * std::log(10.0) - 1e-9)) {
    throw domain_error("fit_tail_order: grid must span at least 4 decades");
  }

  TailOrderFit fit;
  fit.grid.reserve(log_u_grid.size());
  const auto m = static_cast<Eigen::Index>(log_u_grid.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const TailPoint pt = lambda_l_exact(law, log_u_grid[i]);
    design(i, 0) = 1.0;
    design(i, 1) = pt.log_u;
    design(i, 2) = std::log(-pt.log_u);
    y(i) = pt.log_joint.value;
    fit.grid.push_back(pt);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
  fit.kappa_hat = coef(1);
  const double dof = static_cast<double>(m) - 3.0;
  if (dof > 0.0) {
    const Eigen::VectorXd resid = y - design * coef;
    const Eigen::Matrix3d xtx_inv =
        (design.transpose() * design).inverse();
    fit.slope_se = std::sqrt(
        std::max(0.0, resid.squaredNorm() / dof * xtx_inv(1, 1)));
  }
  return fit;
}

double tail_order_target(const BivSkewNormalLaw& law) {
  if (law.theta > 0.0) return 1.0 + law.beta * law.beta;
  return 2.0 / (1.0 + law.rho);
}

}  // namespace sntail
