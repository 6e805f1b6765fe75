#include "sntail/sn_bivariate.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

#include "sntail/counter_rng.hpp"
#include "sntail/errors.hpp"
#include "sntail/specfun.hpp"

namespace sntail {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw domain_error(std::string(what) + ": non-finite input");
  }
}

// Method A: P(X1 <= x, X2 <= x) = E_V[ F_SN(beta)((x - alpha V) / s) ] with
// s = alpha / lambda > 0 for either sign of theta (alpha and lambda share
// the sign of theta).
LogProb joint_mixture(const BivSkewNormalLaw& law, double x) {
  const SkewNormalLaw max_law{law.beta, law.quad};
  const double s = law.alpha / law.lambda;
  const double pre = 0.5 * std::log(2.0 / kPi);
  const auto log_f = [&](double v) {
    return pre - 0.5 * v * v +
           sn_log_cdf(max_law, (x - law.alpha * v) / s).value;
  };
  const double cut = log_tail_cutoff(log_f, "joint_diag_log_cdf(mixture)");
  return log_prob(tanh_sinh_log(log_f, 0.0, cut, law.quad));
}

// Method B: 2-D log-domain quadrature of the density over (-inf, x]^2,
// substituting (x1, x2) = (x - s, x - t). The cut is taken from scans of
// the diagonal and one edge; by exchangeability the other edge matches.
LogProb joint_grid(const BivSkewNormalLaw& law, double x) {
  const auto log_f = [&](double s, double t) {
    return biv_log_pdf(law, x - s, x - t);
  };
  const char* what = "joint_diag_log_cdf(grid)";
  const double cut_diag =
      log_tail_cutoff([&](double s) { return log_f(s, s); }, what);
  const double cut_edge =
      log_tail_cutoff([&](double s) { return log_f(s, 0.0); }, what);
  const double cut = std::max(cut_diag, cut_edge);
  return log_prob(tanh_sinh_log_2d(log_f, 0.0, cut, 0.0, cut, law.quad));
}

}  // namespace

BivSkewNormalLaw derive_params(double theta, double rho,
                               const QuadSpec& quad) {
  quad.validate();
  if (!std::isfinite(theta)) {
    throw domain_error("derive_params: theta must be finite");
  }
  if (!(std::abs(rho) < 1.0)) {
    throw domain_error("derive_params: require |rho| < 1");
  }

  BivSkewNormalLaw law;
  law.theta = theta;
  law.rho = rho;
  law.quad = quad;
  law.lambda = marginal_lambda(theta, rho);
  const double q = 1.0 + 2.0 * theta * theta * (1.0 + rho);
  law.alpha = theta * (1.0 + rho) / std::sqrt(q);
  law.beta = std::sqrt((1.0 - rho) * q / (1.0 + rho));
  const double d = theta * theta * (1.0 - rho * rho);
  law.psi(0, 0) = law.psi(1, 1) = (1.0 + d) / q;
  law.psi(0, 1) = law.psi(1, 0) = (rho - d) / q;

  // Derived-identity guards; violations would mean a coding error, not bad
  // input, but they are cheap and fail loudly.
  if (theta != 0.0) {
    const double l2 = law.lambda * law.lambda;
    if (std::abs(law.alpha * law.alpha * (1.0 + l2) - l2) > 1e-14 * l2 ||
        !(law.alpha / law.lambda > 0.0)) {
      throw domain_error("derive_params: mixture identity violated");
    }
  }
  if (!(law.beta > 0.0) || !(law.psi(0, 0) > 0.0) ||
      !(law.psi.determinant() > 0.0)) {
    throw domain_error("derive_params: psi must be positive definite");
  }
  return law;
}

double biv_log_pdf(const BivSkewNormalLaw& law, double x1, double x2) {
  require_finite(x1, "biv_log_pdf");
  require_finite(x2, "biv_log_pdf");
  const double r = law.rho;
  const double om = (1.0 - r) * (1.0 + r);
  // Symmetric under x1 <-> x2 down to the last bit: every subexpression is
  // either a product (commutative) or unaffected by the swap.
  const double qf = x1 * x1 + x2 * x2 - 2.0 * r * (x1 * x2);
  return std::log(2.0) - kLn2Pi - 0.5 * std::log(om) - qf / (2.0 * om) +
         log_std_normal_cdf(law.theta * (x1 + x2)).value;
}

double biv_pdf(const BivSkewNormalLaw& law, double x1, double x2) {
  return std::exp(biv_log_pdf(law, x1, x2));
}

LogProb joint_diag_log_cdf(const BivSkewNormalLaw& law, double x,
                           JointMethod method) {
  require_finite(x, "joint_diag_log_cdf");
  switch (method) {
    case JointMethod::mixture:
      if (law.theta == 0.0) {
        throw shape_error(
            "joint_diag_log_cdf: mixture route needs theta != 0");
      }
      return joint_mixture(law, x);
    case JointMethod::grid:
      return joint_grid(law, x);
    case JointMethod::auto_dispatch:
      break;
  }
  if (law.theta == 0.0) return normal_orthant_log(law.rho, x, law.quad);
  try {
    return joint_mixture(law, x);
  } catch (const convergence_error& mixture_err) {
    try {
      return joint_grid(law, x);
    } catch (const convergence_error& grid_err) {
      throw convergence_error(std::string("joint_diag_log_cdf: mixture: ") +
                              mixture_err.what() +
                              "; grid: " + grid_err.what());
    }
  }
}

LogProb joint_diag_tail_asymptotic(const BivSkewNormalLaw& law, double x) {
  require_finite(x, "joint_diag_tail_asymptotic");
  if (!(law.theta > 0.0)) {
    throw shape_error(
        "joint_diag_tail_asymptotic: positive-skew branch requires "
        "theta > 0");
  }
  if (!(x < 0.0)) {
    throw domain_error("joint_diag_tail_asymptotic: requires x < 0");
  }
  const double a = law.alpha;
  const double l = law.lambda;
  const double b2 = law.beta * law.beta;
  const double log_kc = 3.0 * std::log(a) - std::log(kPi) -
                        4.0 * std::log(l) - std::log(law.beta) -
                        2.0 * std::log1p(b2) + 0.5 * std::log(2.0 / kPi);
  const double rate = 0.5 * (l * l / (a * a)) * (1.0 + b2);
  return LogProb{log_kc - 3.0 * std::log(-x) - rate * x * x};
}

LogProb normal_orthant_log(double rho, double x, const QuadSpec& spec) {
  spec.validate();
  if (!(std::abs(rho) < 1.0)) {
    throw domain_error("normal_orthant_log: require |rho| < 1");
  }
  require_finite(x, "normal_orthant_log");
  const double sr = std::sqrt((1.0 - rho) * (1.0 + rho));
  const auto log_f = [&](double s) {
    const double t = x - s;
    return log_std_normal_pdf(t) +
           log_std_normal_cdf((x - rho * t) / sr).value;
  };
  const double cut = log_tail_cutoff(log_f, "normal_orthant_log");
  return log_prob(tanh_sinh_log(log_f, 0.0, cut, spec));
}

SampleBatch sample(const BivSkewNormalLaw& law, std::size_t n,
                   std::uint64_t seed) {
  if (n < 1) {
    throw domain_error("sample: require n >= 1");
  }
  Eigen::LLT<Eigen::Matrix2d> llt(law.psi);
  if (llt.info() != Eigen::Success) {
    throw domain_error("sample: psi is not positive definite");
  }
  const Eigen::Matrix2d chol = llt.matrixL();

  SampleBatch batch;
  batch.n = n;
  batch.seed = seed;
  batch.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t base = 4 * static_cast<std::uint64_t>(i);
    const double v = std::abs(std_normal_quantile(counter_uniform(seed, base)));
    const double g1 = std_normal_quantile(counter_uniform(seed, base + 1));
    const double g2 = std_normal_quantile(counter_uniform(seed, base + 2));
    const double z1 = chol(0, 0) * g1;
    const double z2 = chol(1, 0) * g1 + chol(1, 1) * g2;
    batch.rows[i] = {law.alpha * v + z1, law.alpha * v + z2};
  }
  return batch;
}

}  // namespace sntail
