#include "sntail/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "sntail/counter_rng.hpp"
#include "sntail/errors.hpp"
#include "sntail/sn_bivariate.hpp"
#include "sntail/sn_univariate.hpp"
#include "sntail/specfun.hpp"
#include "sntail/taildep.hpp"

namespace sntail {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// Accumulates failure fragments; a suite passes when none were recorded.
struct Flaws {
  std::vector<std::string> items;

  void add(std::string s) { items.push_back(std::move(s)); }

  SuiteResult result(const char* name, std::string pass_detail) const {
    if (items.empty()) {
      return {name, SuiteStatus::pass, std::move(pass_detail)};
    }
    std::string joined;
    for (std::size_t i = 0; i < items.size() && i < 4; ++i) {
      if (i) joined += "; ";
      joined += items[i];
    }
    if (items.size() > 4) joined += fmt("; (+%zu more)", items.size() - 4);
    return {name, SuiteStatus::fail, std::move(joined)};
  }
};

double log10u(double e) { return e * std::log(10.0); }

const std::array<std::array<double, 2>, 6> kSixLaws = {{
    {1.0, 0.0}, {0.5, 0.5}, {2.0, -0.3},
    {-1.0, 0.0}, {-1.0, 0.5}, {-0.5, 0.25},
}};

SuiteResult normal_cdf_reflection(const QuadSpec&) {
  Flaws flaws;
  double worst = 0.0;
  int n = 0;
  for (double z = -8.0; z <= 8.0 + 1e-9; z += 0.25, ++n) {
    const double gap = std::abs(std_normal_cdf(z) + std_normal_cdf(-z) - 1.0);
    worst = std::max(worst, gap);
    if (gap > 1e-15) {
      flaws.add(fmt("z=%.2f gap %.3g > 1e-15", z, gap));
    }
  }
  return flaws.result("specfun/normal-cdf-reflection",
                      fmt("max |Phi(z)+Phi(-z)-1| = %.3g over %d points",
                          worst, n));
}

SuiteResult owen_t_symmetry(const QuadSpec&) {
  Flaws flaws;
  const double hs[] = {0.1, 0.5, 1, 1.5, 2, 3, 4, 6, 8, 12};
  const double as[] = {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 1, 2, 5, 30};
  double worst = 0.0;
  for (double h : hs) {
    for (double a : as) {
      const double t = owen_t(h, a);
      const double ge = std::abs(owen_t(-h, a) - t);
      const double go = std::abs(owen_t(h, -a) + t);
      worst = std::max({worst, ge, go});
      if (ge > 1e-16) flaws.add(fmt("T(-h,a)!=T(h,a) at h=%g a=%g", h, a));
      if (go > 1e-16) flaws.add(fmt("T(h,-a)!=-T(h,a) at h=%g a=%g", h, a));
    }
  }
  return flaws.result("specfun/owen-t-symmetry",
                      fmt("max symmetry gap %.3g over 100 (h,a) pairs",
                          worst));
}

SuiteResult lambert_w_roundtrip(const QuadSpec&) {
  Flaws flaws;
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double z = 1e-3 * std::pow(10.0, 0.25 * i);
    const double w = lambert_w0(z);
    const double res = std::abs(w * std::exp(w) - z) / std::max(1.0, z);
    worst = std::max(worst, res);
    if (res > 1e-14) flaws.add(fmt("z=%.3g residual %.3g > 1e-14", z, res));
  }
  return flaws.result("specfun/lambert-w-roundtrip",
                      fmt("max |w e^w - z|/max(1,z) = %.3g on z in "
                          "[1e-3, 1e12]", worst));
}

SuiteResult tail_form_residual(const QuadSpec&) {
  // The Lambert-W inversion is exact, so its forward residual sits at
  // machine precision for every u and is held to a flat band. The trend
  // claim (residual -> 0 monotonically as u decreases) belongs to the
  // two-term expansion, whose truncation error is what actually decays.
  Flaws flaws;
  std::string detail;
  for (double lambda : {0.7071067811865476, -1.0}) {
    const TailFormCoefficients cf = sn_tail_form_coefficients(lambda);
    const auto fwd_residual = [&](double g, double lu) {
      const double log_fwd =
          std::log(cf.a) + cf.b * std::log(-g) - cf.c * std::pow(-g, cf.d);
      return std::abs(std::expm1(log_fwd - lu));
    };
    double worst_w = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    double first = 0.0, last = 0.0;
    for (double e : {-4.0, -6.0, -8.0, -10.0, -12.0, -14.0, -16.0}) {
      const double lu = log10u(e);
      const double res_w = fwd_residual(solve_tail_form_log(cf, lu), lu);
      worst_w = std::max(worst_w, res_w);
      if (res_w > 1e-12) {
        flaws.add(fmt("lambda=%.3g u=1e%.0f: W residual %.3g > 1e-12",
                      lambda, e, res_w));
      }
      const double res_x =
          fwd_residual(solve_tail_form_expanded_log(cf, lu), lu);
      if (e == -4.0) first = res_x;
      last = res_x;
      if (res_x >= prev) {
        flaws.add(fmt("lambda=%.3g: expansion residual %.3g -> %.3g rises "
                      "at u=1e%.0f", lambda, prev, res_x, e));
      }
      prev = res_x;
    }
    detail += fmt("%slambda=%.3g: W residual <= %.2g, expansion residual "
                  "%.3g -> %.3g over u=1e-4..1e-16",
                  detail.empty() ? "" : "; ", lambda, worst_w, first, last);
  }
  return flaws.result("specfun/tail-form-residual", detail);
}

SuiteResult capitanio_sandwich(const QuadSpec& spec) {
  Flaws flaws;
  double min_margin = std::numeric_limits<double>::infinity();
  for (double lambda : {-2.0, -0.5, 0.5, 2.0}) {
    const SkewNormalLaw law{lambda, spec};
    for (double z = -3.0; z >= -12.0; z -= 1.0) {
      const double exact = sn_log_tail_cdf(law, z).value;
      const CapitanioBounds b = capitanio_bounds(law, z);
      min_margin = std::min({min_margin, exact - b.lower.value,
                             b.upper.value - exact});
      if (!(b.lower.value < exact && exact < b.upper.value)) {
        flaws.add(fmt("lambda=%g z=%g: %g not in (%g, %g)", lambda, z,
                      exact, b.lower.value, b.upper.value));
      }
    }
  }
  return flaws.result("sn-univariate/capitanio-sandwich",
                      fmt("bracket holds at 40 points, min margin %.3g "
                          "nats", min_margin));
}

SuiteResult quantile_roundtrip(const QuadSpec& spec) {
  Flaws flaws;
  double worst = 0.0;
  const double lo = std::log(1e-12), hi = std::log(0.4);
  for (double lambda : {-2.0, -1.0, 1.0, 2.0}) {
    const SkewNormalLaw law{lambda, spec};
    for (int i = 0; i < 30; ++i) {
      const double lu = lo + (hi - lo) * i / 29.0;
      const double z = sn_quantile(law, lu);
      const double gap = std::abs(sn_log_cdf(law, z).value - lu);
      worst = std::max(worst, gap);
      if (gap > 1e-9) {
        flaws.add(fmt("lambda=%g ln u=%.3f: |roundtrip| %.3g > 1e-9",
                      lambda, lu, gap));
      }
    }
  }
  return flaws.result("sn-univariate/quantile-roundtrip",
                      fmt("max |ln F(F^-1(u)) - ln u| = %.3g over 120 "
                          "points", worst));
}

SuiteResult squared_quantile_gap(const QuadSpec& spec) {
  Flaws flaws;
  std::string detail;
  for (double lambda : {-2.0, -1.0, 1.0, 2.0}) {
    const SkewNormalLaw law{lambda, spec};
    std::vector<double> gaps;
    for (double e : {-4.0, -6.0, -8.0, -10.0, -12.0}) {
      const double lu = log10u(e);
      const double qe = sn_quantile(law, lu);
      const double qa = sn_quantile_asymptotic_log(law, lu);
      gaps.push_back(std::abs(qe * qe - qa * qa));
    }
    // Monotone decrease is asserted from u = 1e-6 on (indices 1..4).
    for (std::size_t i = 2; i < gaps.size(); ++i) {
      if (!(gaps[i] < gaps[i - 1])) {
        flaws.add(fmt("lambda=%g: gap %.6g -> %.6g rises at u=1e%.0f",
                      lambda, gaps[i - 1], gaps[i],
                      -6.0 - 2.0 * static_cast<double>(i - 1)));
      }
    }
    detail += fmt("%slambda=%g: %.3g -> %.3g", detail.empty() ? "" : "; ",
                  lambda, gaps[1], gaps.back());
  }
  return flaws.result("sn-univariate/squared-quantile-gap", detail);
}

SuiteResult cdf_reflection(const QuadSpec& spec) {
  Flaws flaws;
  double worst = 0.0;
  for (double lambda : {-2.0, -0.5, 0.5, 2.0}) {
    const SkewNormalLaw law{lambda, spec};
    const SkewNormalLaw mirror{-lambda, spec};
    for (double z = -6.0; z <= 6.0 + 1e-9; z += 0.5) {
      const double gap =
          std::abs(sn_cdf(law, z) + sn_cdf(mirror, -z) - 1.0);
      worst = std::max(worst, gap);
      if (gap > 1e-13) {
        flaws.add(fmt("lambda=%g z=%g gap %.3g > 1e-13", lambda, z, gap));
      }
    }
  }
  return flaws.result("sn-univariate/cdf-reflection",
                      fmt("max |F(z;l)+F(-z;-l)-1| = %.3g over 100 points",
                          worst));
}

SuiteResult exchangeability(const QuadSpec& spec) {
  Flaws flaws;
  int n = 0;
  for (const auto& p : kSixLaws) {
    const BivSkewNormalLaw law = derive_params(p[0], p[1], spec);
    for (double a : {-3.0, -1.0, 0.0, 0.5}) {
      for (double b : {-2.0, 0.25, 1.5}) {
        ++n;
        if (biv_log_pdf(law, a, b) != biv_log_pdf(law, b, a)) {
          flaws.add(fmt("density asymmetric at theta=%g rho=%g (%g,%g)",
                        p[0], p[1], a, b));
        }
      }
    }
  }
  return flaws.result("sn-bivariate/exchangeability",
                      fmt("density swap-invariant bitwise at %d points", n));
}

SuiteResult cdf_monotonicity(const QuadSpec& spec) {
  Flaws flaws;
  int n = 0;
  for (const auto& p : {std::array<double, 2>{1.0, 0.0},
                        std::array<double, 2>{-1.0, 0.5},
                        std::array<double, 2>{2.0, -0.3}}) {
    const BivSkewNormalLaw law = derive_params(p[0], p[1], spec);
    double prev = -std::numeric_limits<double>::infinity();
    for (double x = -5.0; x <= 2.0 + 1e-9; x += 0.5) {
      ++n;
      const double v = joint_diag_log_cdf(law, x).value;
      if (!(v > prev)) {
        flaws.add(fmt("theta=%g rho=%g: ln C not increasing at x=%g",
                      p[0], p[1], x));
      }
      prev = v;
    }
  }
  return flaws.result("sn-bivariate/cdf-monotonicity",
                      fmt("ln C(F(x),F(x)) strictly increasing over %d "
                          "points, 3 laws", n));
}

SuiteResult mixture_consistency(const QuadSpec& spec) {
  Flaws flaws;
  double worst = 0.0;
  const std::array<std::array<double, 2>, 5> laws = {{
      {1.0, 0.0}, {1.0, 0.5}, {-1.0, 0.0}, {-1.0, 0.5}, {2.0, -0.3},
  }};
  for (const auto& p : laws) {
    const BivSkewNormalLaw law = derive_params(p[0], p[1], spec);
    for (double x : {-4.0, -2.0, -1.0, 0.0, 1.0}) {
      const double a = joint_diag_log_cdf(law, x, JointMethod::mixture).value;
      const double b = joint_diag_log_cdf(law, x, JointMethod::grid).value;
      const double gap = std::abs(a - b);
      worst = std::max(worst, gap);
      if (gap > 1e-8) {
        flaws.add(fmt("theta=%g rho=%g x=%g: |A-B| %.3g > 1e-8", p[0], p[1],
                      x, gap));
      }
    }
  }
  return flaws.result("sn-bivariate/mixture-consistency",
                      fmt("max |mixture - grid| = %.3g nats over 25 points",
                          worst));
}

SuiteResult max_law_ks(const QuadSpec& spec) {
  // Rowwise max of standardized Psi-correlated normal pairs should follow
  // SN(beta); KS test at level 0.01 (critical value 1.6276 for D sqrt(n)).
  const BivSkewNormalLaw law = derive_params(1.0, 0.5, spec);
  const Eigen::LLT<Eigen::Matrix2d> llt(law.psi);
  const Eigen::Matrix2d chol = llt.matrixL();
  const double sd = std::sqrt(law.psi(0, 0));
  const int n = 100000;
  std::vector<double> maxes(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t base = 4 * static_cast<std::uint64_t>(i);
    const double g1 = std_normal_quantile(counter_uniform(321, base + 1));
    const double g2 = std_normal_quantile(counter_uniform(321, base + 2));
    const double z1 = chol(0, 0) * g1;
    const double z2 = chol(1, 0) * g1 + chol(1, 1) * g2;
    maxes[i] = std::max(z1, z2) / sd;
  }
  std::sort(maxes.begin(), maxes.end());
  const SkewNormalLaw max_law{law.beta, spec};
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = sn_cdf(max_law, maxes[i]);
    d = std::max(d, std::max(std::abs(c - static_cast<double>(i) / n),
                             std::abs(static_cast<double>(i + 1) / n - c)));
  }
  const double stat = d * std::sqrt(static_cast<double>(n));
  Flaws flaws;
  if (!(stat < 1.6276)) {
    flaws.add(fmt("KS D sqrt(n) = %.4f >= 1.6276", stat));
  }
  return flaws.result("sn-bivariate/max-law-ks",
                      fmt("KS D sqrt(n) = %.4f (< 1.6276), n=%d, "
                          "theta=1 rho=0.5", stat, n));
}

SuiteResult ratio_convergence(const char* name, bool positive_theta,
                              double band_lo, double band_hi,
                              const QuadSpec& spec) {
  Flaws flaws;
  std::string detail;
  for (const auto& p : kSixLaws) {
    if ((p[0] > 0.0) != positive_theta) continue;
    const BivSkewNormalLaw law = derive_params(p[0], p[1], spec);
    double prev = std::numeric_limits<double>::infinity();
    double terminal = 0.0;
    for (double e : {-4.0, -6.0, -8.0, -10.0, -12.0}) {
      const TailPoint pt = lambda_l_exact(law, log10u(e));
      const double cur = std::abs(std::log(pt.ratio));
      if (!(cur < prev)) {
        flaws.add(fmt("(%g,%g): |ln ratio| %.5f -> %.5f rises at u=1e%.0f",
                      p[0], p[1], prev, cur, e));
      }
      prev = cur;
      terminal = pt.ratio;
    }
    if (!(band_lo <= terminal && terminal <= band_hi)) {
      flaws.add(fmt("(%g,%g): terminal ratio %.4f outside [%g, %g]",
                    p[0], p[1], terminal, band_lo, band_hi));
    }
    detail += fmt("%s(%g,%g): ratio(1e-12) = %.4f",
                  detail.empty() ? "" : "; ", p[0], p[1], terminal);
  }
  return flaws.result(name, detail);
}

SuiteResult factor_identity(const QuadSpec& spec) {
  Flaws flaws;
  double worst = 0.0;
  int n = 0;
  for (double theta : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
    for (double rho : {-0.6, -0.3, 0.0, 0.3, 0.6}) {
      ++n;
      const BivSkewNormalLaw law = derive_params(theta, rho, spec);
      const double want = (1.0 - rho) / (1.0 + rho) *
                          (1.0 + 2.0 * theta * theta * (1.0 + rho));
      const double gap = std::abs(law.beta * law.beta - want) /
                         std::max(1.0, want);
      worst = std::max(worst, gap);
      if (gap > 1e-14) {
        flaws.add(fmt("theta=%g rho=%g: |beta^2 - factor| %.3g > 1e-14",
                      theta, rho, gap));
      }
    }
  }
  return flaws.result("taildep/factor-identity",
                      fmt("max relative gap %.3g over %d (theta,rho)",
                          worst, n));
}

SuiteResult reflection_identity(const QuadSpec& spec) {
  Flaws flaws;
  const double lu = std::log(1e-3);
  int n = 0;
  for (double theta : {0.5, 1.0, 2.0}) {
    for (double rho : {-0.3, 0.0, 0.5}) {
      ++n;
      const BivSkewNormalLaw law = derive_params(theta, rho, spec);
      const BivSkewNormalLaw mirror = derive_params(-theta, rho, spec);
      const TailPoint up = lambda_u_exact(law, lu);
      const TailPoint lo = lambda_l_exact(mirror, lu);
      const bool same = up.x_u == lo.x_u &&
                        up.log_joint.value == lo.log_joint.value &&
                        up.log_lambda_exact.value ==
                            lo.log_lambda_exact.value &&
                        up.log_lambda_asym.value ==
                            lo.log_lambda_asym.value &&
                        up.ratio == lo.ratio &&
                        lambda_u_asymptotic(law, lu).value ==
                            lambda_l_asymptotic(mirror, lu).value;
      if (!same) {
        flaws.add(fmt("theta=%g rho=%g: reflected fields differ", theta,
                      rho));
      }
    }
  }
  return flaws.result("taildep/reflection-identity",
                      fmt("lambda_U(theta) == lambda_L(-theta) bitwise for "
                          "%d laws at u=1e-3", n));
}

SuiteResult copula_derivative_consistency(const QuadSpec& spec) {
  Flaws flaws;
  double worst = 0.0;
  for (const auto& p : kSixLaws) {
    const BivSkewNormalLaw law = derive_params(p[0], p[1], spec);
    const SkewNormalLaw marginal{law.lambda, law.quad};
    for (double x : {-4.0, -3.0, -2.0, -1.0}) {
      const double u = std::exp(sn_log_cdf(marginal, x).value);
      const double h = 1e-4 * u;
      const double xp = sn_quantile(marginal, std::log(u + h));
      const double xm = sn_quantile(marginal, std::log(u - h));
      const double fd = (std::exp(joint_diag_log_cdf(law, xp).value) -
                         std::exp(joint_diag_log_cdf(law, xm).value)) /
                        (2.0 * h);
      const double rel =
          std::abs(conditional_tail_derivative(law, x) / fd - 1.0);
      worst = std::max(worst, rel);
      if (rel > 0.01) {
        flaws.add(fmt("theta=%g rho=%g x=%g: |ctd/fd - 1| %.3g > 1%%",
                      p[0], p[1], x, rel));
      }
    }
  }
  return flaws.result("taildep/copula-derivative-consistency",
                      fmt("max |ctd/fd - 1| = %.3g over 24 points, 6 laws",
                          worst));
}

SuiteResult rho_monotonicity(const QuadSpec& spec) {
  Flaws flaws;
  const double lu = std::log(1e-3);
  double prev = -std::numeric_limits<double>::infinity();
  std::string seq;
  for (double rho : {-0.3, 0.0, 0.3, 0.6}) {
    const TailPoint pt = lambda_l_exact(derive_params(-1.0, rho, spec), lu);
    const double v = pt.log_lambda_exact.value;
    if (!(v > prev)) {
      flaws.add(fmt("rho=%g: ln lambda_L %.4f -> %.4f not increasing", rho,
                    prev, v));
    }
    seq += fmt("%s%.3f", seq.empty() ? "" : " < ", v);
    prev = v;
  }
  return flaws.result("taildep/rho-monotonicity",
                      "ln lambda_L at theta=-1, u=1e-3: " + seq);
}

}  // namespace

const char* to_string(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::pass: return "pass";
    case SuiteStatus::fail: return "fail";
    case SuiteStatus::skipped: return "skipped";
  }
  return "unknown";
}

std::vector<SuiteResult> run_verify_suites(const std::string& filter,
                                           const QuadSpec& spec) {
  spec.validate();
  using Suite = std::function<SuiteResult(const QuadSpec&)>;
  const std::pair<const char*, Suite> suites[] = {
      {"specfun/normal-cdf-reflection", normal_cdf_reflection},
      {"specfun/owen-t-symmetry", owen_t_symmetry},
      {"specfun/lambert-w-roundtrip", lambert_w_roundtrip},
      {"specfun/tail-form-residual", tail_form_residual},
      {"sn-univariate/capitanio-sandwich", capitanio_sandwich},
      {"sn-univariate/quantile-roundtrip", quantile_roundtrip},
      {"sn-univariate/squared-quantile-gap", squared_quantile_gap},
      {"sn-univariate/cdf-reflection", cdf_reflection},
      {"sn-bivariate/exchangeability", exchangeability},
      {"sn-bivariate/cdf-monotonicity", cdf_monotonicity},
      {"sn-bivariate/mixture-consistency", mixture_consistency},
      {"sn-bivariate/frechet-bound",
       [](const QuadSpec& q) {
         Flaws flaws;
         int n = 0;
         for (const auto& p : kSixLaws) {
           const BivSkewNormalLaw law = derive_params(p[0], p[1], q);
           const SkewNormalLaw marginal{law.lambda, law.quad};
           for (double x = -4.0; x <= 2.0 + 1e-9; x += 1.0) {
             ++n;
             const double joint = joint_diag_log_cdf(law, x).value;
             const double marg = sn_log_cdf(marginal, x).value;
             if (!(joint <= marg + 1e-12)) {
               flaws.add(fmt("theta=%g rho=%g x=%g: ln C %.6f > ln F %.6f",
                             p[0], p[1], x, joint, marg));
             }
           }
         }
         return flaws.result("sn-bivariate/frechet-bound",
                             fmt("C(u,u) <= u holds at %d points, 6 laws",
                                 n));
       }},
      {"sn-bivariate/max-law-ks", max_law_ks},
      {"taildep/ratio-convergence-a",
       [](const QuadSpec& q) {
         return ratio_convergence("taildep/ratio-convergence-a", true, 0.7,
                                  1.3, q);
       }},
      {"taildep/ratio-convergence-b",
       [](const QuadSpec& q) {
         return ratio_convergence("taildep/ratio-convergence-b", false, 0.8,
                                  1.25, q);
       }},
      {"taildep/factor-identity", factor_identity},
      {"taildep/reflection-identity", reflection_identity},
      {"taildep/copula-derivative-consistency",
       copula_derivative_consistency},
      {"taildep/rho-monotonicity", rho_monotonicity},
  };

  std::vector<SuiteResult> out;
  out.reserve(std::size(suites));
  for (const auto& [name, fn] : suites) {
    if (!filter.empty() &&
        std::string_view(name).find(filter) == std::string_view::npos) {
      out.push_back({name, SuiteStatus::skipped,
                     "filtered out by '" + filter + "'"});
      continue;
    }
    try {
      out.push_back(fn(spec));
    } catch (const std::exception& e) {
      out.push_back({name, SuiteStatus::fail,
                     std::string("exception: ") + e.what()});
    }
  }
  return out;
}

}  // namespace sntail
