#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "sntail/specfun.hpp"

using namespace sntail;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInfVal = std::numeric_limits<double>::infinity();

// Reference values below were frozen from independent high-precision
// evaluations (arbitrary-precision erfc/Lambert-W, and for Owen's T the
// defining integral at 40 digits).
constexpr double kPhiM1 = 0.15865525393145705141;
constexpr double kLogPhiM3 = -6.6077262215103495430;
constexpr double kLogPhiM8 = -35.013437159914549896;
constexpr double kLogPhiM10 = -53.231285150512470580;

// Coefficient families used by the tail inversions: (a, b, c, d) with
// u = a|g|^b exp(-c|g|^d). Family A is the right-tail normal-like form,
// family B the squared-tail form; both have d = 2.
const TailFormCoefficients kFamA{0.79788456080286535588, -1.0, 0.5, 2.0};
const TailFormCoefficients kFamB{0.15915494309189533577, -2.0, 1.0, 2.0};

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("constants") {
  CHECK(std::abs(kPi - std::acos(-1.0)) <= 1e-16);
  CHECK(std::abs(kLn2Pi - std::log(2.0 * std::acos(-1.0))) <= 1e-15);
  CHECK(std::abs(kSqrt2 - std::sqrt(2.0)) <= 1e-16);
}

TEST_CASE("LogProb guard") {
  CHECK(log_prob(-1.0).value == -1.0);
  CHECK(log_prob(0.0).value == 0.0);
  // Tiny positive log-probabilities are rounding residue; clamp to 0.
  CHECK(log_prob(5e-10).value == 0.0);
  CHECK_THROWS_AS(log_prob(1e-8), domain_error);
  CHECK_THROWS_AS(log_prob(kNaN), domain_error);
  CHECK(std::abs(log_prob(std::log(0.25)).prob() - 0.25) <= 1e-16);
  CHECK(LogProb{}.value == -kInfVal);
}

TEST_CASE("std_normal_cdf values and reflection") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(std_normal_cdf(-1.0) - kPhiM1) <= 1e-16);

  for (double z = -8.0; z <= 8.0; z += 0.25) {
    CHECK(std::abs(std_normal_cdf(z) + std_normal_cdf(-z) - 1.0) <= 1e-15);
  }
  // Monotone on a coarse grid.
  double prev = 0.0;
  for (double z = -10.0; z <= 10.0; z += 0.5) {
    const double p = std_normal_cdf(z);
    CHECK(p >= prev);
    prev = p;
  }
  // Leading-order tail behaviour: Phi(-10) against phi(10)/10.
  const double ratio =
      std_normal_cdf(-10.0) / (std_normal_pdf(10.0) / 10.0);
  CHECK(ratio >= 0.98);
  CHECK(ratio <= 1.0);

  CHECK_THROWS_AS(std_normal_cdf(kNaN), domain_error);
  CHECK_THROWS_AS(std_normal_cdf(kInfVal), domain_error);
}

TEST_CASE("log_std_normal_cdf deep tail") {
  CHECK(std::abs(log_std_normal_cdf(0.0).value - std::log(0.5)) <= 1e-16);

  // Consistency with the linear cdf at moderate depth.
  const double lin = std_normal_cdf(-3.0);
  CHECK(std::abs(std::exp(log_std_normal_cdf(-3.0).value) / lin - 1.0) <=
        1e-13);
  CHECK(std::abs(log_std_normal_cdf(-3.0).value - kLogPhiM3) <= 1e-13);

  // Mills-ratio oracle, written out to five terms. At z = -10 the first
  // omitted term is ~9.5e-9 relative, so the log agrees to ~1e-8.
  const double z = -10.0;
  const double zz = z * z;
  const double sum5 =
      1.0 - 1.0 / zz + 3.0 / (zz * zz) - 15.0 / (zz * zz * zz) +
      105.0 / (zz * zz * zz * zz);
  const double oracle =
      log_std_normal_pdf(z) - std::log(-z) + std::log(sum5);
  CHECK(std::abs(log_std_normal_cdf(z).value - oracle) <= 1e-7);
  CHECK(std::abs(log_std_normal_cdf(z).value - kLogPhiM10) <= 1e-11);

  // Branch switch at z = -8 is seamless: the Mills value there matches an
  // inline erfc evaluation to near machine precision.
  CHECK(std::abs(log_std_normal_cdf(-8.0).value - kLogPhiM8) <= 1e-11);
  CHECK(std::abs(log_std_normal_cdf(-8.0).value -
                 std::log(0.5 * std::erfc(8.0 / kSqrt2))) <= 1e-12);

  // Far beyond linear underflow.
  const double deep = log_std_normal_cdf(-100.0).value;
  CHECK(std::abs(deep - (log_std_normal_pdf(100.0) - std::log(100.0) -
                         1.0001e-4)) <= 2e-5);

  // Positive side: ln Phi(z) -> 0- and exp matches the linear cdf.
  CHECK(log_std_normal_cdf(5.0).value < 0.0);
  CHECK(std::abs(std::exp(log_std_normal_cdf(1.5).value) -
                 std_normal_cdf(1.5)) <= 1e-15);

  CHECK_THROWS_AS(log_std_normal_cdf(kNaN), domain_error);
}

TEST_CASE("owen_t oracle values") {
  struct Ref { double h, a, t; };
  const std::vector<Ref> refs = {
      {0.5, 0.3, 0.040786707344250106025},
      {1.0, 0.5, 0.043064691120785365632},
      {3.0, 2.0, 6.7494901553521614893e-4},
      {0.125, 1000.0, 0.22513088758494355351},
      {6.0, 0.57735026918962576451, 4.9309914311550107957e-10},
      {0.0625, 0.025, 0.0039702813042969223295},
  };
  for (const auto& r : refs) {
    CHECK(std::abs(owen_t(r.h, r.a) - r.t) <= 1e-14);
  }
  CHECK(std::abs(owen_t(0.0, 2.0) - 0.17620819117478336291) <= 1e-15);
}

TEST_CASE("owen_t identities") {
  // h = 0 and a = 0 closed forms.
  CHECK(owen_t(1.7, 0.0) == 0.0);
  CHECK(std::abs(owen_t(0.0, 1.0) - 0.125) <= 1e-16);

  // T(h, 1) = Phi(h)(1 - Phi(h))/2. The implementation integrates at
  // a = 1 rather than special-casing it, so this is an independent check.
  for (double h : {0.0, 0.5, -1.0, 2.0, -2.0, 3.5, 5.0}) {
    const double p = std_normal_cdf(h);
    CHECK(std::abs(owen_t(h, 1.0) - 0.5 * p * (1.0 - p)) <= 1e-14);
  }
  CHECK(std::abs(owen_t(-2.0, 1.0) - 0.011116281722259821475) <= 1e-15);

  // Even in h, odd in a, over a 10x10 grid.
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double h = -2.5 + 0.6 * i;
      const double a = -4.0 + 0.9 * j;
      const double t = owen_t(h, a);
      CHECK(std::abs(owen_t(-h, a) - t) <= 1e-15);
      CHECK(std::abs(owen_t(h, -a) + t) <= 1e-15);
    }
  }

  CHECK_THROWS_AS(owen_t(kNaN, 0.5), domain_error);
  CHECK_THROWS_AS(owen_t(0.5, kInfVal), domain_error);
}

TEST_CASE("lambert_w0 fixed points and roundtrip") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(std::abs(lambert_w0(std::exp(1.0)) - 1.0) <= 1e-15);
  // Omega constant W(1).
  CHECK(std::abs(lambert_w0(1.0) - 0.56714329040978387300) <= 1e-15);

  // Roundtrip w e^w = z on a log-spaced grid spanning both branches.
  for (double lz = std::log(1e-3); lz <= std::log(1e12) + 1e-9;
       lz += std::log(1e15) / 60.0) {
    const double z = std::exp(lz);
    const double w = lambert_w0(z);
    CHECK(w >= 0.0);
    CHECK(std::abs(w * std::exp(w) - z) <= 1e-14 * std::max(1.0, z));
  }

  CHECK_THROWS_AS(lambert_w0(-0.25), domain_error);
  CHECK_THROWS_AS(lambert_w0(kNaN), domain_error);
  CHECK_THROWS_AS(lambert_w0(kInfVal), domain_error);
}

TEST_CASE("lambert_w0 large argument vs bisection oracle") {
  const double z = 1e8;
  const double w = lambert_w0(z);
  CHECK(std::abs(w - 15.668996715450962187) <= 1e-13);

  // Independent bisection on the increasing map w -> w + ln w.
  const double target = std::log(z);
  double lo = 1.0, hi = 30.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid + std::log(mid) < target) lo = mid; else hi = mid;
  }
  CHECK(std::abs(w - 0.5 * (lo + hi)) <= 1e-12);

  // Two-term seed bracket: ln z - ln ln z within 0.2 of the root.
  CHECK(std::abs(w - (std::log(z) - std::log(std::log(z)))) <= 0.2);
}

TEST_CASE("lambert_w0_log_arg") {
  // Same route as the linear entry point once z >= e.
  CHECK(lambert_w0_log_arg(std::log(1e8)) == lambert_w0(1e8));

  // Below ln z = 1 it falls through to the linear branch.
  const double w_small = lambert_w0_log_arg(0.5);
  CHECK(std::abs(w_small * std::exp(w_small) - std::exp(0.5)) <= 1e-14);

  // Arguments far beyond linear overflow: check w + ln w = ln z.
  for (double ln_z : {2.0, 10.0, 700.0, 1e6, 1e12}) {
    const double w = lambert_w0_log_arg(ln_z);
    CHECK(std::abs(w + std::log(w) - ln_z) <= 1e-14 * std::max(1.0, ln_z));
  }

  CHECK_THROWS_AS(lambert_w0_log_arg(kNaN), domain_error);
  CHECK_THROWS_AS(lambert_w0_log_arg(kInfVal), domain_error);
}

TEST_CASE("tail form coefficient validation") {
  CHECK_NOTHROW(kFamA.validate());
  CHECK_NOTHROW(kFamB.validate());
  CHECK_THROWS_AS((TailFormCoefficients{-1.0, -1.0, 0.5, 2.0}.validate()),
                  domain_error);
  CHECK_THROWS_AS((TailFormCoefficients{1.0, 1.0, 0.5, 2.0}.validate()),
                  domain_error);
  CHECK_THROWS_AS((TailFormCoefficients{1.0, -1.0, 0.0, 2.0}.validate()),
                  domain_error);
  CHECK_THROWS_AS((TailFormCoefficients{1.0, -1.0, 0.5, 0.0}.validate()),
                  domain_error);
  CHECK_THROWS_AS((TailFormCoefficients{kNaN, -1.0, 0.5, 2.0}.validate()),
                  domain_error);
}

TEST_CASE("tail form W argument") {
  const double lu = std::log(1e-10);
  CHECK(std::abs(tail_form_log_w_arg(kFamA, lu) - 45.600119154591458816) <=
        1e-13);
  CHECK(std::abs(tail_form_log_w_arg(kFamB, lu) - 21.187973863531111357) <=
        1e-13);
  CHECK_THROWS_AS(tail_form_log_w_arg(kFamA, 0.0), domain_error);
  CHECK_THROWS_AS(tail_form_log_w_arg(kFamA, 0.5), domain_error);
  CHECK_THROWS_AS(tail_form_log_w_arg(kFamA, kNaN), domain_error);
}

TEST_CASE("solve_tail_form frozen roots") {
  // Family A at u = 1e-10: W argument 6.3661977e19, W = 41.8656...
  CHECK(std::abs(lambert_w0_log_arg(45.600119154591458816) -
                 41.865653391940164890) <= 1e-12);
  CHECK(std::abs(solve_tail_form(kFamA, 1e-10) -
                 (-6.4703673305261552894)) <= 1e-13);
  CHECK(std::abs(solve_tail_form_expanded(kFamA, 1e-10) -
                 (-6.4637611980204873611)) <= 1e-13);

  // Family B at u = 1e-10.
  CHECK(std::abs(lambert_w0_log_arg(21.187973863531111357) -
                 18.282053943660551667) <= 1e-13);
  CHECK(std::abs(solve_tail_form(kFamB, 1e-10) -
                 (-4.2757518571194647458)) <= 1e-13);
  CHECK(std::abs(solve_tail_form_expanded(kFamB, 1e-10) -
                 (-4.2584668735825729)) <= 1e-12);
}

TEST_CASE("solve_tail_form forward residual and monotonicity") {
  for (const auto& cf : {kFamA, kFamB}) {
    double prev_g = 0.0;
    for (int k = 2; k <= 7; ++k) {
      const double log_u = -2.0 * k * std::log(10.0);
      const double g = solve_tail_form_log(cf, log_u);
      CHECK(g < 0.0);
      // The W route inverts u = a|g|^b exp(-c|g|^d) exactly.
      const double fwd = std::log(cf.a) + cf.b * std::log(-g) -
                         cf.c * std::pow(-g, cf.d);
      CHECK(std::abs(fwd - log_u) <= 1e-12 * std::abs(log_u));
      // |g(u)| strictly increasing as u decreases.
      CHECK(-g > prev_g);
      prev_g = -g;
    }
  }
}

TEST_CASE("solve_tail_form expanded route") {
  for (const auto& cf : {kFamA, kFamB}) {
    double prev_res = kInfVal;
    for (int k = 2; k <= 7; ++k) {
      const double log_u = -2.0 * k * std::log(10.0);
      const double y = tail_form_log_w_arg(cf, log_u);
      const double g_full = solve_tail_form_log(cf, log_u);
      const double g_exp = solve_tail_form_expanded_log(cf, log_u);

      // Expanded root satisfies (cd/|b|)|g|^d = y - ln y exactly, and the
      // dropped W correction makes it smaller in magnitude than the full
      // root.
      const double lhs = (cf.c * cf.d / -cf.b) * std::pow(-g_exp, cf.d);
      CHECK(std::abs(lhs - (y - std::log(y))) <= 1e-14 * y);
      CHECK(-g_exp < -g_full);

      // Forward relative residual of the expansion shrinks monotonically
      // as u decreases.
      const double fwd = std::log(cf.a) + cf.b * std::log(-g_exp) -
                         cf.c * std::pow(-g_exp, cf.d);
      const double res = std::abs(std::expm1(fwd - log_u));
      CHECK(res < prev_res);
      prev_res = res;
    }
  }
}

TEST_CASE("solve_tail_form domain and range errors") {
  CHECK_THROWS_AS(solve_tail_form(kFamA, 0.0), domain_error);
  CHECK_THROWS_AS(solve_tail_form(kFamA, 1.0), domain_error);
  CHECK_THROWS_AS(solve_tail_form(kFamA, 1.5), domain_error);
  CHECK_THROWS_AS(solve_tail_form(kFamA, kNaN), domain_error);
  CHECK_THROWS_AS(solve_tail_form_expanded(kFamB, 0.0), domain_error);
  // u too large: Lambert-W argument drops below e.
  CHECK_THROWS_AS(solve_tail_form(kFamA, 0.6), range_error);
  CHECK_THROWS_AS(solve_tail_form(kFamB, 0.9), range_error);
  CHECK_THROWS_AS(solve_tail_form_expanded(kFamB, 0.9), range_error);
}

TEST_CASE("std_normal_quantile frozen values") {
  CHECK(std_normal_quantile(0.5) == 0.0);
  CHECK(std::abs(std_normal_quantile(0.025) - (-1.9599639845400542355)) <=
        1e-14);
  CHECK(std::abs(std_normal_quantile(1e-4) - (-3.7190164854556805644)) <=
        1e-14);
  CHECK(std::abs(std_normal_quantile(1e-10) - (-6.3613409024040559135)) <=
        1e-13);
  CHECK(std::abs(std_normal_quantile(0.3) + std_normal_quantile(0.7)) <=
        1e-14);

  CHECK_THROWS_AS(std_normal_quantile(0.0), domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), domain_error);
  CHECK_THROWS_AS(std_normal_quantile(-0.1), domain_error);
  CHECK_THROWS_AS(std_normal_quantile(kNaN), domain_error);
}

TEST_CASE("std_normal_quantile roundtrip") {
  // 30 log-spaced u in [1e-12, 0.4]; both linear and log roundtrips.
  const double l0 = std::log(1e-12), l1 = std::log(0.4);
  for (int i = 0; i < 30; ++i) {
    const double lu = l0 + (l1 - l0) * i / 29.0;
    const double u = std::exp(lu);
    const double z = std_normal_quantile(u);
    CHECK(std::abs(std_normal_cdf(z) / u - 1.0) <= 1e-12);
    CHECK(std::abs(log_std_normal_cdf(z).value - lu) <= 1e-12);
  }
}

TEST_CASE("std_normal_quantile_log deep tail") {
  // Agrees with the linear entry point at moderate depth.
  CHECK(std::abs(std_normal_quantile_log(std::log(1e-5)) -
                 std_normal_quantile(1e-5)) <= 1e-13);

  // Far below linear underflow: log-scale roundtrip stays tight across
  // the seed switch at log_u = -700.
  for (double lu : {-50.0, -200.0, -699.0, -701.0, -1000.0, -1e4, -1e6,
                    -1e9, -1e12}) {
    const double z = std_normal_quantile_log(lu);
    CHECK(z < 0.0);
    CHECK(std::abs(log_std_normal_cdf(z).value / lu - 1.0) <= 1e-11);
  }

  CHECK_THROWS_AS(std_normal_quantile_log(0.0), domain_error);
  CHECK_THROWS_AS(std_normal_quantile_log(0.5), domain_error);
  CHECK_THROWS_AS(std_normal_quantile_log(kNaN), domain_error);
}

TEST_CASE("std_normal_quantile_asymptotic") {
  // Verbatim formula check at u = 1e-6.
  const double u0 = 1e-6;
  const double expect =
      -std::sqrt(-2.0 * std::log(u0 * std::sqrt(-4.0 * kPi * std::log(u0))));
  CHECK(std::abs(std_normal_quantile_asymptotic(u0) - expect) <= 1e-14);
  CHECK(std_normal_quantile_asymptotic(u0) ==
        std_normal_quantile_asymptotic_log(std::log(u0)));

  // Ratio against the exact quantile, and a shrinking absolute gap.
  const double ratio =
      std_normal_quantile(1e-10) / std_normal_quantile_asymptotic(1e-10);
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);
  double prev_gap = kInfVal;
  for (double u : {1e-4, 1e-6, 1e-8, 1e-10}) {
    const double gap =
        std::abs(std_normal_quantile(u) - std_normal_quantile_asymptotic(u));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }

  CHECK_THROWS_AS(std_normal_quantile_asymptotic(0.2), domain_error);
  CHECK_THROWS_AS(std_normal_quantile_asymptotic(0.0), domain_error);
  CHECK_THROWS_AS(std_normal_quantile_asymptotic(kNaN), domain_error);
  CHECK_THROWS_AS(std_normal_quantile_asymptotic_log(-0.5), domain_error);
}

}  // TEST_SUITE
