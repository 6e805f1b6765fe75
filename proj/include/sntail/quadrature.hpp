#pragma once

#include <functional>
#include <span>
#include <utility>

#include "sntail/errors.hpp"

namespace sntail {

// Numeric policy shared by quadrature and quantile root finding.
struct QuadSpec {
  double rel_tol = 1e-12;       // linear-scale relative tolerance
  double abs_log_tol = 1e-10;   // absolute tolerance on log-scale values
  int max_nodes = 4096;         // per-integral node budget
  double bracket_margin = 1.5;  // multiplicative margin around quantile seeds

  void validate() const;
};

// ln(sum exp(v_i)); -inf for an empty or all-zero sum.
double logsumexp(std::span<const double> v);

// ln(e^a + e^b).
double log_add(double a, double b);

// ln(e^a - e^b); requires a > b.
double log_sub(double a, double b);

// Signed log-scale sum of terms (sign_i, ln|term_i|).
// Returns {sign, ln|sum|} with sign in {-1, 0, +1}.
std::pair<int, double> signed_log_sum(
    std::span<const std::pair<int, double>> terms);

// Truncation point for a decaying log-integrand on s >= 0: the first s at
// which log_f has dropped 60 nats below its running maximum, scanned with
// steps doubling from 2^-22 up to 0.25 (tiny first steps keep sharply
// peaked integrands from being stepped over). Residual mass beyond the cut
// is below exp(-60) of the peak. Throws convergence_error, tagged with
// what, if no drop is found by s = 1000.
double log_tail_cutoff(const std::function<double(double)>& log_f,
                       const char* what);

// Tanh-sinh quadrature of f over the finite interval [a, b].
// Doubles the node count per level until successive estimates agree to
// spec.rel_tol or the node budget is exhausted.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 const QuadSpec& spec);

// Tanh-sinh in the log domain: returns ln of the integral of exp(log_f)
// over [a, b], accumulating with log-sum-exp so integrands whose linear
// value underflows are handled exactly as well as moderate ones.
// log_f may return -inf. Convergence is measured on the log value.
double tanh_sinh_log(const std::function<double(double)>& log_f, double a,
                     double b, const QuadSpec& spec);

// ln of the double integral of exp(log_f(x, y)) over [ax,bx] x [ay,by],
// computed as an iterated log-domain tanh-sinh integral.
double tanh_sinh_log_2d(const std::function<double(double, double)>& log_f,
                        double ax, double bx, double ay, double by,
                        const QuadSpec& spec);

// Brent's method on [a, b] with precomputed endpoint values; requires a
// sign change. Stops when |f| <= ftol or the bracket shrinks to xtol.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double fa, double fb, double xtol, double ftol,
                  int max_iter);

}  // namespace sntail
