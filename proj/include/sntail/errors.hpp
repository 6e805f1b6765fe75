#pragma once

#include <stdexcept>
#include <string>

namespace sntail {

// Base of everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An argument outside the mathematical domain of an operation
// (non-finite input, probability outside (0,1), |rho| >= 1, ...).
struct domain_error : error {
  using error::error;
};

// A shape parameter for which the requested asymptotic branch does not
// exist: the skewed tail formulas have no lambda = 0 limit, and the
// positive-skew joint asymptote needs theta > 0.
struct shape_error : error {
  using error::error;
};

// Input formally in-domain but outside the validity region of an
// asymptotic formula or bound (inner logarithm nonnegative, Lambert-W
// argument below e, lower bracket nonpositive).
struct range_error : error {
  using error::error;
};

// Quadrature or root bracketing failed to converge within its budget.
struct convergence_error : error {
  using error::error;
};

// Monte Carlo conditioning event never occurred.
struct insufficient_samples_error : error {
  using error::error;
};

}  // namespace sntail
