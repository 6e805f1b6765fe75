#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "sntail/errors.hpp"

namespace sntail {

// A probability carried as its natural logarithm, so that joint tail
// values far below the smallest normal double stay representable.
// value <= 0 always; -inf encodes an exact zero.
struct LogProb {
  double value = -std::numeric_limits<double>::infinity();

  double prob() const { return std::exp(value); }
};

// Validating factory. Quadrature round-off can push a log-probability a
// hair above zero; anything within the dust tolerance is clamped, anything
// larger is a genuine caller bug.
inline LogProb log_prob(double ln_p) {
  if (std::isnan(ln_p) || ln_p > 1e-9) {
    throw domain_error("log_prob: " + std::to_string(ln_p) +
                       " is not the log of a probability");
  }
  return LogProb{std::min(ln_p, 0.0)};
}

}  // namespace sntail
