#pragma once

#include <string>
#include <vector>

#include "sntail/quadrature.hpp"

namespace sntail {

enum class SuiteStatus { pass, fail, skipped };

// One invariant suite's outcome. `detail` carries the measured quantities
// (worst gaps, failing grid points) or, for skipped suites, the reason.
struct SuiteResult {
  std::string name;
  SuiteStatus status = SuiteStatus::skipped;
  std::string detail;
};

const char* to_string(SuiteStatus s);

// Runs every invariant suite whose name contains `filter` (empty matches
// all). Suites excluded by the filter still appear in the result, marked
// skipped with the reason, so nothing drops out silently. A suite that
// throws is reported as failed with the exception message.
std::vector<SuiteResult> run_verify_suites(const std::string& filter,
                                           const QuadSpec& spec = {});

}  // namespace sntail
