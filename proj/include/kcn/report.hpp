#pragma once

#include <string>

#include "kcn/verdicts.hpp"

namespace kcn {

/// Machine-readable report.  Each entry of "checks" mirrors CheckReport with
/// the stable keys: check, verdict, max_residual, worst_point, tolerance;
/// samples and seed appear at the top level.
std::string report_to_json(const SuiteReport& report);

/// Human-readable rendering with one line per check; verdicts and residuals
/// are identical to the JSON form.
std::string report_to_text(const SuiteReport& report);

}  // namespace kcn
