#pragma once

#include <map>
#include <string>
#include <vector>

#include "kcn/definition.hpp"

namespace kcn {

/// A built-in regression chart: a full definition plus the verdicts the
/// check suites are expected to reproduce (the regression gate).  Expected
/// verdicts are keyed by check name and use the report spellings
/// "PASS" / "FAIL" / "MIXED" / "NOT_APPLICABLE" / "DEGENERATE"; the
/// expected_* notes record the derivation behind each nontrivial entry.
struct BuiltinEntry {
    std::string name;
    ChartDefinition definition;
    std::string expected_classification;           // "cc" | "scc"
    std::string expected_kcn;                      // aggregate verdict
    std::map<std::string, std::string> expectations;
    std::map<std::string, std::string> notes;
};

/// Names of all built-in charts, in their published order.
std::vector<std::string> list_builtins();

/// Retrieve one built-in chart.  Throws UnknownBuiltin.
const BuiltinEntry& get_builtin(const std::string& name);

/// The hyperkahler chart with the second quaternionic candidate (A = J3,
/// associated form Omega_2).  Not part of the published list; used by the
/// regression suites alongside the J2 candidate of `hyperkahler-r4`.
ChartDefinition hyperkahler_j3_definition();

}  // namespace kcn
