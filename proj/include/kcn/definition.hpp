#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kcn/structures.hpp"

namespace kcn {

/// A chart definition as read from (or written to) the line-oriented text
/// format:
///
///   # comment
///   manifold <name>
///   dim <n>                      # even, 2..16
///   coords <id> ... <id>         # n identifiers
///   domain <i> <lo> <hi>         # 1-based; [-1,1] when omitted
///   exclude "<expr>"             # optional rejection expression
///   g <i> <j> = "<expr>"         # i <= j; unspecified entries are 0
///   J <i> <j> = "<expr>"
///   theta <i> <j> = "<expr>"     # i < j; antisymmetric completion
///   A <i> <j> = "<expr>"
///
/// Indices are 1-based in files and 0-based in memory.
struct ChartDefinition {
    std::string name;
    int dim = 0;
    std::vector<std::string> coords;
    std::vector<std::pair<double, double>> domain;
    std::optional<std::string> exclusion_source;
    Expression exclusion;  // empty when absent

    // Sparse component sources keyed by (i,j), kept for round-trip fidelity.
    std::map<std::pair<int, int>, std::string> g_sources;
    std::map<std::pair<int, int>, std::string> j_sources;
    std::map<std::pair<int, int>, std::string> theta_sources;
    std::map<std::pair<int, int>, std::string> a_sources;

    bool has_candidate() const { return !theta_sources.empty() || !a_sources.empty(); }

    KahlerChart to_chart() const;
    StructureCandidate to_candidate() const;

    bool structurally_equal(const ChartDefinition& other) const;
};

/// Parse the text format.  Throws DefinitionError with a 1-based line
/// number; expression syntax errors are wrapped with their location.
ChartDefinition load_definition_text(const std::string& text);

/// Load from a file path.
ChartDefinition load_definition_file(const std::string& path);

/// Serialize back to the text format (canonical ordering).
std::string serialize_definition(const ChartDefinition& def);

}  // namespace kcn
