#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kcn/catalog.hpp"
#include "kcn/definition.hpp"

namespace kcn {

enum class Verdict { Pass, Fail, Mixed, NotApplicable, Degenerate };
const char* to_string(Verdict v);

/// Deterministic sampling plan.  Points are drawn with std::mt19937_64
/// seeded with `seed`; each coordinate consumes one draw mapped to [lo,hi)
/// by (x >> 11) * 2^-53.  Points where the definition's exclusion
/// expression has |value| < exclusion_guard are rejected and redrawn.
/// Identical plans on identical definitions yield identical samples.
struct SamplePlan {
    int count = 128;
    std::uint64_t seed = 42;
    double tolerance = 1e-8;
    double exclusion_guard = 0.05;
    int max_rejections = 10000;
    double singular_det_tol = 1e-12;
};

/// Outcome of one check over a sample set.  Residuals are normalized by
/// max(1, scale of the fields entering the check at the point); verdict is
/// Pass exactly when max_residual < tolerance over all accepted samples.
struct CheckReport {
    std::string check;
    Verdict verdict = Verdict::NotApplicable;
    double max_residual = 0.0;
    std::vector<double> worst_point;
    double tolerance = 0.0;
    std::map<std::string, double> sub_residuals;
    std::vector<std::string> notes;
    std::vector<std::string> defects;  // internal-consistency violations
};

struct AgreementReport {
    bool consistent = true;
    std::vector<std::string> violations;
};

struct SuiteReport {
    std::string manifold;
    int dim = 0;
    std::string suite;
    int samples = 0;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::string classification = "none";  // cc | scc | neither | mixed | none
    bool classification_zero_a = false;
    bool metric_indefinite = false;
    std::string closedness = "NOT_APPLICABLE";
    std::string kcn = "NOT_APPLICABLE";  // aggregate verdict
    std::vector<CheckReport> checks;
    AgreementReport agreement;

    const CheckReport* find(const std::string& name) const;
};

using SamplePoints = std::vector<std::vector<double>>;

/// Draw the plan's accepted sample points for a definition.
SamplePoints draw_samples(const ChartDefinition& def, const SamplePlan& plan);

// Individual check suites.  `kind` is the aggregated classification where a
// check is only defined for c.c. / s.c.c. candidates.
CheckReport check_kahler(const KahlerChart& chart, const SamplePoints& pts,
                         const SamplePlan& plan, bool* indefinite = nullptr);
CheckReport check_omega_skew(const KahlerChart& chart, const StructureCandidate& cand,
                             const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_property1(const KahlerChart& chart, const StructureCandidate& cand,
                            const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_property2(const KahlerChart& chart, const StructureCandidate& cand,
                            const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_property3(const KahlerChart& chart, const StructureCandidate& cand,
                            const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_property4(const KahlerChart& chart, const StructureCandidate& cand,
                            const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_delta_c(const KahlerChart& chart, const StructureCandidate& cand,
                          const SamplePoints& pts, const SamplePlan& plan,
                          const std::string& kind);
CheckReport check_prop11(const KahlerChart& chart, const StructureCandidate& cand,
                         const SamplePoints& pts, const SamplePlan& plan,
                         const std::string& kind);
CheckReport check_parallel_theta(const KahlerChart& chart, const StructureCandidate& cand,
                                 const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_parallel_a(const KahlerChart& chart, const StructureCandidate& cand,
                             const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_poisson_compatibility(const KahlerChart& chart,
                                        const StructureCandidate& cand,
                                        const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_inverse_closed(const KahlerChart& chart, const StructureCandidate& cand,
                                 const SamplePoints& pts, const SamplePlan& plan);
CheckReport check_orthogonal_product(const KahlerChart& chart, const StructureCandidate& cand,
                                     const SamplePoints& pts, const SamplePlan& plan,
                                     const std::string& kind);
CheckReport check_rank_analysis(const KahlerChart& chart, const StructureCandidate& cand,
                                const SamplePoints& pts, const SamplePlan& plan,
                                const std::string& kind);
CheckReport check_remark21(const KahlerChart& chart, const StructureCandidate& cand,
                           const SamplePoints& pts, const SamplePlan& plan,
                           const std::string& kind);

/// Aggregated pointwise classification over the samples:
/// "cc" | "scc" | "neither" | "mixed".
std::string classify_candidate(const KahlerChart& chart, const StructureCandidate& cand,
                               const SamplePoints& pts, const SamplePlan& plan,
                               bool* zero_endomorphism = nullptr);

/// Run every check applicable under `suite` (all | kcn | kahler | rank |
/// remark21), assemble the aggregate K.c.N. verdict (conjunction of
/// closedness and characterizations 1-4) and the cross-criterion AGREEMENT
/// section.  Disagreement between characterizations on a closed candidate is
/// an engine defect, never a result.
SuiteReport run_suite(const ChartDefinition& def, const SamplePlan& plan,
                      const std::string& suite = "all");

/// Exit status for a report: 0 pass, 1 fail, 3 internal disagreement.
/// Checks named in `informational_checks()` never affect the status.
int exit_code(const SuiteReport& report);

/// Exit status in regression mode: every expectation of the builtin must be
/// matched by the report.  Mismatches are appended to `mismatches` when
/// non-null.
int exit_code_regression(const SuiteReport& report, const BuiltinEntry& entry,
                         std::vector<std::string>* mismatches = nullptr);

const std::vector<std::string>& informational_checks();

}  // namespace kcn
