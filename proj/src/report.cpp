#include "kcn/report.hpp"

#include <json.hpp>

#include <sstream>

namespace kcn {

namespace {

using nlohmann::json;

json check_to_json(const CheckReport& c) {
    json j;
    j["check"] = c.check;
    j["verdict"] = to_string(c.verdict);
    j["max_residual"] = c.max_residual;
    j["worst_point"] = c.worst_point;
    j["tolerance"] = c.tolerance;
    if (!c.sub_residuals.empty()) j["sub_residuals"] = c.sub_residuals;
    if (!c.notes.empty()) j["notes"] = c.notes;
    if (!c.defects.empty()) j["defects"] = c.defects;
    return j;
}

}  // namespace

std::string report_to_json(const SuiteReport& report) {
    json j;
    j["manifold"] = report.manifold;
    j["dim"] = report.dim;
    j["suite"] = report.suite;
    j["samples"] = report.samples;
    j["seed"] = report.seed;
    j["tolerance"] = report.tolerance;
    j["classification"] = report.classification;
    j["classification_zero_a"] = report.classification_zero_a;
    j["metric_indefinite"] = report.metric_indefinite;
    j["closedness"] = report.closedness;
    j["kcn"] = report.kcn;
    j["checks"] = json::array();
    for (const auto& c : report.checks) j["checks"].push_back(check_to_json(c));
    j["agreement"]["consistent"] = report.agreement.consistent;
    j["agreement"]["violations"] = report.agreement.violations;
    return j.dump(2) + "\n";
}

std::string report_to_text(const SuiteReport& report) {
    std::ostringstream out;
    out << "manifold " << report.manifold << "  (dim " << report.dim << ", suite "
        << report.suite << ")\n";
    out << "samples " << report.samples << "  seed " << report.seed << "  tolerance "
        << report.tolerance << "\n";
    out << "classification: " << report.classification;
    if (report.classification_zero_a) out << " (zero endomorphism)";
    if (report.metric_indefinite) out << "  [indefinite metric]";
    out << "\n\n";

    for (const auto& c : report.checks) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-26s %-15s", c.check.c_str(),
                      to_string(c.verdict));
        out << buf;
        std::snprintf(buf, sizeof buf, "max_residual %.3e", c.max_residual);
        out << buf;
        if (!c.worst_point.empty()) {
            out << "  worst (";
            for (std::size_t i = 0; i < c.worst_point.size(); ++i) {
                if (i) out << ", ";
                std::snprintf(buf, sizeof buf, "%.6g", c.worst_point[i]);
                out << buf;
            }
            out << ")";
        }
        out << "\n";
        for (const auto& [name, r] : c.sub_residuals) {
            std::snprintf(buf, sizeof buf, "    %-30s %.3e", name.c_str(), r);
            out << buf << "\n";
        }
        for (const auto& n : c.notes) out << "    note: " << n << "\n";
        for (const auto& d : c.defects) out << "    DEFECT: " << d << "\n";
    }

    out << "\nclosedness: " << report.closedness << "\n";
    out << "K.c.N. aggregate: " << report.kcn << "\n";
    out << "AGREEMENT: " << (report.agreement.consistent ? "consistent" : "VIOLATED") << "\n";
    for (const auto& v : report.agreement.violations) out << "  violation: " << v << "\n";
    return out.str();
}

}  // namespace kcn
