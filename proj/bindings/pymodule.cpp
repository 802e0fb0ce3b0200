#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kcn/report.hpp"

namespace py = pybind11;

namespace {

py::dict check_to_dict(const kcn::CheckReport& c) {
    py::dict d;
    d["check"] = c.check;
    d["verdict"] = std::string(kcn::to_string(c.verdict));
    d["max_residual"] = c.max_residual;
    d["worst_point"] = c.worst_point;
    d["tolerance"] = c.tolerance;
    d["sub_residuals"] = c.sub_residuals;
    d["notes"] = c.notes;
    return d;
}

py::dict report_to_dict(const kcn::SuiteReport& r) {
    py::dict d;
    d["manifold"] = r.manifold;
    d["dim"] = r.dim;
    d["suite"] = r.suite;
    d["samples"] = r.samples;
    d["seed"] = r.seed;
    d["tolerance"] = r.tolerance;
    d["classification"] = r.classification;
    d["closedness"] = r.closedness;
    d["kcn"] = r.kcn;
    py::list checks;
    for (const auto& c : r.checks) checks.append(check_to_dict(c));
    d["checks"] = checks;
    py::dict agreement;
    agreement["consistent"] = r.agreement.consistent;
    agreement["violations"] = r.agreement.violations;
    d["agreement"] = agreement;
    d["exit_code"] = kcn::exit_code(r);
    return d;
}

kcn::SamplePlan make_plan(int samples, std::uint64_t seed, double tol) {
    kcn::SamplePlan plan;
    plan.count = samples;
    plan.seed = seed;
    plan.tolerance = tol;
    return plan;
}

}  // namespace

PYBIND11_MODULE(_kcnverify, m) {
    m.doc() = "Pointwise verification of Kahler-compatible Nijenhuis structures";

    py::register_exception<kcn::Error>(m, "KcnError");

    m.def("list_builtins", &kcn::list_builtins, "Names of the built-in charts.");

    m.def(
        "builtin_definition",
        [](const std::string& name) {
            return kcn::serialize_definition(kcn::get_builtin(name).definition);
        },
        py::arg("name"), "Definition text of a built-in chart.");

    m.def(
        "builtin_expectations",
        [](const std::string& name) {
            const auto& e = kcn::get_builtin(name);
            py::dict d;
            d["classification"] = e.expected_classification;
            d["kcn"] = e.expected_kcn;
            d["checks"] = e.expectations;
            return d;
        },
        py::arg("name"), "Expected verdicts of a built-in chart.");

    m.def(
        "eval_jet2",
        [](const std::string& source, const std::vector<std::string>& coords,
           const std::vector<double>& point) {
            kcn::Expression e = kcn::Expression::parse(source, coords);
            kcn::Jet2 j = e.eval_jet2(point);
            const int m_ = j.dim();
            std::vector<std::vector<double>> hess(m_, std::vector<double>(m_));
            for (int a = 0; a < m_; ++a)
                for (int b = 0; b < m_; ++b) hess[a][b] = j.hess(a, b);
            return py::make_tuple(j.value, j.gradient, hess);
        },
        py::arg("source"), py::arg("coords"), py::arg("point"),
        "Parse an expression and return (value, gradient, hessian) at a point.");

    m.def(
        "parse_expression",
        [](const std::string& source, const std::vector<std::string>& coords) {
            return kcn::Expression::parse(source, coords).serialize();
        },
        py::arg("source"), py::arg("coords"),
        "Parse an expression and return its canonical serialized form.");

    m.def(
        "check_text",
        [](const std::string& definition_text, const std::string& suite, int samples,
           std::uint64_t seed, double tol) {
            kcn::ChartDefinition def = kcn::load_definition_text(definition_text);
            return report_to_dict(kcn::run_suite(def, make_plan(samples, seed, tol), suite));
        },
        py::arg("definition_text"), py::arg("suite") = "all", py::arg("samples") = 128,
        py::arg("seed") = 42, py::arg("tol") = 1e-8,
        "Run the check suites on a definition given as text.");

    m.def(
        "check_builtin",
        [](const std::string& name, const std::string& suite, int samples,
           std::uint64_t seed, double tol) {
            const auto& entry = kcn::get_builtin(name);
            kcn::SuiteReport r =
                kcn::run_suite(entry.definition, make_plan(samples, seed, tol), suite);
            py::dict d = report_to_dict(r);
            std::vector<std::string> mismatches;
            int rc = kcn::exit_code_regression(r, entry, &mismatches);
            d["expectation_mismatches"] = mismatches;
            d["regression_exit_code"] = rc;
            return d;
        },
        py::arg("name"), py::arg("suite") = "all", py::arg("samples") = 128,
        py::arg("seed") = 42, py::arg("tol") = 1e-8,
        "Run the check suites on a built-in chart and compare with its expectations.");

    m.def(
        "check_json",
        [](const std::string& definition_text, const std::string& suite, int samples,
           std::uint64_t seed, double tol) {
            kcn::ChartDefinition def = kcn::load_definition_text(definition_text);
            return kcn::report_to_json(
                kcn::run_suite(def, make_plan(samples, seed, tol), suite));
        },
        py::arg("definition_text"), py::arg("suite") = "all", py::arg("samples") = 128,
        py::arg("seed") = 42, py::arg("tol") = 1e-8,
        "Run the check suites and return the JSON report string.");
}
