#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "kcn/report.hpp"

namespace {

// Exit codes: 0 pass, 1 fail, 2 definition/usage error, 3 internal
// disagreement between equivalent criteria.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitDefinition = 2;
constexpr int kExitDisagreement = 3;

kcn::ChartDefinition resolve_target(const std::string& target, bool builtin_only) {
    if (!builtin_only && std::filesystem::exists(target))
        return kcn::load_definition_file(target);
    return kcn::get_builtin(target).definition;
}

int run_check(const std::string& target, bool builtin_mode, const std::string& suite,
              int samples, std::uint64_t seed, double tol, const std::string& format,
              const std::string& out_path) {
    kcn::ChartDefinition def;
    const kcn::BuiltinEntry* entry = nullptr;
    try {
        if (builtin_mode) {
            entry = &kcn::get_builtin(target);
            def = entry->definition;
        } else {
            def = resolve_target(target, false);
        }
    } catch (const kcn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDefinition;
    }

    kcn::SamplePlan plan;
    plan.count = samples;
    plan.seed = seed;
    plan.tolerance = tol;

    kcn::SuiteReport report;
    try {
        report = kcn::run_suite(def, plan, suite);
    } catch (const kcn::DefinitionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDefinition;
    } catch (const kcn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDefinition;
    }

    std::string rendered =
        format == "json" ? kcn::report_to_json(report) : kcn::report_to_text(report);
    if (out_path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write `" << out_path << "`\n";
            return kExitDefinition;
        }
        out << rendered;
    }

    if (entry != nullptr) {
        std::vector<std::string> mismatches;
        int rc = kcn::exit_code_regression(report, *entry, &mismatches);
        for (const auto& m : mismatches)
            std::cerr << "expectation mismatch: " << m << "\n";
        return rc == 0 ? kExitPass : (rc == 3 ? kExitDisagreement : kExitFail);
    }
    return kcn::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pointwise verification of Kahler-compatible Nijenhuis structures"};
    app.require_subcommand(1);

    // check
    std::string target, suite = "all", format = "text", out_path;
    int samples = 128;
    std::uint64_t seed = 42;
    double tol = 1e-8;
    bool builtin_mode = false;
    auto* check = app.add_subcommand("check", "run the check suites on a definition");
    check->add_option("target", target, "definition file path or builtin name")->required();
    check->add_option("--suite", suite, "all | kcn | kahler | rank | remark21")
        ->check(CLI::IsMember({"all", "kcn", "kahler", "rank", "remark21"}));
    check->add_option("--samples", samples, "number of sample points (default 128)");
    check->add_option("--seed", seed, "PRNG seed (default 42)");
    check->add_option("--tol", tol, "verdict tolerance (default 1e-8)");
    check->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    check->add_option("--out", out_path, "write the report to a file instead of stdout");
    check->add_flag("--builtin", builtin_mode,
                    "treat target as a builtin and compare against its expected verdicts");

    // list-builtins
    auto* list = app.add_subcommand("list-builtins", "list the built-in charts");

    // export-builtin
    std::string export_name, export_path;
    auto* exp = app.add_subcommand("export-builtin", "write a builtin as a definition file");
    exp->add_option("name", export_name, "builtin name")->required();
    exp->add_option("path", export_path, "output file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitDefinition;
    }

    if (check->parsed())
        return run_check(target, builtin_mode, suite, samples, seed, tol, format, out_path);

    if (list->parsed()) {
        for (const auto& name : kcn::list_builtins()) std::cout << name << "\n";
        return kExitPass;
    }

    if (exp->parsed()) {
        try {
            const auto& entry = kcn::get_builtin(export_name);
            std::ofstream out(export_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write `" << export_path << "`\n";
                return kExitDefinition;
            }
            out << kcn::serialize_definition(entry.definition);
            return kExitPass;
        } catch (const kcn::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitDefinition;
        }
    }
    return kExitDefinition;
}
