#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// Exit-status and format contract of the command line tool, exercised
// against the real binary.

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(KCN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string run_capture(const std::string& args, int* exit_code = nullptr) {
    std::string path = "/tmp/kcn_cli_out.txt";
    std::string cmd = std::string(KCN_CLI_PATH) + " " + args + " > " + path + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    if (exit_code != nullptr) *exit_code = WEXITSTATUS(status);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("list-builtins prints the seven published names") {
    int rc = 0;
    std::string out = run_capture("list-builtins", &rc);
    CHECK(rc == 0);
    int lines = 0;
    for (char c : out)
        if (c == '\n') ++lines;
    CHECK(lines == 7);
    CHECK(out.find("hyperkahler-r4") != std::string::npos);
}

TEST_CASE("check exit statuses") {
    CHECK(run("check parallel-form-c2") == 0);
    CHECK(run("check nonclosed-negative") == 1);      // expected FAIL, plain semantics
    CHECK(run("check scc-nonparallel-negative") == 1);
    CHECK(run("check flat-c2-example15 --suite kcn") == 0);  // parallel FAIL is informational
    CHECK(run("check does-not-exist-anywhere") == 2);
    CHECK(run("check --builtin nonclosed-negative") == 0);  // matches its expectations
    CHECK(run("check --builtin flat-c2-example15 --suite kcn") == 0);
}

TEST_CASE("definition errors exit 2") {
    std::string path = "/tmp/kcn_bad_def.kcn";
    {
        std::ofstream out(path);
        out << "manifold bad\ndim 3\ncoords a b c\n";
    }
    CHECK(run("check " + path) == 2);
    {
        std::ofstream out(path);
        out << "manifold bad\ndim 4\ncoords x1 y1 x2 y2\n"
               "g 1 1 = \"1\"\ng 2 2 = \"1\"\ng 3 3 = \"1\"\ng 4 4 = \"1\"\n"
               "J 2 1 = \"1\"\nJ 1 2 = \"-1\"\nJ 4 3 = \"1\"\nJ 3 4 = \"-1\"\n"
               "theta 2 1 = \"x1\"\n";
    }
    CHECK(run("check " + path) == 2);
    CHECK(run("export-builtin nope /tmp/kcn_nope.kcn") == 2);
}

TEST_CASE("exported builtins round-trip through check") {
    for (const char* name : {"hyperkahler-r4", "rank2-degenerate"}) {
        std::string path = std::string("/tmp/kcn_export_") + name + ".kcn";
        CHECK(run(std::string("export-builtin ") + name + " " + path) == 0);
        int rc = run(std::string("check ") + path + " --suite kcn");
        // Exported definitions load and produce the same pass verdicts.
        CHECK(rc == 0);
    }
}

TEST_CASE("json reports carry the stable keys and are reproducible") {
    int rc = 0;
    std::string out =
        run_capture("check parallel-form-c2 --format json --samples 32", &rc);
    CHECK(rc == 0);
    auto doc = nlohmann::json::parse(out);
    CHECK(doc["samples"] == 32);
    CHECK(doc["seed"] == 42);
    CHECK(doc["manifold"] == "parallel-form-c2");
    REQUIRE(doc["checks"].is_array());
    for (const auto& c : doc["checks"]) {
        CHECK(c.contains("check"));
        CHECK(c.contains("verdict"));
        CHECK(c.contains("max_residual"));
        CHECK(c.contains("worst_point"));
        CHECK(c.contains("tolerance"));
    }
    std::string again =
        run_capture("check parallel-form-c2 --format json --samples 32", &rc);
    CHECK(out == again);

    // Report content matches between --out and stdout paths.
    std::string path = "/tmp/kcn_json_out.json";
    run_capture("check parallel-form-c2 --format json --samples 32 --out " + path, &rc);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == out);
}

TEST_CASE("text and json verdicts agree") {
    int rc = 0;
    std::string text = run_capture("check rank2-degenerate", &rc);
    std::string json = run_capture("check rank2-degenerate --format json", &rc);
    auto doc = nlohmann::json::parse(json);
    for (const auto& c : doc["checks"]) {
        std::string name = c["check"];
        std::string verdict = c["verdict"];
        auto pos = text.find(name);
        REQUIRE(pos != std::string::npos);
        CHECK(text.substr(pos, 60).find(verdict) != std::string::npos);
    }
}
