// Behavioural tests that drive the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(CYCHOM_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult res{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    int status = pclose(pipe);
    res.exit_code = WEXITSTATUS(status);
    return res;
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
    std::vector<nlohmann::json> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        if (!line.empty()) out.push_back(nlohmann::json::parse(line));
        pos = nl + 1;
    }
    return out;
}

std::vector<int> dims_of(const std::vector<nlohmann::json>& rows) {
    std::vector<int> dims;
    for (auto& r : rows)
        if (r["type"] == "row") dims.push_back(r["dim"].get<int>());
    return dims;
}

}  // namespace

TEST_CASE("homology of the trivial dga in the Borel flavour") {
    RunResult r = run("homology builtin point_dga --flavour \"[[u]]\" --degrees 0..6 --format json");
    CHECK(r.exit_code == 0);
    auto rows = json_lines(r.out);
    CHECK(dims_of(rows) == std::vector<int>{1, 0, 1, 0, 1, 0, 1});
}

TEST_CASE("homology of es1 in the series u-inverse flavour") {
    RunResult r = run("homology builtin es1 --flavour \"[[u-1]]\" --degrees 0..5 --format json");
    CHECK(r.exit_code == 0);
    CHECK(dims_of(json_lines(r.out)) == std::vector<int>{0, 1, 0, 1, 0, 1});
}

TEST_CASE("flavour aliases work") {
    RunResult a = run("homology builtin point_dga --flavour borel --degrees 0..4 --format json");
    RunResult b = run("homology builtin point_dga --flavour \"[[u]]\" --degrees 0..4 --format json");
    CHECK(a.exit_code == 0);
    CHECK(dims_of(json_lines(a.out)) == dims_of(json_lines(b.out)));
}

TEST_CASE("text and machine reports carry identical numbers") {
    RunResult t = run("homology builtin es1 --flavour \"[u]\" --degrees 0..6");
    RunResult j = run("homology builtin es1 --flavour \"[u]\" --degrees 0..6 --format json");
    REQUIRE(t.exit_code == 0);
    REQUIRE(j.exit_code == 0);
    auto rows = json_lines(j.out);
    // every json row appears in the text table
    for (auto& r : rows) {
        if (r["type"] != "row") continue;
        std::string needle = std::to_string(r["degree"].get<int>());
        CHECK(t.out.find(needle) != std::string::npos);
    }
    std::vector<int> dims = dims_of(rows);
    CHECK(dims == std::vector<int>{1, 0, 1, 0, 1, 0, 1});
}

TEST_CASE("verify suites pass on builtins") {
    CHECK(run("verify builtin sphere2 --suite corollary --degrees 0..6").exit_code == 0);
    CHECK(run("verify builtin es1 --suite gysin --degrees -2..2").exit_code == 0);
    CHECK(run("verify builtin point_dga --suite all --degrees -3..3 --upow -6..6").exit_code == 0);
    CHECK(run("verify builtin \"sphere(2)\" --suite axioms --degrees 0..4").exit_code == 0);
}

TEST_CASE("loop tables for spheres") {
    RunResult r3 = run("loop builtin sphere3 --relative --degrees 0..8 --format json");
    CHECK(r3.exit_code == 0);
    CHECK(dims_of(json_lines(r3.out)) == std::vector<int>{0, 0, 1, 0, 1, 0, 1, 0, 1});
    RunResult r2 = run("loop builtin sphere2 --relative --degrees 0..7 --format json");
    CHECK(dims_of(json_lines(r2.out)) == std::vector<int>{0, 1, 0, 1, 0, 1, 0, 1});
    RunResult abs2 = run("loop builtin sphere2 --degrees 0..0 --format json");
    CHECK(dims_of(json_lines(abs2.out)) == std::vector<int>{1});
}

TEST_CASE("malformed spec files exit 2 with a diagnostic") {
    std::string path = std::string(CYCHOM_CLI_PATH) + ".badspec";
    {
        std::ofstream f(path);
        f << "[mixed]\n[basis]\ne zero\n";
    }
    RunResult r = run("homology " + path + " --flavour \"[u]\"");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("line 3") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("validation failures exit 3") {
    // degree-violating delta entry parses but cannot be realized
    std::string path = std::string(CYCHOM_CLI_PATH) + ".invalid";
    {
        std::ofstream f(path);
        f << "[mixed]\n[basis]\ne 0\nb 2\n\n[delta]\ne b 1\n";
    }
    RunResult r = run("homology " + path + " --flavour \"[u]\"");
    CHECK(r.exit_code == 3);
    std::remove(path.c_str());
    // unknown builtin
    CHECK(run("homology builtin nonsense --flavour \"[u]\"").exit_code == 3);
    // suite requiring a dga on a mixed input
    CHECK(run("verify builtin es1 --suite corollary").exit_code == 3);
}

TEST_CASE("verification failures exit 1") {
    // a mixed spec violating the axioms: delta^2 != 0
    std::string path = std::string(CYCHOM_CLI_PATH) + ".axfail";
    {
        std::ofstream f(path);
        f << "[mixed]\n[basis]\na 0\nb 1\nc 2\n\n[delta]\na b 1\nb c 1\n";
    }
    RunResult r = run("verify " + path + " --suite axioms --degrees -1..2");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("spec file inputs work end to end") {
    std::string path = std::string(CYCHOM_CLI_PATH) + ".s3spec";
    {
        std::ofstream f(path);
        f << "[dga]\nname = s3\nunit = one\n\n[basis]\none 0\nv 3\n\n[product]\nv v one 0\n\n"
             "[augmentation]\nyes\n";
    }
    RunResult r = run("verify " + path + " --suite corollary --degrees 0..5");
    CHECK(r.exit_code == 0);
    std::remove(path.c_str());
}

TEST_CASE("json reports conform to the published schema shape") {
    RunResult r = run("verify builtin es1 --suite gysin --degrees -1..1 --format json");
    REQUIRE(r.exit_code == 0);
    bool saw_meta = false, saw_summary = false;
    for (auto& row : json_lines(r.out)) {
        REQUIRE(row.contains("type"));
        std::string type = row["type"];
        if (type == "meta") {
            saw_meta = true;
            CHECK(row.contains("command"));
            CHECK(row.contains("input"));
            CHECK(row["degree_lo"].is_number_integer());
        } else if (type == "row") {
            CHECK(row["degree"].is_number_integer());
            CHECK(row["dim"].is_number_integer());
            CHECK(row["u_rank"].is_number_integer());
            CHECK(row["trust"].is_string());
        } else if (type == "check") {
            CHECK(row["name"].is_string());
            CHECK(row["pass"].is_boolean());
        } else if (type == "summary") {
            saw_summary = true;
            CHECK(row["pass"].is_boolean());
        } else {
            FAIL("unknown row type ", type);
        }
    }
    CHECK(saw_meta);
    CHECK(saw_summary);
}
