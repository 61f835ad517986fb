#include "support.hpp"

#include "semibiv/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace semibiv;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "semibiv");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string config(const std::string& name) {
    return std::string(SEMIBIV_SOURCE_DIR) + "/configs/" + name;
}

std::string data(const std::string& name) {
    return std::string(SEMIBIV_SOURCE_DIR) + "/tests/data/" + name;
}

bool contains(const std::string& text, const std::string& piece) {
    return text.find(piece) != std::string::npos;
}

}  // namespace

TEST_CASE("eval") {
    auto r = run({"eval", "--config", config("mo_exponential.json"), "1", "2"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "0.00673794699909"));

    r = run({"eval", "--config", config("mo_exponential.json"), "0", "0"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "diagonal"));

    r = run({"eval", "--config", config("mo_pareto.json"), "--format", "json", "4", "2"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["survival"].get<double>() == 0.03125);
}

TEST_CASE("validate exit codes") {
    auto r = run({"validate", "--config", config("mo_exponential.json")});
    CHECK(r.code == 0);

    r = run({"validate", "--config", config("lfr_exponential.json"), "--format", "json"});
    CHECK(r.code == 3);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "Invalid");
    std::vector<std::string> failed;
    for (const auto& c : j["conditions"]) {
        if (!c["pass"].get<bool>()) failed.push_back(c["id"]);
    }
    const auto has = [&](const char* id) {
        return std::find(failed.begin(), failed.end(), id) != failed.end();
    };
    CHECK(has("mixture-weights"));
    CHECK(has("density-sign"));
    CHECK(has("two-increasing"));

    r = run({"validate", "--config", data("truncated_hazard.json")});
    CHECK(r.code == 4);
    INFO(r.out << r.err);
}

TEST_CASE("validate writes a byte-stable JSON report") {
    const std::string path = "cli_validate_report.json";
    auto a = run({"validate", "--config", config("mo_weibull2.json"), "--out", path});
    CHECK(a.code == 0);
    std::ifstream f1(path);
    std::stringstream s1;
    s1 << f1.rdbuf();
    auto b = run({"validate", "--config", config("mo_weibull2.json"), "--out", path});
    std::ifstream f2(path);
    std::stringstream s2;
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(nlohmann::json::parse(s1.str())["verdict"] == "Valid");
    std::remove(path.c_str());
}

TEST_CASE("counterexample is reproduced deterministically") {
    const auto a = run({"counterexample"});
    const auto b = run({"counterexample"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(contains(a.out, "(5, 3)"));
    CHECK(contains(a.out, "-0.000186766"));
}

TEST_CASE("decompose and check-fe") {
    auto r = run({"decompose", "--config", config("mo_exponential.json"), "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK_THAT(j["alpha"].get<double>(), testing::Abs(2.0 / 3.0, 1e-11));
    CHECK_THAT(j["singular_mass"].get<double>(), testing::Abs(1.0 / 3.0, 1e-11));

    r = run({"decompose", "--config", config("lfr_exponential.json")});
    CHECK(r.code == 3);

    r = run({"check-fe", "--config", config("mo_weibull2.json")});
    CHECK(r.code == 0);
}

TEST_CASE("rect and overrides") {
    auto r = run({"rect", "--config", config("mo_exponential.json"), "0", "inf", "0", "inf"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "1"));
    r = run({"rect", "--config", config("lfr_exponential.json"), "--theta", "3", "1", "2", "3",
             "5"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "-0.000186766"));
    r = run({"validate", "--config", config("lfr_exponential.json"), "--grid-knots", "1,2,3,5"});
    CHECK(r.code == 3);
    r = run({"validate", "--config", config("mo_exponential.json"), "--grid-knots", "3"});
    CHECK(r.code == 2);
    r = run({"validate", "--config", config("mo_exponential.json"), "--tol", "abc"});
    CHECK(r.code == 2);
}

TEST_CASE("sample") {
    auto r = run({"sample", "--config", config("mo_exponential.json"), "--n", "5", "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("x1,x2,tied\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
    const auto again =
        run({"sample", "--config", config("mo_exponential.json"), "--n", "5", "--seed", "3",
             "--threads", "2"});
    CHECK(again.out == r.out);

    r = run({"sample", "--config", config("mo_exponential.json"), "--n", "0"});
    CHECK(r.code == 2);
    r = run({"sample", "--config", config("lfr_exponential.json"), "--n", "10"});
    CHECK(r.code == 3);
    r = run({"sample", "--config", config("mo_exponential.json"), "--n", "5", "--out",
             "/nonexistent-dir/out.csv"});
    CHECK(r.code == 5);
}

TEST_CASE("usage, config and I/O errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"validate"}).code == 2);
    CHECK(run({"validate", "--config", "/nonexistent/model.json"}).code == 5);

    const std::string path = "cli_malformed.json";
    {
        std::ofstream f(path);
        f << "{\"baseline\": \"exponential\", ";
    }
    CHECK(run({"validate", "--config", path}).code == 2);
    std::remove(path.c_str());
}
