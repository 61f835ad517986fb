#include "support.hpp"

#include "semibiv/config.hpp"

#include <cmath>

using namespace semibiv;
using namespace testing;

TEST_CASE("baseline and marginal specs") {
    CHECK(parse_baseline("exponential").family() == BaselineFamily::Exponential);
    CHECK(parse_baseline("weibull:2").describe() == "weibull:2");
    CHECK(parse_baseline("pareto").left_endpoint() == 1.0);
    CHECK_THROWS_AS(parse_baseline("weibull:-1"), ConfigError);
    CHECK_THROWS_AS(parse_baseline("weibull:x"), ConfigError);
    CHECK_THROWS_AS(parse_baseline("gamma"), ConfigError);
    CHECK_THROWS_AS(parse_baseline("custom:/nonexistent/table.csv"), ConfigError);

    const auto e = parse_baseline("exponential");
    CHECK(parse_marginal("lfr:1.5", e).hazard(2.0) == 7.0);
    CHECK(parse_marginal("ph:2", e).survival(1.0) == std::exp(-2.0));
    CHECK_THROWS_AS(parse_marginal("ph:0", e), ConfigError);
    CHECK_THROWS_AS(parse_marginal("exp:1", e), ConfigError);
}

TEST_CASE("model config forms") {
    const auto ph = build_model(parse_model_config(R"({"baseline":"exponential","theta123":[1,1,1]})"));
    REQUIRE(ph.ph);
    CHECK(ph.general.theta() == 3.0);
    CHECK(ph.grid.knots.size() == 16);

    const auto gen = build_model(parse_model_config(
        R"({"baseline":"exponential","theta":3,"marginals":["lfr:1.5","lfr:1.5"],
            "grid":{"knots":[1,2,3,5]},"tolerance":{"abs":1e-6}})"));
    CHECK_FALSE(gen.ph);
    CHECK(gen.grid.knots == std::vector<double>{1, 2, 3, 5});
    CHECK(gen.tolerance.abs == 1e-6);
    CHECK(gen.tolerance.rel == 1e-6);

    const auto grid = build_model(parse_model_config(
        R"({"baseline":"weibull:2","theta123":[1,2,1],"theta":4,"grid":{"count":10}})"));
    CHECK(grid.grid.knots.size() == 10);
}

TEST_CASE("malformed configs are config errors") {
    const char* bad[] = {
        "not json",
        "[1,2]",
        R"({"theta123":[1,1,1]})",
        R"({"baseline":"exponential"})",
        R"({"baseline":"exponential","theta123":[1,1,1],"marginals":["ph:1","ph:1"],"theta":3})",
        R"({"baseline":"exponential","theta123":[1,1]})",
        R"({"baseline":"exponential","theta123":[1,1,1],"theta":4})",
        R"({"baseline":"exponential","marginals":["ph:1","ph:1"]})",
        R"({"baseline":"exponential","theta123":[1,1,1],"colour":"red"})",
        R"({"baseline":"exponential","theta123":[1,1,1],"grid":{"step":1}})",
        R"({"baseline":"exponential","theta123":[1,1,1],"tolerance":{"abs":-1}})",
    };
    for (const char* text : bad) {
        INFO(text);
        CHECK_THROWS_AS(build_model(parse_model_config(text)), ConfigError);
    }
    // Parameters the model rejects surface as config errors too.
    CHECK_THROWS_AS(build_model(parse_model_config(R"({"baseline":"exponential","theta123":[0,1,1]})")),
                    ConfigError);
    CHECK_THROWS_AS(build_model(parse_model_config(
                        R"({"baseline":"exponential","theta123":[1,1,1],"grid":{"knots":[2,1]}})")),
                    ConfigError);
}

TEST_CASE("files") {
    CHECK_THROWS_AS(load_model_config("/nonexistent/model.json"), std::ios_base::failure);
    const auto cfg = load_model_config(std::string(SEMIBIV_SOURCE_DIR) + "/tests/data/truncated_hazard.json");
    const auto m = build_model(cfg);
    CHECK(m.general.marginal(1).hazard(0.5) == 1.5);
    CHECK(m.general.marginal(1).describe() == "hazard:truncated_hazard.csv");
}
