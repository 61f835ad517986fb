#include "support.hpp"

#include "semibiv/baseline.hpp"
#include "semibiv/errors.hpp"
#include "semibiv/hazard.hpp"

#include <cmath>
#include <fstream>
#include <thread>
#include <vector>

using namespace semibiv;
using namespace testing;

namespace {

std::vector<BaselineModel> builtins() {
    return {BaselineModel::exponential(), BaselineModel::weibull(0.5), BaselineModel::weibull(2.0),
            BaselineModel::pareto()};
}

// Weibull(2) given only through its hazard 2x.
BaselineModel custom_weibull2() {
    HazardFunction h;
    h.rate = [](double x) { return 2.0 * x; };
    h.label = "2x";
    return BaselineModel::custom(h);
}

}  // namespace

TEST_CASE("survival examples") {
    CHECK(BaselineModel::exponential().survival(0.0) == 1.0);
    CHECK_THAT(BaselineModel::weibull(2.0).survival(2.0), Rel(std::exp(-4.0), 1e-15));
    CHECK_THAT(BaselineModel::pareto().survival(4.0), Rel(0.25, 1e-15));
    CHECK(BaselineModel::pareto().survival(0.5) == 1.0);
    CHECK_THROWS_AS(BaselineModel::exponential().survival(INFINITY), DomainError);
    CHECK_THROWS_AS(BaselineModel::exponential().survival(NAN), DomainError);
}

TEST_CASE("inverse survival examples") {
    CHECK_THAT(BaselineModel::exponential().inverse_survival(std::exp(-3.0)), Rel(3.0, 1e-15));
    CHECK_THAT(BaselineModel::pareto().inverse_survival(0.2), Rel(5.0, 1e-15));
    CHECK_THAT(BaselineModel::weibull(2.0).inverse_survival(std::exp(-9.0)), Rel(3.0, 1e-15));
    CHECK(BaselineModel::pareto().inverse_survival(1.0) == 1.0);
    CHECK_THROWS_AS(BaselineModel::exponential().inverse_survival(0.0), DomainError);
    CHECK_THROWS_AS(BaselineModel::exponential().inverse_survival(1.5), DomainError);
}

TEST_CASE("combine and difference examples") {
    const auto e = BaselineModel::exponential();
    const auto w = BaselineModel::weibull(2.0);
    const auto p = BaselineModel::pareto();
    CHECK(e.combine(2.0, 3.0) == 5.0);
    CHECK_THAT(w.combine(3.0, 4.0), Rel(5.0, 1e-15));
    CHECK_THAT(p.combine(2.0, 3.0), Rel(6.0, 1e-15));
    CHECK(e.difference(5.0, 3.0) == 2.0);
    CHECK_THAT(p.difference(6.0, 2.0), Rel(3.0, 1e-15));
    CHECK_THAT(w.difference(5.0, 4.0), Rel(3.0, 1e-15));
    CHECK_THROWS_AS(e.difference(1.0, 2.0), DomainError);
    CHECK_THROWS_AS(e.combine(-1.0, 2.0), DomainError);
    CHECK_THROWS_AS(p.combine(0.5, 2.0), DomainError);
}

TEST_CASE("hazard examples") {
    CHECK(BaselineModel::exponential().hazard(7.0) == 1.0);
    CHECK_THAT(BaselineModel::weibull(2.0).hazard(3.0), Rel(6.0, 1e-15));
    CHECK_THAT(BaselineModel::pareto().cumulative_hazard(std::exp(1.0)), Rel(1.0, 1e-15));
    CHECK_THAT(BaselineModel::pareto().hazard(4.0), Rel(0.25, 1e-15));
    CHECK_THAT(BaselineModel::weibull(0.5).hazard(4.0), Rel(0.25, 1e-15));
}

TEST_CASE("derivatives of the hazard match finite differences") {
    for (const auto& b : builtins()) {
        for (double x : {1.5, 2.0, 3.7}) {
            const double h = 1e-5;
            const double fd = (b.hazard(x + h) - b.hazard(x - h)) / (2 * h);
            CHECK(rel_close(b.hazard_derivative(x), fd, 1e-7, 1e-10));
        }
    }
}

TEST_CASE("density, hazard and survival are consistent") {
    for (const auto& b : builtins()) {
        for (double x : {1.1, 2.0, 5.0}) {
            CHECK(rel_close(b.density(x), b.hazard(x) * b.survival(x), 1e-14));
            CHECK(rel_close(b.cumulative_hazard(x), -std::log(b.survival(x)), 1e-14));
        }
    }
}

TEST_CASE("round trip through the inverse survival") {
    for (const auto& b : builtins()) {
        const double xl = b.left_endpoint();
        for (int k = 0; k <= 40; ++k) {
            const double x = xl + std::pow(10.0, -3.0 + 4.7 * k / 40.0);  // up to xl + ~50
            const double s = b.survival(x);
            if (s < 1e-300) continue;
            CHECK(rel_close(b.inverse_survival(s), x, 1e-10));
            CHECK(rel_close(b.inverse_cumulative_hazard(b.cumulative_hazard(x)), x, 1e-12));
        }
    }
}

TEST_CASE("semigroup laws on random triples") {
    for (const auto& b : builtins()) {
        const double xl = b.left_endpoint();
        for (int k = 0; k < 200; ++k) {
            const double x = xl + uniform(0.0, 5.0);
            const double y = xl + uniform(0.0, 5.0);
            const double z = xl + uniform(0.0, 5.0);
            CHECK(rel_close(b.combine(b.combine(x, y), z), b.combine(x, b.combine(y, z)), 1e-10));
            CHECK(rel_close(b.combine(x, y), b.combine(y, x), 1e-12));
            CHECK(b.combine(x, xl) == x);
            CHECK(rel_close(b.difference(b.combine(x, y), y), x, 1e-10, 1e-12));
            CHECK(b.difference(x, x) == xl);
        }
    }
}

TEST_CASE("exponential family uses plain arithmetic") {
    const auto e = BaselineModel::exponential();
    for (int k = 0; k < 50; ++k) {
        const double x = uniform(0.0, 10.0);
        const double t = uniform(0.0, 10.0);
        CHECK(e.combine(x, t) == x + t);
        CHECK(e.difference(x + t, t) == (x + t) - t);
    }
}

TEST_CASE("custom hazard reproduces the Weibull closed form") {
    const auto c = custom_weibull2();
    const auto w = BaselineModel::weibull(2.0);
    CHECK(c.family() == BaselineFamily::CustomHazard);
    for (double x : {0.01, 0.3, 1.0, 2.5, 4.0, 7.0}) {
        CHECK_THAT(c.cumulative_hazard(x), Abs(w.cumulative_hazard(x), 1e-9));
        CHECK(rel_close(c.cumulative_hazard(x), -std::log(c.survival(x)), 1e-12));
    }
    for (double y : {0.05, 1.0, 9.0, 40.0}) {
        CHECK(rel_close(c.inverse_cumulative_hazard(y), std::sqrt(y), 1e-10));
    }
    CHECK(rel_close(c.combine(3.0, 4.0), 5.0, 1e-10));
    CHECK(rel_close(c.difference(5.0, 4.0), 3.0, 1e-8));
    // Derivative by finite differences.
    CHECK(rel_close(c.hazard_derivative(1.3), 2.0, 1e-6));
}

TEST_CASE("custom hazard semigroup laws") {
    const auto c = custom_weibull2();
    for (int k = 0; k < 100; ++k) {
        const double x = uniform(0.0, 3.0);
        const double y = uniform(0.0, 3.0);
        const double z = uniform(0.0, 3.0);
        CHECK(rel_close(c.combine(c.combine(x, y), z), c.combine(x, c.combine(y, z)), 1e-8));
        CHECK(rel_close(c.combine(x, y), c.combine(y, x), 1e-8));
        CHECK(rel_close(c.difference(c.combine(x, y), y), x, 1e-8, 1e-8));
    }
}

TEST_CASE("custom hazard with an endpoint singularity") {
    HazardFunction h;
    h.rate = [](double x) { return 0.5 / std::sqrt(x); };
    const auto c = BaselineModel::custom(h);
    for (double x : {0.04, 1.0, 9.0}) CHECK_THAT(c.cumulative_hazard(x), Abs(std::sqrt(x), 1e-9));
}

TEST_CASE("custom hazard rejects negative values") {
    HazardFunction h;
    h.rate = [](double x) { return 1.0 - x; };
    const auto c = BaselineModel::custom(h);
    CHECK_THROWS_AS(c.hazard(2.0), ModelError);
}

TEST_CASE("bounded cumulative hazard cannot be inverted past its limit") {
    HazardFunction h;
    h.rate = [](double x) { return x < 1.0 ? 1.0 : 0.0; };
    h.breakpoints = {1.0};
    const auto c = BaselineModel::custom(h);
    CHECK_THAT(c.inverse_cumulative_hazard(0.5), Abs(0.5, 1e-10));
    CHECK_THROWS_AS(c.inverse_cumulative_hazard(2.0), NumericError);
}

TEST_CASE("custom hazard cache is safe to share between threads") {
    const auto c = custom_weibull2();
    std::vector<double> results(8);
    std::vector<std::thread> pool;
    for (int t = 0; t < 8; ++t) {
        pool.emplace_back([&, t] { results[t] = c.inverse_cumulative_hazard(3.0 + t); });
    }
    for (auto& th : pool) th.join();
    for (int t = 0; t < 8; ++t) CHECK(rel_close(results[t], std::sqrt(3.0 + t), 1e-10));
}

TEST_CASE("piecewise-linear hazard tables") {
    const auto h = piecewise_linear_hazard({0.0, 1.0, 3.0}, {1.0, 3.0, 3.0});
    CHECK(h.rate(0.5) == 2.0);
    CHECK(h.rate(10.0) == 3.0);
    CHECK_THROWS_AS(piecewise_linear_hazard({0.0, 0.0}, {1.0, 1.0}), ModelError);
    CHECK_THROWS_AS(piecewise_linear_hazard({0.0, 1.0}, {1.0, -1.0}), ModelError);
    const auto c = BaselineModel::custom(h);
    // Integral of the table: 2 on [0,1], then slope 3.
    CHECK_THAT(c.cumulative_hazard(1.0), Abs(2.0, 1e-10));
    CHECK_THAT(c.cumulative_hazard(4.0), Abs(2.0 + 6.0 + 3.0, 1e-9));
}

TEST_CASE("hazard CSV loading") {
    const std::string path = "test_hazard_table.csv";
    {
        std::ofstream f(path);
        f << "x,hazard\n0,1\n2,1\n4,2\n";
    }
    const auto h = load_hazard_csv(path);
    CHECK(h.rate(1.0) == 1.0);
    CHECK(h.rate(3.0) == 1.5);
    {
        std::ofstream f(path);
        f << "x,hazard\n0,abc\n";
    }
    CHECK_THROWS_AS(load_hazard_csv(path), ModelError);
    CHECK_THROWS_AS(load_hazard_csv("no_such_file.csv"), std::ios_base::failure);
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(BaselineModel::weibull(0.0), ModelError);
    CHECK_THROWS_AS(BaselineModel::weibull(-1.0), ModelError);
    CHECK(BaselineModel::weibull(2.0).describe() == "weibull:2");
    CHECK(BaselineModel::pareto().left_endpoint() == 1.0);
}
