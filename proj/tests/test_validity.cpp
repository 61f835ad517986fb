#include "support.hpp"

#include "semibiv/errors.hpp"
#include "semibiv/report.hpp"
#include "semibiv/validity.hpp"

#include <cmath>

using namespace semibiv;
using namespace testing;

namespace {

GeneralBivariateModel lfr_model() {
    return GeneralBivariateModel(BaselineModel::exponential(),
                                 MarginalModel::linear_failure_rate(1.5),
                                 MarginalModel::linear_failure_rate(1.5), 3.0);
}

HazardFunction constant_hazard(double c) {
    HazardFunction h;
    h.rate = [c](double) { return c; };
    return h;
}

std::vector<BaselineModel> builtins() {
    return {BaselineModel::exponential(), BaselineModel::weibull(0.5), BaselineModel::weibull(2.0),
            BaselineModel::pareto()};
}

}  // namespace

TEST_CASE("tolerance and grids") {
    const Tolerance tol;
    CHECK(tol.holds(3.0 + 2e-6, 3.0));
    CHECK_FALSE(tol.holds(3.0 + 4e-6, 3.0));
    CHECK(tol.holds(5e-9, 0.0));

    const auto e = BaselineModel::exponential();
    const auto g = GridSpec::log_spaced(e);
    REQUIRE(g.knots.size() == 16);
    CHECK_THAT(g.knots.front(), Rel(0.05, 1e-12));
    CHECK_THAT(g.knots.back(), Rel(8.0, 1e-12));
    CHECK(std::is_sorted(g.knots.begin(), g.knots.end()));
    CHECK_THROWS_AS(GridSpec::log_spaced(e, 4), DomainError);
    CHECK_THROWS_AS(GridSpec::from_knots({1.0, 1.0}), DomainError);

    const auto t = default_t_knots(BaselineModel::weibull(2.0));
    REQUIRE(t.size() == 8);
    CHECK_THAT(t.front() * t.front(), Rel(0.1, 1e-12));
}

TEST_CASE("density-sign condition reproduces the exact left-hand side") {
    const auto lfr = lfr_model();
    // With d = x1 - x2, ln(-dF1/dx1) = -d - 1.5 d^2 + ln(1 + 3 d); its derivative
    // in x2 is 1 + 3 d - 3 / (1 + 3 d). At (5, 3): 7 - 3/7 = 46/7.
    const auto q = theorem2_condition_ii(lfr, 1, 5.0, 3.0);
    CHECK_THAT(q.lhs, Rel(46.0 / 7.0, 1e-9));
    CHECK(q.rhs == 3.0);
    const auto q2 = theorem2_condition_ii(lfr, 2, 3.0, 5.0);
    CHECK_THAT(q2.lhs, Rel(46.0 / 7.0, 1e-9));
}

TEST_CASE("linear failure rate model is rejected") {
    const auto lfr = lfr_model();
    const auto grid = GridSpec::from_knots({3, 3.1, 3.2, 3.4, 3.6, 3.8, 4, 5});
    const auto r = check_theorem2(lfr, grid);
    CHECK(r.verdict == Verdict::Invalid);
    const auto* weights = r.find("mixture-weights");
    REQUIRE(weights);
    CHECK_FALSE(weights->pass());
    CHECK_THAT(*r.value("u1") + *r.value("u2"), Abs(2.0, 1e-6));
    const auto* sign = r.find("density-sign");
    REQUIRE(sign);
    CHECK_FALSE(sign->pass());
    CHECK(sign->witness[0] == 5.0);
    CHECK(sign->witness[1] == 3.0);
    CHECK_THAT(sign->margin, Rel(3.0 - 46.0 / 7.0, 1e-8));

    const auto e = BaselineModel::exponential();
    const auto t5 = check_theorem5(lfr.marginal(1), lfr.marginal(2), e, 3.0,
                                   GridSpec::from_knots({1, 2, 3, 5}));
    CHECK(t5.verdict == Verdict::Invalid);
    const auto* bound = t5.find("hazard-bound");
    REQUIRE(bound);
    CHECK_FALSE(bound->pass());
    // Largest violation on these knots: gap 4, hazard 13 > 3.
    CHECK_THAT(bound->margin, Abs(3.0 - 13.0, 1e-9));
    CHECK(theorem5_condition_i(lfr.marginal(1), e, 3.0, 1, 5.0, 3.0).lhs == 7.0);

    const auto rect = check_two_increasing(lfr, GridSpec::from_knots({1, 2, 3, 5, 6, 7, 8, 9}));
    CHECK(rect.verdict == Verdict::Invalid);
    const auto* cells = rect.find("two-increasing");
    REQUIRE(cells);
    REQUIRE(cells->rectangle);
    CHECK(*cells->rectangle == std::array<double, 4>{1, 2, 3, 5});
    const double oracle = std::exp(-11.0) - std::exp(-8.5) - std::exp(-31.0) + std::exp(-22.5);
    CHECK_THAT(cells->margin, Abs(oracle, 1e-12));
}

TEST_CASE("Marshall-Olkin exponential is accepted") {
    const PHBivariateModel mo(BaselineModel::exponential(), 1, 1, 1);
    const auto grid = GridSpec::log_spaced(mo.baseline());
    const auto r = check_theorem2(mo, grid);
    CHECK(r.verdict == Verdict::Valid);
    for (const auto& c : r.conditions) {
        INFO(c.id);
        CHECK(c.margin >= 0.0);
    }
    CHECK(r.summary() == "no violation found on grid");
    CHECK(check_two_increasing(mo, grid).verdict == Verdict::Valid);
}

TEST_CASE("forced PH marginals with too little mass fail the mixture weights") {
    const auto e = BaselineModel::exponential();
    const double theta = 4.0;
    const GeneralBivariateModel forced(e, MarginalModel::proportional_hazard(e, theta / 4),
                                       MarginalModel::proportional_hazard(e, theta / 4), theta);
    const auto r = check_theorem2(forced, GridSpec::log_spaced(e));
    CHECK(r.verdict == Verdict::Invalid);
    const auto* c = r.find("mixture-weights");
    REQUIRE(c);
    CHECK_FALSE(c->pass());
    CHECK_THAT(*r.value("u1") + *r.value("u2"), Abs(theta / 2, 1e-6));
}

TEST_CASE("hazard-rate conditions on valid hazards") {
    SECTION("proportional Weibull hazards") {
        const auto w = BaselineModel::weibull(2.0);
        HazardFunction r;
        r.rate = [](double x) { return 2.0 * 2.0 * x; };  // (theta_i + theta_3) a x^(a-1)
        const auto rep = check_theorem5(r, r, w, 3.0, GridSpec::log_spaced(w));
        INFO(report_to_table(rep));
        CHECK(rep.verdict == Verdict::Valid);
    }
    SECTION("constant hazards, independence boundary") {
        const auto e = BaselineModel::exponential();
        const auto rep = check_theorem5(constant_hazard(1.0), constant_hazard(1.0), e, 2.0,
                                        GridSpec::log_spaced(e));
        CHECK(rep.verdict == Verdict::Valid);
        const PHBivariateModel indep(e, 1.0, 1.0, 0.0);
        CHECK_THAT(decompose(indep).alpha, Abs(1.0, 1e-15));
        CHECK(decompose(indep).singular_mass == 0.0);
    }
}

TEST_CASE("random valid PH models pass every check on a 12-knot grid") {
    for (const auto& b : builtins()) {
        const auto grid = GridSpec::log_spaced(b, 12);
        for (int k = 0; k < 3; ++k) {
            const PHBivariateModel ph(b, uniform(0.2, 3), uniform(0.2, 3), uniform(0.2, 3));
            INFO(b.describe() << " " << ph.theta1() << " " << ph.theta2() << " " << ph.theta3());
            CHECK(check_theorem2(ph, grid).verdict == Verdict::Valid);
            CHECK(check_two_increasing(ph, grid).verdict == Verdict::Valid);
            const auto g = ph.to_general();
            CHECK(check_theorem5(g.marginal(1), g.marginal(2), b, ph.theta(), grid).verdict ==
                  Verdict::Valid);
        }
    }
}

TEST_CASE("a one-knot grid is vacuously valid") {
    const auto lfr = lfr_model();
    const auto grid = GridSpec::from_knots({2.0});
    CHECK(check_two_increasing(lfr, grid).verdict == Verdict::Valid);
}

TEST_CASE("functional equation residuals") {
    const PHBivariateModel mo_w(BaselineModel::weibull(2.0), 1, 1, 1);
    const auto grid = GridSpec::log_spaced(mo_w.baseline());
    const auto t = default_t_knots(mo_w.baseline());
    const auto res = check_functional_equation(mo_w, grid, t);
    CHECK(res.max_residual < 1e-9);
    CHECK(res.evaluated == grid.knots.size() * grid.knots.size() * t.size());

    CHECK(check_functional_equation(mo_w, grid, {0.0}).max_residual == 0.0);
    const PHBivariateModel par(BaselineModel::pareto(), 1, 1, 1);
    CHECK(check_functional_equation(par, GridSpec::log_spaced(par.baseline()), {1.0})
              .max_residual == 0.0);

    // Holds for the invalid model too: the equation fixes the form, not validity.
    const auto lfr = lfr_model();
    CHECK(check_functional_equation(lfr, GridSpec::log_spaced(lfr.baseline()),
                                    default_t_knots(lfr.baseline()))
              .max_residual < 1e-9);
}

TEST_CASE("hazard gradient") {
    const PHBivariateModel mo(BaselineModel::exponential(), 1, 1, 1);
    const auto g = hazard_gradient(mo, 2.0, 1.0);
    CHECK_THAT(g[0], Abs(2.0, 1e-12));
    CHECK_THAT(g[1], Abs(1.0, 1e-12));
    const PHBivariateModel par(BaselineModel::pareto(), 1, 1, 1);
    const auto p = hazard_gradient(par, 4.0, 2.0);
    CHECK_THAT(p[0], Abs(0.5, 1e-12));
    CHECK_THAT(p[1], Abs(0.5, 1e-12));
    CHECK_THROWS_AS(hazard_gradient(mo, 1.0, 1.0), DomainError);

    std::vector<GeneralBivariateModel> models{lfr_model()};
    for (const auto& b : builtins()) models.push_back(PHBivariateModel(b, 0.6, 1.7, 0.9).to_general());
    int checked = 0;
    for (const auto& m : models) {
        const double xl = m.baseline().left_endpoint();
        for (int k = 0; k < 20; ++k) {
            const double x1 = xl + uniform(0.05, 3.0);
            const double x2 = xl + uniform(0.05, 3.0);
            if (std::abs(x1 - x2) < 0.05) continue;
            const auto a = hazard_gradient(m, x1, x2);
            const auto n = hazard_gradient_numeric(m, x1, x2);
            INFO(m.baseline().describe() << " at " << x1 << ", " << x2);
            CHECK(rel_close(a[0], n[0], 1e-5, 1e-7));
            CHECK(rel_close(a[1], n[1], 1e-5, 1e-7));
            ++checked;
        }
    }
    CHECK(checked >= 80);
}

TEST_CASE("hazard gradient identity") {
    const PHBivariateModel mo(BaselineModel::exponential(), 1, 1, 1);
    const auto grid = GridSpec::log_spaced(mo.baseline());
    CHECK(check_hazard_gradient_identity(mo, grid, default_t_knots(mo.baseline())).max_residual <
          1e-14);
    const PHBivariateModel mo_w(BaselineModel::weibull(2.0), 1, 1, 1);
    CHECK(check_hazard_gradient_identity(mo_w, GridSpec::log_spaced(mo_w.baseline()),
                                         default_t_knots(mo_w.baseline()))
              .max_residual < 1e-8);
    CHECK(check_hazard_gradient_identity(mo_w, GridSpec::log_spaced(mo_w.baseline()), {1e-6})
              .max_residual < 1e-8);
}

TEST_CASE("survival rebuilt from the hazard gradient") {
    const PHBivariateModel mo(BaselineModel::exponential(), 1, 1, 1);
    CHECK_THAT(reconstruct_survival_from_gradient(mo, 1.0, 2.0), Rel(std::exp(-5.0), 1e-9));
    CHECK(reconstruct_survival_from_gradient(mo, 0.0, 0.0) == 1.0);
    const PHBivariateModel mo_w(BaselineModel::weibull(2.0), 1, 1, 1);
    CHECK_THAT(reconstruct_survival_from_gradient(mo_w, 2.0, 1.0), Rel(std::exp(-9.0), 1e-6));
    const PHBivariateModel par(BaselineModel::pareto(), 1, 1, 1);
    CHECK(reconstruct_survival_from_gradient(par, 1.0, 1.0) == 1.0);
    CHECK_THAT(reconstruct_survival_from_gradient(par, 4.0, 2.0), Rel(0.03125, 1e-8));
}

TEST_CASE("reports merge and summarise") {
    const auto lfr = lfr_model();
    const auto grid = GridSpec::log_spaced(lfr.baseline());
    const auto merged =
        merge_reports({check_theorem2(lfr, grid), check_two_increasing(lfr, grid)});
    CHECK(merged.verdict == Verdict::Invalid);
    CHECK(merged.summary() == "violation found");
    CHECK(merged.find("two-increasing"));
    CHECK(merged.find("density-sign"));
    CHECK(to_string(Verdict::Inconclusive) == "Inconclusive");
}
