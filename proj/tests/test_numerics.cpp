#include "support.hpp"

#include "semibiv/errors.hpp"
#include "semibiv/numerics.hpp"

#include <cmath>

using namespace semibiv;
using namespace testing;

TEST_CASE("adaptive quadrature integrates smooth functions") {
    const auto r = numerics::integrate([](double x) { return std::exp(-x); }, 0.0, 3.0);
    CHECK_THAT(r.value, Rel(1.0 - std::exp(-3.0), 1e-13));
    CHECK(numerics::integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("tanh-sinh handles an integrable endpoint singularity") {
    const auto r = numerics::integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0,
                                                4.0);
    CHECK_THAT(r.value, Rel(4.0, 1e-10));
}

TEST_CASE("unit-square quadrature") {
    const auto r = numerics::integrate_unit_square([](double u, double v) { return u * v * v; });
    CHECK_THAT(r.value, Rel(1.0 / 6.0, 1e-10));
}

TEST_CASE("root finder on increasing functions") {
    const double root = numerics::solve_increasing([](double x) { return x * x * x - 2.0; }, 0.0,
                                                   2.0, 1e-15);
    CHECK_THAT(root, Rel(std::cbrt(2.0), 1e-14));
    // Flat-then-steep function forces bisection fallback.
    const double r2 = numerics::solve_increasing(
        [](double x) { return std::exp(50.0 * (x - 1.0)) - 1.0; }, 0.0, 3.0, 1e-14);
    CHECK_THAT(r2, Abs(1.0, 1e-12));
    CHECK_THROWS_AS(numerics::solve_increasing([](double x) { return x + 5.0; }, 0.0, 1.0, 1e-12),
                    NumericError);
}

TEST_CASE("central derivative respects its bounds") {
    auto f = [](double x) { return std::sin(x); };
    CHECK_THAT(numerics::central_derivative(f, 1.0, 0.0), Rel(std::cos(1.0), 1e-9));
    // Near the bound the step shrinks but stays accurate.
    CHECK_THAT(numerics::central_derivative(f, 1e-3, 0.0), Rel(std::cos(1e-3), 1e-6));
    CHECK(std::isnan(numerics::central_derivative(f, 0.0, 0.0)));
    CHECK_THAT(numerics::central_derivative_within(f, 2.0, 1.999, 2.001), Rel(std::cos(2.0), 1e-6));
    CHECK(std::isnan(numerics::central_derivative_within(f, 2.0, 2.0, 3.0)));
}
