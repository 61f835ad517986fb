#pragma once

#include "semibiv/baseline.hpp"
#include "semibiv/bivariate.hpp"
#include "semibiv/hazard.hpp"
#include "semibiv/marginal.hpp"

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semibiv {

// "lhs <= rhs" passes when lhs <= rhs + max(abs, rel * |rhs|).
struct Tolerance {
    double abs = 1e-8;
    double rel = 1e-6;

    double allowance(double rhs) const;
    bool holds(double lhs, double rhs) const { return lhs <= rhs + allowance(rhs); }
};

/// Evaluation grid shared by both axes. Off-diagonal checks only use points
/// whose cumulative-hazard gap |R0(x1) - R0(x2)| is at least `wedge_margin`.
struct GridSpec {
    std::vector<double> knots;
    double wedge_margin = 0.02;

    // `count` knots (>= 8) log-spaced in R0 between r0_min and r0_max.
    static GridSpec log_spaced(const BaselineModel& baseline, int count = 16, double r0_min = 0.05,
                               double r0_max = 8.0, double wedge_margin = 0.02);
    // Explicit knots; must be strictly increasing.
    static GridSpec from_knots(std::vector<double> knots, double wedge_margin = 0.02);
};

// Eight t values with R0(t) log-spaced on [0.1, 4].
std::vector<double> default_t_knots(const BaselineModel& baseline, int count = 8,
                                    double r0_min = 0.1, double r0_max = 4.0);

enum class Verdict { Valid, Invalid, Inconclusive };
enum class ConditionStatus { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict verdict);
std::string_view to_string(ConditionStatus status);

struct ConditionResult {
    std::string id;
    std::string description;
    ConditionStatus status = ConditionStatus::Pass;
    std::array<double, 2> witness{std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::quiet_NaN()};
    // Set for rectangle checks: (a1, b1, a2, b2).
    std::optional<std::array<double, 4>> rectangle;
    // Signed slack at the witness; negative means violated.
    double margin = std::numeric_limits<double>::infinity();
    bool heuristic = false;
    std::string note;

    bool pass() const noexcept { return status == ConditionStatus::Pass; }
};

struct ValidationReport {
    Verdict verdict = Verdict::Valid;
    std::vector<ConditionResult> conditions;
    // Diagnostics.
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::string> notes;
    std::vector<double> grid_knots;
    double wedge_margin = 0.0;
    Tolerance tolerance;

    // Invalid if any condition failed, else Inconclusive if any was
    // inconclusive, else Valid.
    void finalize();
    const ConditionResult* find(std::string_view id) const;
    std::optional<double> value(std::string_view key) const;
    // "no violation found on grid", "violation found", ...
    std::string summary() const;
};

ValidationReport merge_reports(const std::vector<ValidationReport>& reports);

// A single "lhs <= rhs" evaluation.
struct Inequality {
    double lhs = 0.0;
    double rhs = 0.0;
};

// Density-sign condition at an off-diagonal point with x_i > x_{3-i}:
//   d/dx_{3-i} ln(-d/dx_i F_i(x_i (-) x_{3-i})) <= theta r0(x_{3-i}).
Inequality theorem2_condition_ii(const GeneralBivariateModel& model, int i, double x1, double x2);

// Marginal hazard bound r_i(d) |dd/dx_{3-i}| <= theta r0(x_{3-i}).
Inequality theorem5_condition_i(const MarginalModel& marginal, const BaselineModel& baseline,
                                double theta, int i, double x1, double x2);

// Non-negative density written with hazards:
//   d g / d x_{3-i} <= g (theta r0(x_{3-i}) + h),
// g = r_i(d) dd/dx_i, h = r_i(d) dd/dx_{3-i}.
Inequality theorem5_condition_iii(const MarginalModel& marginal, const BaselineModel& baseline,
                                  double theta, int i, double x1, double x2);

/// Mixture-weight bounds theta <= u1 + u2 <= 2 theta and the density-sign
/// condition on every off-diagonal grid point. Also checks that the diagonal
/// limit u_i does not depend on the diagonal point (Inconclusive otherwise).
ValidationReport check_theorem2(const GeneralBivariateModel& model, const GridSpec& grid,
                                const Tolerance& tol = {});

/// Hazard-rate qualification of two marginal hazards: bound, divergence of the
/// hazard integral (heuristic), density sign and theta <= v1 + v2 <= 2 theta.
ValidationReport check_theorem5(const MarginalModel& marginal1, const MarginalModel& marginal2,
                                const BaselineModel& baseline, double theta,
                                const GridSpec& grid, const Tolerance& tol = {});
ValidationReport check_theorem5(const HazardFunction& r1, const HazardFunction& r2,
                                const BaselineModel& baseline, double theta,
                                const GridSpec& grid, const Tolerance& tol = {});

// The marginal-hazard bound alone, for the marginals of a general model.
ValidationReport check_hazard_bound(const GeneralBivariateModel& model, const GridSpec& grid,
                                    const Tolerance& tol = {});

/// Every grid cell [k_a, k_{a+1}] x [k_b, k_{b+1}] must carry probability
/// >= -tolerance. The most negative cell is the witness.
ValidationReport check_two_increasing(const GeneralBivariateModel& model, const GridSpec& grid,
                                      double tolerance = 1e-9);

struct ResidualReport {
    double max_residual = 0.0;
    // (x1, x2, t) of the largest residual.
    std::array<double, 3> worst{std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN()};
    std::size_t evaluated = 0;
};

// max |ln F(x1 (+) t, x2 (+) t) - ln F(x1, x2) - theta R0(t)| over grid x t_knots.
ResidualReport check_functional_equation(const GeneralBivariateModel& model, const GridSpec& grid,
                                         const std::vector<double>& t_knots);

// max |sum_i r_i(x (+) t) r0(t) / r0(x_i (+) t) - theta r0(t)| / (theta r0(t))
// over off-diagonal grid points.
ResidualReport check_hazard_gradient_identity(const GeneralBivariateModel& model,
                                              const GridSpec& grid,
                                              const std::vector<double>& t_knots);

/// (-d ln F / dx1, -d ln F / dx2) from the marginal hazards. DomainError on the
/// diagonal.
std::array<double, 2> hazard_gradient(const GeneralBivariateModel& model, double x1, double x2);
// Central differences of -ln F, stencil kept off the diagonal.
std::array<double, 2> hazard_gradient_numeric(const GeneralBivariateModel& model, double x1,
                                              double x2);

// exp(-int r1(u, left) du - int r2(x1, u) du), integrating the hazard gradient
// along the axis path and splitting where the path meets the diagonal.
double reconstruct_survival_from_gradient(const GeneralBivariateModel& model, double x1,
                                          double x2);

// PH convenience overloads.
inline ValidationReport check_theorem2(const PHBivariateModel& model, const GridSpec& grid,
                                       const Tolerance& tol = {}) {
    return check_theorem2(model.to_general(), grid, tol);
}
inline ValidationReport check_two_increasing(const PHBivariateModel& model, const GridSpec& grid,
                                             double tolerance = 1e-9) {
    return check_two_increasing(model.to_general(), grid, tolerance);
}
inline ResidualReport check_functional_equation(const PHBivariateModel& model,
                                                const GridSpec& grid,
                                                const std::vector<double>& t_knots) {
    return check_functional_equation(model.to_general(), grid, t_knots);
}
inline ResidualReport check_hazard_gradient_identity(const PHBivariateModel& model,
                                                     const GridSpec& grid,
                                                     const std::vector<double>& t_knots) {
    return check_hazard_gradient_identity(model.to_general(), grid, t_knots);
}
inline std::array<double, 2> hazard_gradient(const PHBivariateModel& model, double x1,
                                             double x2) {
    return hazard_gradient(model.to_general(), x1, x2);
}
inline double reconstruct_survival_from_gradient(const PHBivariateModel& model, double x1,
                                                 double x2) {
    return reconstruct_survival_from_gradient(model.to_general(), x1, x2);
}

}  // namespace semibiv
