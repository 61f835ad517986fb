#pragma once

#include "semibiv/baseline.hpp"
#include "semibiv/hazard.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace semibiv {

enum class MarginalKind { ProportionalHazard, LinearFailureRate, FromHazard };

/// Univariate marginal survival model.
///
///   ProportionalHazard  survival = F0(x)^delta
///   LinearFailureRate   hazard = 1 + 2 a x on [0, inf)
///   FromHazard          survival = exp(-integral of r over [left, x])
class MarginalModel {
public:
    static MarginalModel proportional_hazard(BaselineModel baseline, double delta);
    static MarginalModel linear_failure_rate(double a);
    static MarginalModel from_hazard(HazardFunction hazard, double left_endpoint = 0.0);

    MarginalKind kind() const noexcept { return kind_; }
    double delta() const noexcept { return param_; }        // ProportionalHazard
    double coefficient() const noexcept { return param_; }  // LinearFailureRate
    const std::optional<BaselineModel>& ph_baseline() const noexcept { return baseline_; }
    double left_endpoint() const noexcept { return left_; }
    std::string describe() const;

    double survival(double x) const;
    double cumulative_hazard(double x) const;
    double hazard(double x) const;
    double density(double x) const;
    // d/dx hazard: analytic for ProportionalHazard over a built-in baseline and
    // for LinearFailureRate; central differences otherwise (NaN when the
    // stencil would leave the support).
    double hazard_derivative(double x) const;
    bool has_analytic_derivative() const noexcept;

private:
    MarginalModel(MarginalKind kind, double param, double left)
        : kind_(kind), param_(param), left_(left) {}

    MarginalKind kind_;
    double param_ = 1.0;
    double left_ = 0.0;
    std::optional<BaselineModel> baseline_;
    std::shared_ptr<const CumulativeHazard> table_;
};

/// Diagonal limit lim_{y -> left+} r_i(y) / r0(y).
struct LimitResult {
    bool divergent = false;
    double value = 0.0;
    // Ratios sampled at y = R0^-1(eps), eps = 1e-3 * 2^-k.
    std::vector<double> samples;
};

// Richardson extrapolation with an estimated convergence order.
// Throws DomainError when the supports differ and NumericError (carrying the
// samples) when the sequence oscillates or does not settle.
LimitResult limit_hazard_ratio(const MarginalModel& marginal, const BaselineModel& baseline);

}  // namespace semibiv
