#pragma once

#include "semibiv/hazard.hpp"

#include <memory>
#include <string>

namespace semibiv {

enum class BaselineFamily { Exponential, Weibull, Pareto, CustomHazard };

/// Baseline survival function F0 and the operators built on it.
///
/// Everything is evaluated through the cumulative hazard R0 = -ln F0, so the
/// semigroup operator x (+) t = R0^-1(R0(x) + R0(t)) and its inverse
/// x (-) t = R0^-1(R0(x) - R0(t)) never form products of raw survivals.
///
/// Built-in families use closed forms:
///   Exponential  R0(x) = x          support [0, inf)
///   Weibull(a)   R0(x) = x^a        support [0, inf)
///   Pareto       R0(x) = ln x       support [1, inf)
/// CustomHazard integrates a supplied hazard by adaptive quadrature and
/// inverts it by bracketed root finding.
///
/// Values are cheap to copy; a custom hazard's memo cache is shared and
/// internally synchronized.
class BaselineModel {
public:
    static BaselineModel exponential();
    static BaselineModel weibull(double shape);
    static BaselineModel pareto();
    static BaselineModel custom(HazardFunction hazard, double left_endpoint = 0.0);

    BaselineFamily family() const noexcept { return family_; }
    double shape() const noexcept { return shape_; }
    double left_endpoint() const noexcept { return left_; }
    // Grammar form: exponential, weibull:<a>, pareto, custom:<label>.
    std::string describe() const;

    double survival(double x) const;
    double inverse_survival(double s) const;
    double cumulative_hazard(double x) const;
    double inverse_cumulative_hazard(double y) const;
    double hazard(double x) const;
    double hazard_derivative(double x) const;
    double density(double x) const;

    // x (+) t; identity element is the left endpoint.
    double combine(double x, double t) const;
    // x (-) t for x >= t.
    double difference(double x, double t) const;

    bool has_analytic_derivative() const noexcept { return family_ != BaselineFamily::CustomHazard; }

    friend bool operator==(const BaselineModel& a, const BaselineModel& b) noexcept {
        return a.family_ == b.family_ && a.shape_ == b.shape_ && a.left_ == b.left_ &&
               a.custom_ == b.custom_;
    }

private:
    BaselineModel(BaselineFamily family, double shape, double left,
                  std::shared_ptr<const CumulativeHazard> custom)
        : family_(family), shape_(shape), left_(left), custom_(std::move(custom)) {}

    void require_in_support(double x, const char* what) const;

    BaselineFamily family_;
    double shape_ = 1.0;
    double left_ = 0.0;
    std::shared_ptr<const CumulativeHazard> custom_;
};

}  // namespace semibiv
