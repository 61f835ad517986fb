#include "semibiv/marginal.hpp"

#include "semibiv/errors.hpp"
#include "semibiv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semibiv {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

MarginalModel MarginalModel::proportional_hazard(BaselineModel baseline, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ModelError("proportional-hazard exponent must be positive and finite");
    }
    MarginalModel m(MarginalKind::ProportionalHazard, delta, baseline.left_endpoint());
    m.baseline_ = std::move(baseline);
    return m;
}

MarginalModel MarginalModel::linear_failure_rate(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ModelError("linear-failure-rate coefficient must be positive and finite");
    }
    return {MarginalKind::LinearFailureRate, a, 0.0};
}

MarginalModel MarginalModel::from_hazard(HazardFunction hazard, double left_endpoint) {
    MarginalModel m(MarginalKind::FromHazard, 1.0, left_endpoint);
    m.table_ = std::make_shared<const CumulativeHazard>(std::move(hazard), left_endpoint);
    return m;
}

std::string MarginalModel::describe() const {
    switch (kind_) {
        case MarginalKind::ProportionalHazard: return "ph:" + fmt(param_);
        case MarginalKind::LinearFailureRate: return "lfr:" + fmt(param_);
        case MarginalKind::FromHazard: return "hazard:" + table_->hazard().label;
    }
    return "unknown";
}

double MarginalModel::cumulative_hazard(double x) const {
    if (std::isnan(x)) throw DomainError("marginal cumulative_hazard: NaN argument");
    if (x <= left_) return 0.0;
    switch (kind_) {
        case MarginalKind::ProportionalHazard: return param_ * baseline_->cumulative_hazard(x);
        case MarginalKind::LinearFailureRate: return x + param_ * x * x;
        case MarginalKind::FromHazard: return (*table_)(x);
    }
    return 0.0;
}

double MarginalModel::survival(double x) const {
    if (std::isnan(x)) throw DomainError("marginal survival: NaN argument");
    return std::exp(-cumulative_hazard(x));
}

double MarginalModel::hazard(double x) const {
    if (std::isnan(x) || x < left_) throw DomainError("marginal hazard: argument below support");
    switch (kind_) {
        case MarginalKind::ProportionalHazard: return param_ * baseline_->hazard(x);
        case MarginalKind::LinearFailureRate: return 1.0 + 2.0 * param_ * x;
        case MarginalKind::FromHazard: return table_->rate(x);
    }
    return 0.0;
}

double MarginalModel::density(double x) const {
    const double r = hazard(x);
    if (r == 0.0) return 0.0;
    return r * survival(x);
}

bool MarginalModel::has_analytic_derivative() const noexcept {
    switch (kind_) {
        case MarginalKind::ProportionalHazard: return baseline_->has_analytic_derivative();
        case MarginalKind::LinearFailureRate: return true;
        case MarginalKind::FromHazard: return false;
    }
    return false;
}

double MarginalModel::hazard_derivative(double x) const {
    if (std::isnan(x) || x < left_) throw DomainError("marginal hazard_derivative: below support");
    switch (kind_) {
        case MarginalKind::ProportionalHazard: return param_ * baseline_->hazard_derivative(x);
        case MarginalKind::LinearFailureRate: return 2.0 * param_;
        case MarginalKind::FromHazard:
            return numerics::central_derivative([this](double u) { return table_->rate(u); }, x,
                                                left_);
    }
    return 0.0;
}

LimitResult limit_hazard_ratio(const MarginalModel& marginal, const BaselineModel& baseline) {
    if (marginal.left_endpoint() != baseline.left_endpoint()) {
        std::ostringstream msg;
        msg << "marginal support starts at " << marginal.left_endpoint()
            << " but the baseline starts at " << baseline.left_endpoint();
        throw DomainError(msg.str());
    }

    constexpr int kSamples = 14;
    LimitResult result;
    result.samples.reserve(kSamples);
    double eps = 1e-3;
    for (int k = 0; k < kSamples; ++k, eps *= 0.5) {
        const double y = baseline.inverse_cumulative_hazard(eps);
        const double ratio = marginal.hazard(y) / baseline.hazard(y);
        if (std::isnan(ratio)) {
            throw NumericError("hazard ratio is NaN near the left endpoint", result.samples);
        }
        result.samples.push_back(ratio);
        if (std::isinf(ratio)) {
            result.divergent = true;
            result.value = ratio;
            return result;
        }
    }

    const auto& r = result.samples;
    std::vector<double> diff(kSamples - 1);
    for (int k = 0; k + 1 < kSamples; ++k) diff[k] = r[k + 1] - r[k];

    const double scale = std::max(1.0, std::abs(r.back()));
    const double max_diff = std::abs(*std::max_element(
        diff.begin(), diff.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
    if (max_diff <= 1e-13 * scale) {
        result.value = r.back();
        return result;
    }

    // Successive differences must keep one sign; alternation means the ratio
    // oscillates and no limit can be read off.
    int sign_changes = 0;
    for (int k = 0; k + 1 < kSamples - 1; ++k) {
        if (std::abs(diff[k]) > 1e-13 * scale && std::abs(diff[k + 1]) > 1e-13 * scale &&
            (diff[k] > 0) != (diff[k + 1] > 0)) {
            ++sign_changes;
        }
    }
    if (sign_changes > 0) {
        throw NumericError("hazard ratio oscillates near the left endpoint", result.samples);
    }

    const int last = kSamples - 2;
    if (std::abs(diff[last]) <= 1e-13 * scale) {
        result.value = r.back();
        return result;
    }
    const double q_last = diff[last - 1] / diff[last];
    const double q_prev = diff[last - 2] / diff[last - 1];

    if (q_last <= 1.02) {
        // Differences are not shrinking: the ratio grows without bound.
        const bool growing = std::abs(r.back()) > std::abs(r.front());
        if (growing) {
            result.divergent = true;
            result.value = std::numeric_limits<double>::infinity();
            return result;
        }
        throw NumericError("hazard ratio does not converge near the left endpoint",
                           result.samples);
    }

    const double extrapolated = r.back() + diff[last] / (q_last - 1.0);
    const double previous = r[kSamples - 2] + diff[last - 1] / (q_prev - 1.0);
    const double tol = 1e-6 * std::max(1.0, std::abs(extrapolated));
    if (!(q_prev > 1.02) || std::abs(extrapolated - previous) > tol) {
        throw NumericError("Richardson extrapolation of the hazard ratio is unstable",
                           result.samples);
    }
    result.value = extrapolated;
    return result;
}

}  // namespace semibiv
