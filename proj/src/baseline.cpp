#include "semibiv/baseline.hpp"

#include "semibiv/errors.hpp"
#include "semibiv/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace semibiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_shape(double a) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << a;
    return os.str();
}

}  // namespace

BaselineModel BaselineModel::exponential() {
    return {BaselineFamily::Exponential, 1.0, 0.0, nullptr};
}

BaselineModel BaselineModel::weibull(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw ModelError("Weibull shape must be positive and finite");
    }
    return {BaselineFamily::Weibull, shape, 0.0, nullptr};
}

BaselineModel BaselineModel::pareto() {
    return {BaselineFamily::Pareto, 1.0, 1.0, nullptr};
}

BaselineModel BaselineModel::custom(HazardFunction hazard, double left_endpoint) {
    auto cum = std::make_shared<const CumulativeHazard>(std::move(hazard), left_endpoint);
    return {BaselineFamily::CustomHazard, 1.0, left_endpoint, std::move(cum)};
}

std::string BaselineModel::describe() const {
    switch (family_) {
        case BaselineFamily::Exponential: return "exponential";
        case BaselineFamily::Weibull: return "weibull:" + format_shape(shape_);
        case BaselineFamily::Pareto: return "pareto";
        case BaselineFamily::CustomHazard: return "custom:" + custom_->hazard().label;
    }
    return "unknown";
}

void BaselineModel::require_in_support(double x, const char* what) const {
    if (std::isnan(x) || x < left_) {
        std::ostringstream msg;
        msg << what << ": argument " << x << " is below the left endpoint " << left_;
        throw DomainError(msg.str());
    }
}

double BaselineModel::cumulative_hazard(double x) const {
    if (std::isnan(x)) throw DomainError("cumulative_hazard: NaN argument");
    if (x <= left_) return 0.0;
    if (std::isinf(x)) return kInf;
    switch (family_) {
        case BaselineFamily::Exponential: return x;
        case BaselineFamily::Weibull: return std::pow(x, shape_);
        case BaselineFamily::Pareto: return std::log(x);
        case BaselineFamily::CustomHazard: return (*custom_)(x);
    }
    return 0.0;
}

double BaselineModel::inverse_cumulative_hazard(double y) const {
    if (std::isnan(y) || y < 0.0) {
        throw DomainError("inverse_cumulative_hazard: argument must be >= 0");
    }
    if (y == 0.0) return left_;
    if (std::isinf(y)) return kInf;
    switch (family_) {
        case BaselineFamily::Exponential: return y;
        case BaselineFamily::Weibull: return shape_ == 1.0 ? y : std::pow(y, 1.0 / shape_);
        case BaselineFamily::Pareto: return std::exp(y);
        case BaselineFamily::CustomHazard: return custom_->inverse(y);
    }
    return left_;
}

double BaselineModel::survival(double x) const {
    if (!std::isfinite(x)) throw DomainError("survival: argument must be finite");
    return std::exp(-cumulative_hazard(x));
}

double BaselineModel::inverse_survival(double s) const {
    if (std::isnan(s) || !(s > 0.0) || s > 1.0) {
        throw DomainError("inverse_survival: probability must lie in (0, 1]");
    }
    if (s == 1.0) return left_;
    return inverse_cumulative_hazard(-std::log(s));
}

double BaselineModel::hazard(double x) const {
    require_in_support(x, "hazard");
    switch (family_) {
        case BaselineFamily::Exponential: return 1.0;
        case BaselineFamily::Weibull:
            if (shape_ == 1.0) return 1.0;
            if (x == 0.0) return shape_ < 1.0 ? kInf : 0.0;
            return shape_ * std::pow(x, shape_ - 1.0);
        case BaselineFamily::Pareto: return 1.0 / x;
        case BaselineFamily::CustomHazard: return custom_->rate(x);
    }
    return 0.0;
}

double BaselineModel::hazard_derivative(double x) const {
    require_in_support(x, "hazard_derivative");
    switch (family_) {
        case BaselineFamily::Exponential: return 0.0;
        case BaselineFamily::Weibull:
            if (shape_ == 1.0) return 0.0;
            return shape_ * (shape_ - 1.0) * std::pow(x, shape_ - 2.0);
        case BaselineFamily::Pareto: return -1.0 / (x * x);
        case BaselineFamily::CustomHazard:
            return numerics::central_derivative([this](double u) { return custom_->rate(u); }, x,
                                                left_);
    }
    return 0.0;
}

double BaselineModel::density(double x) const {
    const double r = hazard(x);
    if (r == 0.0) return 0.0;
    return r * survival(x);
}

double BaselineModel::combine(double x, double t) const {
    require_in_support(x, "combine");
    require_in_support(t, "combine");
    if (t == left_) return x;
    if (x == left_) return t;
    switch (family_) {
        case BaselineFamily::Exponential: return x + t;
        case BaselineFamily::Pareto: return x * t;
        default: break;
    }
    return inverse_cumulative_hazard(cumulative_hazard(x) + cumulative_hazard(t));
}

double BaselineModel::difference(double x, double t) const {
    require_in_support(t, "difference");
    if (std::isnan(x) || x < t) {
        std::ostringstream msg;
        msg << "difference: requires x >= t, got x=" << x << ", t=" << t;
        throw DomainError(msg.str());
    }
    if (x == t) return left_;
    if (t == left_) return x;
    switch (family_) {
        case BaselineFamily::Exponential: return x - t;
        case BaselineFamily::Pareto: return x / t;
        default: break;
    }
    const double gap = cumulative_hazard(x) - cumulative_hazard(t);
    return inverse_cumulative_hazard(gap > 0.0 ? gap : 0.0);
}

}  // namespace semibiv
