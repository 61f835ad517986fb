#include "semibiv/bivariate.hpp"

#include "semibiv/errors.hpp"
#include "semibiv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semibiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_ph_baseline(const MarginalModel& m, const BaselineModel& baseline) {
    return m.kind() == MarginalKind::ProportionalHazard && m.ph_baseline() &&
           *m.ph_baseline() == baseline;
}

void require_not_nan(double a, double b, const char* what) {
    if (std::isnan(a) || std::isnan(b)) throw DomainError(std::string(what) + ": NaN argument");
}

}  // namespace

// ---------------------------------------------------------------------------
// GeneralBivariateModel

GeneralBivariateModel::GeneralBivariateModel(BaselineModel baseline, MarginalModel marginal1,
                                             MarginalModel marginal2, double theta)
    : baseline_(std::move(baseline)),
      m1_(std::move(marginal1)),
      m2_(std::move(marginal2)),
      theta_(theta) {
    if (!(theta_ > 0.0) || !std::isfinite(theta_)) {
        throw ModelError("theta must be positive and finite");
    }
    for (const auto* m : {&m1_, &m2_}) {
        if (m->left_endpoint() != baseline_.left_endpoint()) {
            std::ostringstream msg;
            msg << "marginal '" << m->describe() << "' starts at " << m->left_endpoint()
                << " but baseline '" << baseline_.describe() << "' starts at "
                << baseline_.left_endpoint();
            throw ModelError(msg.str());
        }
    }
}

const MarginalModel& GeneralBivariateModel::marginal(int index) const {
    if (index == 1) return m1_;
    if (index == 2) return m2_;
    throw DomainError("marginal index must be 1 or 2");
}

double GeneralBivariateModel::marginal_hazard_of_gap(int index, double gap) const {
    const MarginalModel& m = marginal(index);
    if (gap <= 0.0) return 0.0;
    if (same_ph_baseline(m, baseline_)) return m.delta() * gap;
    return m.cumulative_hazard(baseline_.inverse_cumulative_hazard(gap));
}

double GeneralBivariateModel::cumulative_hazard(double x1, double x2) const {
    require_not_nan(x1, x2, "survival");
    if (x1 == kInf || x2 == kInf) return kInf;
    const double left = baseline_.left_endpoint();
    x1 = std::max(x1, left);
    x2 = std::max(x2, left);

    const bool first = x1 >= x2;
    const double hi = first ? x1 : x2;
    const double lo = first ? x2 : x1;
    const MarginalModel& m = first ? m1_ : m2_;
    double gap_hazard = 0.0;
    if (hi != lo) {
        if (same_ph_baseline(m, baseline_)) {
            gap_hazard = m.delta() * (baseline_.cumulative_hazard(hi) -
                                      baseline_.cumulative_hazard(lo));
        } else {
            gap_hazard = m.cumulative_hazard(baseline_.difference(hi, lo));
        }
    }
    return gap_hazard + theta_ * baseline_.cumulative_hazard(lo);
}

double GeneralBivariateModel::survival(double x1, double x2) const {
    return std::exp(-cumulative_hazard(x1, x2));
}

// ---------------------------------------------------------------------------
// PHBivariateModel

PHBivariateModel::PHBivariateModel(BaselineModel baseline, double theta1, double theta2,
                                   double theta3)
    : baseline_(std::move(baseline)), t1_(theta1), t2_(theta2), t3_(theta3) {
    if (!(t1_ > 0.0) || !(t2_ > 0.0) || !(t3_ >= 0.0) || !std::isfinite(t1_ + t2_ + t3_)) {
        throw ModelError("PH model needs theta1, theta2 > 0 and theta3 >= 0");
    }
}

PHBivariateModel PHBivariateModel::from_deltas(BaselineModel baseline, double delta1,
                                               double delta2, double theta) {
    if (!(delta1 > 0.0) || !(delta2 > 0.0) || !(theta > 0.0)) {
        throw ModelError("delta1, delta2 and theta must be positive");
    }
    if (!(delta1 < theta) || !(delta2 < theta)) {
        throw ModelError("PH model needs delta_i < theta");
    }
    const double sum = delta1 + delta2;
    if (sum < theta || sum > 2.0 * theta) {
        std::ostringstream msg;
        msg << "PH model needs theta <= delta1 + delta2 <= 2 theta (theta=" << theta
            << ", delta1+delta2=" << sum << ")";
        throw ModelError(msg.str());
    }
    return {std::move(baseline), theta - delta2, theta - delta1, sum - theta};
}

double PHBivariateModel::cumulative_hazard(double x1, double x2) const {
    require_not_nan(x1, x2, "survival");
    if (x1 == kInf || x2 == kInf) return kInf;
    const double r1 = baseline_.cumulative_hazard(x1);
    const double r2 = baseline_.cumulative_hazard(x2);
    if (x1 >= x2) return delta1() * r1 + t2_ * r2;
    return t1_ * r1 + delta2() * r2;
}

double PHBivariateModel::survival(double x1, double x2) const {
    return std::exp(-cumulative_hazard(x1, x2));
}

GeneralBivariateModel PHBivariateModel::to_general() const {
    return {baseline_, MarginalModel::proportional_hazard(baseline_, delta1()),
            MarginalModel::proportional_hazard(baseline_, delta2()), theta()};
}

double general_survival(const GeneralBivariateModel& model, double x1, double x2) {
    return model.survival(x1, x2);
}

double ph_survival(const PHBivariateModel& model, double x1, double x2) {
    return model.survival(x1, x2);
}

// ---------------------------------------------------------------------------
// Decomposition

Decomposition decompose(const GeneralBivariateModel& model) {
    Decomposition out;
    const LimitResult u1 = limit_hazard_ratio(model.marginal(1), model.baseline());
    const LimitResult u2 = limit_hazard_ratio(model.marginal(2), model.baseline());
    if (u1.divergent || u2.divergent) {
        std::ostringstream msg;
        msg << "diagonal hazard-ratio limit diverges for marginal "
            << (u1.divergent ? model.marginal(1).describe() : model.marginal(2).describe())
            << " over baseline " << model.baseline().describe();
        throw DecompositionError(msg.str());
    }
    out.u1 = u1.value;
    out.u2 = u2.value;
    out.alpha = 2.0 - (out.u1 + out.u2) / model.theta();
    out.singular_mass = 1.0 - out.alpha;
    out.valid = out.alpha >= -1e-12 && out.alpha <= 1.0 + 1e-12;
    return out;
}

Decomposition decompose(const PHBivariateModel& model) {
    Decomposition out;
    out.u1 = model.delta1();
    out.u2 = model.delta2();
    out.alpha = (model.theta1() + model.theta2()) / model.theta();
    out.singular_mass = model.theta3() / model.theta();
    out.valid = true;
    return out;
}

// ---------------------------------------------------------------------------
// Densities

MixedPartial mixed_partial(const std::function<double(double, double)>& surface, double x1,
                           double x2, double left) {
    const double base = std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));
    double h1 = base * std::max(1.0, std::abs(x1));
    double h2 = base * std::max(1.0, std::abs(x2));
    const double gap = std::abs(x1 - x2);
    if (h1 + h2 > 0.5 * gap) {
        const double shrink = 0.5 * gap / (h1 + h2);
        h1 *= shrink;
        h2 *= shrink;
    }
    if (x1 - h1 < left) h1 = 0.5 * (x1 - left);
    if (x2 - h2 < left) h2 = 0.5 * (x2 - left);
    if (!(h1 > 0.0) || !(h2 > 0.0)) {
        throw DomainError("mixed partial: no finite-difference stencil fits at this point");
    }
    const double x1p = x1 + h1, x1m = x1 - h1;
    const double x2p = x2 + h2, x2m = x2 - h2;
    const double fpp = surface(x1p, x2p);
    const double fpm = surface(x1p, x2m);
    const double fmp = surface(x1m, x2p);
    const double fmm = surface(x1m, x2m);
    const double area = (x1p - x1m) * (x2p - x2m);
    return {(fpp - fpm - fmp + fmm) / area,
            (std::abs(fpp) + std::abs(fpm) + std::abs(fmp) + std::abs(fmm)) / area};
}

double ac_density(const GeneralBivariateModel& model, const Decomposition& parts, double x1,
                  double x2) {
    require_not_nan(x1, x2, "ac_density");
    if (x1 == x2) throw DomainError("ac_density: undefined on the diagonal");
    if (!(parts.alpha > 1e-12)) {
        throw DomainError("ac_density: the model is purely singular (alpha = 0)");
    }
    const auto mp = mixed_partial(
        [&model](double a, double b) { return model.survival(a, b); }, x1, x2,
        model.baseline().left_endpoint());
    if (mp.value < 0.0 && -mp.value <= 1e-9 * mp.scale) return 0.0;
    return mp.value / parts.alpha;
}

double ac_density(const GeneralBivariateModel& model, double x1, double x2) {
    return ac_density(model, decompose(model), x1, x2);
}

double ac_density_in_wedge(const PHBivariateModel& model, Wedge wedge, double x1, double x2) {
    const auto& b = model.baseline();
    const double theta = model.theta();
    const double norm = theta / (model.theta1() + model.theta2());
    const double r1 = b.hazard(x1);
    const double r2 = b.hazard(x2);
    const double h1 = b.cumulative_hazard(x1);
    const double h2 = b.cumulative_hazard(x2);
    // f0 = r0 * F0, so F0^(k-1) f0 = r0 F0^k.
    if (wedge == Wedge::FirstLarger) {
        const double d1 = model.delta1();
        return norm * d1 * (theta - d1) * r1 * r2 * std::exp(-d1 * h1 - (theta - d1) * h2);
    }
    const double d2 = model.delta2();
    return norm * d2 * (theta - d2) * r1 * r2 * std::exp(-(theta - d2) * h1 - d2 * h2);
}

double ac_density(const PHBivariateModel& model, double x1, double x2) {
    require_not_nan(x1, x2, "ac_density");
    if (x1 == x2) throw DomainError("ac_density: undefined on the diagonal");
    if (x1 == kInf || x2 == kInf) return 0.0;
    const double left = model.baseline().left_endpoint();
    if (x1 < left || x2 < left) throw DomainError("ac_density: point below the support");
    return ac_density_in_wedge(model, x1 > x2 ? Wedge::FirstLarger : Wedge::SecondLarger, x1,
                               x2);
}

double ac_density_transformed(const GeneralBivariateModel& model, Wedge wedge, double w,
                              double s) {
    const int index = wedge == Wedge::FirstLarger ? 1 : 2;
    const auto& b = model.baseline();
    const auto& m = model.marginal(index);
    const double theta = model.theta();
    const double weight = std::exp(-theta * w - model.marginal_hazard_of_gap(index, s));
    if (weight == 0.0) return 0.0;
    const double d = b.inverse_cumulative_hazard(s);
    if (!std::isfinite(d)) return 0.0;
    const double r0 = b.hazard(d);
    const double rho = m.hazard(d) / r0;
    double drho_ds = 0.0;
    if (!same_ph_baseline(m, b)) {
        drho_ds = (m.hazard_derivative(d) - rho * b.hazard_derivative(d)) / (r0 * r0);
    }
    return weight * (rho * (theta - rho) + drho_ds);
}

// ---------------------------------------------------------------------------
// Rectangles and the singular part

double rectangle_probability(const GeneralBivariateModel& model, double a1, double b1, double a2,
                             double b2) {
    if (std::isnan(a1) || std::isnan(b1) || std::isnan(a2) || std::isnan(b2)) {
        throw DomainError("rectangle_probability: NaN bound");
    }
    if (a1 > b1 || a2 > b2) throw DomainError("rectangle_probability: lower bound above upper");
    if (a1 == b1 || a2 == b2) return 0.0;
    return model.survival(a1, a2) - model.survival(b1, a2) - model.survival(a1, b2) +
           model.survival(b1, b2);
}

double rectangle_probability(const PHBivariateModel& model, double a1, double b1, double a2,
                             double b2) {
    if (std::isnan(a1) || std::isnan(b1) || std::isnan(a2) || std::isnan(b2)) {
        throw DomainError("rectangle_probability: NaN bound");
    }
    if (a1 > b1 || a2 > b2) throw DomainError("rectangle_probability: lower bound above upper");
    if (a1 == b1 || a2 == b2) return 0.0;
    return model.survival(a1, a2) - model.survival(b1, a2) - model.survival(a1, b2) +
           model.survival(b1, b2);
}

namespace {

double diagonal_survival(const BaselineModel& baseline, double theta, double x) {
    if (std::isnan(x)) throw DomainError("singular_survival: NaN argument");
    if (x == kInf) return 0.0;
    return std::exp(-theta * baseline.cumulative_hazard(x));
}

}  // namespace

double singular_survival(const GeneralBivariateModel& model, double x) {
    const Decomposition parts = decompose(model);
    if (!(parts.singular_mass > 1e-12)) {
        throw DomainError("singular_survival: the model has no singular component");
    }
    return diagonal_survival(model.baseline(), model.theta(), x);
}

double singular_survival(const PHBivariateModel& model, double x) {
    if (!(model.theta3() > 0.0)) {
        throw DomainError("singular_survival: the model has no singular component");
    }
    return diagonal_survival(model.baseline(), model.theta(), x);
}

// ---------------------------------------------------------------------------
// Wedge masses

namespace {

// Maps (u, v) in the unit square to w = u / (1 - u), s = v / (1 - v) and
// integrates f(w, s) times the Jacobian.
numerics::QuadratureResult integrate_wedge(const std::function<double(double, double)>& f) {
    auto integrand = [&f](double u, double v) {
        const double cu = 1.0 - u;
        const double cv = 1.0 - v;
        const double w = u / cu;
        const double s = v / cv;
        const double value = f(w, s);
        return value == 0.0 ? 0.0 : value / (cu * cu * cv * cv);
    };
    return numerics::integrate_unit_square(integrand, 1e-9, 1e-8);
}

}  // namespace

WedgeMasses wedge_masses(const PHBivariateModel& model) {
    const auto& b = model.baseline();
    const Decomposition parts = decompose(model);
    WedgeMasses out;
    out.singular = parts.singular_mass;
    for (Wedge wedge : {Wedge::FirstLarger, Wedge::SecondLarger}) {
        auto f = [&](double w, double s) {
            const double lo = b.inverse_cumulative_hazard(w);
            const double hi = b.inverse_cumulative_hazard(w + s);
            if (!std::isfinite(hi)) return 0.0;
            const double x1 = wedge == Wedge::FirstLarger ? hi : lo;
            const double x2 = wedge == Wedge::FirstLarger ? lo : hi;
            const double jac = b.hazard(x1) * b.hazard(x2);
            if (jac == 0.0 || !std::isfinite(jac)) return 0.0;
            const double density = parts.alpha * ac_density_in_wedge(model, wedge, x1, x2);
            return density == 0.0 ? 0.0 : density / jac;
        };
        const auto r = integrate_wedge(f);
        (wedge == Wedge::FirstLarger ? out.first_larger : out.second_larger) = r.value;
        out.quadrature_error += r.error;
    }
    return out;
}

WedgeMasses wedge_masses(const GeneralBivariateModel& model) {
    const Decomposition parts = decompose(model);
    WedgeMasses out;
    out.singular = parts.singular_mass;
    for (Wedge wedge : {Wedge::FirstLarger, Wedge::SecondLarger}) {
        auto f = [&](double w, double s) { return ac_density_transformed(model, wedge, w, s); };
        const auto r = integrate_wedge(f);
        (wedge == Wedge::FirstLarger ? out.first_larger : out.second_larger) = r.value;
        out.quadrature_error += r.error;
    }
    return out;
}

}  // namespace semibiv
