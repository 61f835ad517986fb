#include "semibiv/numerics.hpp"

#include "semibiv/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semibiv::numerics {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, unsigned max_depth) {
    if (a == b) return {};
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double error = 0.0;
    double l1 = 0.0;
    // Boost refines on a relative criterion only and its error estimate has a
    // rounding floor, so a tiny integral can bisect down to max_depth chasing
    // a target below that floor. A single-panel pass settles those cases and
    // converts the absolute target into a relative one for the adaptive pass.
    double value = GK::integrate(f, a, b, 0, rel_tol, &error, &l1);
    if (std::isfinite(value) && error <= std::max(abs_tol, rel_tol * std::abs(value))) {
        return {value, error};
    }
    double target = std::max(rel_tol, 1e-12);
    if (l1 > 0.0 && std::isfinite(l1)) target = std::max(target, std::min(abs_tol / l1, 1e-2));
    value = GK::integrate(f, a, b, max_depth, target, &error, &l1);
    if (!std::isfinite(value) || error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (std::isfinite(value) && error <= std::max(abs_tol, 1e-12 * std::abs(value))) {
            return {value, error};
        }
        std::ostringstream msg;
        msg << "adaptive quadrature did not converge on [" << a << ", " << b
            << "]: estimate " << value << ", error " << error;
        throw NumericError(msg.str(), {value, error});
    }
    return {value, error};
}

QuadratureResult integrate_singular(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol) {
    if (a == b) return {};
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    const double value = integrator.integrate(f, a, b, rel_tol, &error, &l1, &levels);
    if (!std::isfinite(value) || error > std::max(abs_tol, rel_tol * std::abs(value))) {
        std::ostringstream msg;
        msg << "tanh-sinh quadrature did not converge on [" << a << ", " << b
            << "]: estimate " << value << ", error " << error;
        throw NumericError(msg.str(), {value, error});
    }
    return {value, error};
}

QuadratureResult integrate_unit_square(const std::function<double(double, double)>& f,
                                       double abs_tol, double rel_tol) {
    double inner_error_sum = 0.0;
    auto outer = [&](double u) {
        auto inner = [&](double v) { return f(u, v); };
        const auto r = integrate(inner, 0.0, 1.0, abs_tol * 0.1, rel_tol * 0.1, 20);
        inner_error_sum = std::max(inner_error_sum, r.error);
        return r.value;
    };
    auto r = integrate(outer, 0.0, 1.0, abs_tol, rel_tol, 20);
    r.error += inner_error_sum;
    return r;
}

double solve_increasing(const std::function<double(double)>& f, double lo, double hi,
                        double f_tol, int max_iter) {
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo > 0.0 || f_hi < 0.0) {
        std::ostringstream msg;
        msg << "root not bracketed: f(" << lo << ")=" << f_lo << ", f(" << hi << ")=" << f_hi;
        throw NumericError(msg.str(), {lo, f_lo, hi, f_hi});
    }
    if (std::abs(f_lo) <= f_tol) return lo;
    if (std::abs(f_hi) <= f_tol) return hi;

    int stale_side = 0;  // -1: lo kept twice, +1: hi kept twice
    for (int iter = 0; iter < max_iter; ++iter) {
        const double width = hi - lo;
        double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if (!(x > lo && x < hi)) x = lo + 0.5 * width;
        double fx = f(x);
        if (std::abs(fx) <= f_tol) return x;

        if (fx < 0.0) {
            lo = x;
            f_lo = fx;
            if (stale_side == 1) f_hi *= 0.5;
            stale_side = 1;
        } else {
            hi = x;
            f_hi = fx;
            if (stale_side == -1) f_lo *= 0.5;
            stale_side = -1;
        }
        if (hi - lo > 0.5 * width) {
            const double mid = lo + 0.5 * (hi - lo);
            const double fm = f(mid);
            if (std::abs(fm) <= f_tol) return mid;
            if (fm < 0.0) {
                lo = mid;
                f_lo = fm;
            } else {
                hi = mid;
                f_hi = fm;
            }
            stale_side = 0;
        }
        if (std::nextafter(lo, hi) >= hi) return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
    }
    throw NumericError("bracketed root search exceeded the iteration limit", {lo, hi});
}

double central_derivative(const std::function<double(double)>& f, double x,
                          double lower_bound) {
    double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x));
    if (x - h < lower_bound) {
        h = 0.5 * (x - lower_bound);
        if (!(h > 1e-10 * std::max(1.0, std::abs(x)))) return std::numeric_limits<double>::quiet_NaN();
    }
    const double xp = x + h;
    const double xm = x - h;
    return (f(xp) - f(xm)) / (xp - xm);
}

double central_derivative_within(const std::function<double(double)>& f, double x, double lo,
                                 double hi) {
    const double scale = std::max(1.0, std::abs(x));
    double h = std::cbrt(std::numeric_limits<double>::epsilon()) * scale;
    h = std::min({h, 0.5 * (x - lo), 0.5 * (hi - x)});
    if (!(h > 1e-10 * scale)) return std::numeric_limits<double>::quiet_NaN();
    const double xp = x + h;
    const double xm = x - h;
    return (f(xp) - f(xm)) / (xp - xm);
}

}  // namespace semibiv::numerics
