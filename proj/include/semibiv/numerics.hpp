#pragma once

#include <functional>

namespace semibiv::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive Gauss-Kronrod (7/15) on a finite interval [a, b].
// Throws NumericError when the error estimate stays above
// max(abs_tol, rel_tol * |value|); relative targets below 1e-12 are met
// only as far as the estimator's rounding floor allows.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, double rel_tol = 1e-12,
                           unsigned max_depth = 20);

// Double-exponential (tanh-sinh) quadrature; copes with integrable endpoint
// singularities such as x^(-1/2). Same error contract as integrate().
QuadratureResult integrate_singular(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-10, double rel_tol = 1e-12);

// Nested adaptive quadrature over the unit square [0,1]^2.
QuadratureResult integrate_unit_square(const std::function<double(double, double)>& f,
                                       double abs_tol = 1e-10, double rel_tol = 1e-11);

// Root of a monotone increasing f on the bracket [lo, hi] (f(lo) <= 0 <= f(hi)).
// Illinois-modified regula falsi with a bisection fallback whenever the secant
// step fails to shrink the bracket by half. Stops when |f| <= f_tol or the
// bracket collapses to adjacent doubles.
double solve_increasing(const std::function<double(double)>& f, double lo, double hi,
                        double f_tol, int max_iter = 200);

// Central first derivative with a step that keeps the stencil at or above
// lower_bound. Returns NaN if no valid stencil exists.
double central_derivative(const std::function<double(double)>& f, double x,
                          double lower_bound);

// As above with the stencil kept inside [lo, hi].
double central_derivative_within(const std::function<double(double)>& f, double x, double lo,
                                 double hi);

}  // namespace semibiv::numerics
