#pragma once

#include "semibiv/baseline.hpp"
#include "semibiv/marginal.hpp"

#include <array>
#include <functional>

namespace semibiv {

// Off-diagonal half-planes of the support.
enum class Wedge {
    FirstLarger,   // x1 > x2
    SecondLarger,  // x1 < x2
};

/// Mixture decomposition into an absolutely continuous part (weight alpha)
/// and a singular part on the diagonal.
struct Decomposition {
    double alpha = 1.0;
    double u1 = 0.0;
    double u2 = 0.0;
    double singular_mass = 0.0;
    // 0 <= alpha <= 1; a false value marks a function that is not a survival
    // function, the numbers are still reported.
    bool valid = true;
};

/// Solution of the functional equation built from a baseline, two marginals
/// and theta:
///
///   F(x1, x2) = F1(x1 (-) x2) * F0(x2)^theta   for x1 >= x2
///   F(x1, x2) = F2(x2 (-) x1) * F0(x1)^theta   for x1 <= x2
///
/// Nothing here guarantees the result is a distribution; see validity.hpp.
class GeneralBivariateModel {
public:
    GeneralBivariateModel(BaselineModel baseline, MarginalModel marginal1,
                          MarginalModel marginal2, double theta);

    const BaselineModel& baseline() const noexcept { return baseline_; }
    // index is 1 or 2.
    const MarginalModel& marginal(int index) const;
    double theta() const noexcept { return theta_; }

    // -ln F(x1, x2). Arguments below the left endpoint are clamped to it;
    // +inf in either coordinate gives +inf.
    double cumulative_hazard(double x1, double x2) const;
    double survival(double x1, double x2) const;

    // H_i(x_i (-) x_j) computed from the gap R0(x_i) - R0(x_j) >= 0.
    double marginal_hazard_of_gap(int index, double gap) const;

private:
    BaselineModel baseline_;
    MarginalModel m1_;
    MarginalModel m2_;
    double theta_;
};

/// Proportional-hazards member with theta1, theta2 > 0 and theta3 >= 0
/// (theta3 = 0 is the independence case with no diagonal mass):
///
///   F(x1, x2) = F0(x1)^(theta1+theta3) F0(x2)^theta2        x1 >= x2
///   F(x1, x2) = F0(x1)^theta1 F0(x2)^(theta2+theta3)        x1 <= x2
class PHBivariateModel {
public:
    PHBivariateModel(BaselineModel baseline, double theta1, double theta2, double theta3);

    // (delta1, delta2, theta) form; requires delta_i < theta and
    // theta <= delta1 + delta2 <= 2 theta.
    static PHBivariateModel from_deltas(BaselineModel baseline, double delta1, double delta2,
                                        double theta);

    const BaselineModel& baseline() const noexcept { return baseline_; }
    double theta1() const noexcept { return t1_; }
    double theta2() const noexcept { return t2_; }
    double theta3() const noexcept { return t3_; }
    double delta1() const noexcept { return t1_ + t3_; }
    double delta2() const noexcept { return t2_ + t3_; }
    double theta() const noexcept { return t1_ + t2_ + t3_; }

    double cumulative_hazard(double x1, double x2) const;
    double survival(double x1, double x2) const;

    GeneralBivariateModel to_general() const;

private:
    BaselineModel baseline_;
    double t1_;
    double t2_;
    double t3_;
};

double general_survival(const GeneralBivariateModel& model, double x1, double x2);
double ph_survival(const PHBivariateModel& model, double x1, double x2);

Decomposition decompose(const GeneralBivariateModel& model);
Decomposition decompose(const PHBivariateModel& model);

/// Mixed second difference of `surface` at an off-diagonal point with
/// step eps^(1/4) max(1, |x|) per axis, shrunk so the stencil stays inside the
/// wedge and above `left`.
struct MixedPartial {
    double value = 0.0;
    // Magnitude of the stencil terms, sum |F(corner)| / (4 h1 h2).
    double scale = 0.0;
};
MixedPartial mixed_partial(const std::function<double(double, double)>& surface, double x1,
                           double x2, double left);

/// Density f_a of the absolutely continuous part (normalised by alpha).
/// General models: mixed finite difference of the survival divided by alpha;
/// negatives within 1e-9 of the stencil scale are numeric noise and returned
/// as 0, larger negatives are returned as-is (invalid model).
/// Throws DomainError on the diagonal or when alpha <= 0.
double ac_density(const GeneralBivariateModel& model, double x1, double x2);
double ac_density(const GeneralBivariateModel& model, const Decomposition& parts, double x1,
                  double x2);
double ac_density(const PHBivariateModel& model, double x1, double x2);
// Closed-form PH density on a given wedge, no diagonal check.
double ac_density_in_wedge(const PHBivariateModel& model, Wedge wedge, double x1, double x2);

/// Probability of (a1, b1] x (a2, b2]; bounds may be +inf.
double rectangle_probability(const GeneralBivariateModel& model, double a1, double b1, double a2,
                             double b2);
double rectangle_probability(const PHBivariateModel& model, double a1, double b1, double a2,
                             double b2);

// Diagonal component F_s(x, x) = F0(x)^theta.
double singular_survival(const GeneralBivariateModel& model, double x);
double singular_survival(const PHBivariateModel& model, double x);

/// alpha f_a expressed in the wedge coordinates w = R0(min), s = R0(max) - R0(min)
/// (Jacobian included). With d = max (-) min and rho = r_i(d) / r0(d):
///
///   exp(-theta w) F_i(d) [rho (theta - rho) + d rho / d s]
///
/// Uses analytic hazard derivatives where the marginal has them.
double ac_density_transformed(const GeneralBivariateModel& model, Wedge wedge, double w,
                              double s);

struct WedgeMasses {
    double first_larger = 0.0;   // integral of alpha f_a over x1 > x2
    double second_larger = 0.0;  // integral of alpha f_a over x1 < x2
    double singular = 0.0;       // from the decomposition
    double quadrature_error = 0.0;
};

// Adaptive 2-D quadrature of alpha f_a over each wedge in the coordinates
// w = R0(min), s = R0(max) - R0(min), compactified to the unit square.
WedgeMasses wedge_masses(const PHBivariateModel& model);
WedgeMasses wedge_masses(const GeneralBivariateModel& model);

}  // namespace semibiv
