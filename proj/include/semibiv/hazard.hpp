#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace semibiv {

// A user-supplied hazard rate r(x) >= 0. `breakpoints` lists abscissae where
// r is not smooth (table knots); quadrature splits there.
struct HazardFunction {
    std::function<double(double)> rate;
    std::vector<double> breakpoints;
    std::string label = "custom";
};

// Piecewise-linear interpolation of (x, hazard) knots. Constant beyond the
// last knot; undefined below the first.
HazardFunction piecewise_linear_hazard(std::vector<double> xs, std::vector<double> hazards,
                                       std::string label = "table");

// Reads a two-column CSV `x,hazard` (optional header line).
// Throws ModelError on malformed content, std::ios_base::failure on I/O errors.
HazardFunction load_hazard_csv(const std::string& path);

// Cumulative hazard R(x) = integral of r over [left, x], memoized on a fixed
// monotone knot lattice so results do not depend on query order. Safe to
// share between threads.
class CumulativeHazard {
public:
    CumulativeHazard(HazardFunction hazard, double left_endpoint);

    double left_endpoint() const noexcept { return left_; }
    const HazardFunction& hazard() const noexcept { return hazard_; }

    // r(x); throws ModelError on a negative or non-finite value.
    double rate(double x) const;
    double operator()(double x) const;
    // Smallest x with R(x) = y (relative tolerance 1e-12 on R).
    double inverse(double y) const;
    // R(x) at the largest lattice knot probed so far is below `y` even at the
    // end of the lattice: the hazard integral is bounded.
    bool reaches(double y) const;

private:
    static constexpr int kMaxKnots = 1200;

    double knot(int k) const;
    double segment_integral(double a, double b) const;
    // Extends the cache through knot k; returns R(knot k).
    double cached(int k) const;
    int segment_of(double x) const;

    HazardFunction hazard_;
    double left_;
    mutable std::mutex mutex_;
    mutable std::vector<double> cumulative_{0.0};
};

}  // namespace semibiv
