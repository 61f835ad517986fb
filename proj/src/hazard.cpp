#include "semibiv/hazard.hpp"

#include "semibiv/errors.hpp"
#include "semibiv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace semibiv {

HazardFunction piecewise_linear_hazard(std::vector<double> xs, std::vector<double> hazards,
                                       std::string label) {
    if (xs.size() != hazards.size() || xs.size() < 2) {
        throw ModelError("hazard table needs at least two (x, hazard) rows");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(hazards[i])) {
            throw ModelError("hazard table contains a non-finite value");
        }
        if (hazards[i] < 0.0) throw ModelError("hazard table contains a negative hazard");
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            throw ModelError("hazard table abscissae must be strictly increasing");
        }
    }
    HazardFunction fn;
    fn.breakpoints = xs;
    fn.label = std::move(label);
    fn.rate = [xs = std::move(xs), hs = std::move(hazards)](double x) {
        if (x >= xs.back()) return hs.back();
        if (x <= xs.front()) return hs.front();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return hs[i - 1] + w * (hs[i] - hs[i - 1]);
    };
    return fn;
}

HazardFunction load_hazard_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open hazard table '" + path + "'");
    }
    std::vector<double> xs;
    std::vector<double> hs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ModelError(path + ":" + std::to_string(line_no) + ": expected 'x,hazard'");
        }
        std::istringstream xs_in(line.substr(0, comma));
        std::istringstream hs_in(line.substr(comma + 1));
        xs_in.imbue(std::locale::classic());
        hs_in.imbue(std::locale::classic());
        double x = 0.0;
        double h = 0.0;
        if (!(xs_in >> x) || !(hs_in >> h)) {
            if (line_no == 1 && xs.empty()) continue;  // header
            throw ModelError(path + ":" + std::to_string(line_no) + ": not a number");
        }
        xs.push_back(x);
        hs.push_back(h);
    }
    return piecewise_linear_hazard(std::move(xs), std::move(hs), "table:" + path);
}

CumulativeHazard::CumulativeHazard(HazardFunction hazard, double left_endpoint)
    : hazard_(std::move(hazard)), left_(left_endpoint) {
    if (!hazard_.rate) throw ModelError("hazard function handle is empty");
    if (!std::isfinite(left_)) throw ModelError("left endpoint must be finite");
    std::sort(hazard_.breakpoints.begin(), hazard_.breakpoints.end());
}

double CumulativeHazard::rate(double x) const {
    const double r = hazard_.rate(x);
    if (std::isnan(r) || r < 0.0) {
        std::ostringstream msg;
        msg << "hazard '" << hazard_.label << "' is negative or NaN at x=" << x << " (" << r
            << ")";
        throw ModelError(msg.str());
    }
    return r;
}

// Lattice: quarter-unit steps up to left+16, then 16 knots per doubling.
double CumulativeHazard::knot(int k) const {
    if (k <= 64) return left_ + 0.25 * k;
    return left_ + 16.0 * std::exp2((k - 64) / 16.0);
}

int CumulativeHazard::segment_of(double x) const {
    const double offset = x - left_;
    int k = offset <= 16.0 ? static_cast<int>(offset / 0.25)
                           : 64 + static_cast<int>(16.0 * std::log2(offset / 16.0));
    k = std::clamp(k, 0, kMaxKnots - 1);
    while (k > 0 && knot(k) > x) --k;
    while (k + 1 < kMaxKnots && knot(k + 1) <= x) ++k;
    return k;
}

double CumulativeHazard::segment_integral(double a, double b) const {
    if (!(b > a)) return 0.0;
    auto f = [this](double x) { return rate(x); };
    // Hazards may blow up (integrably) at the left endpoint.
    auto piece = [&](double lo, double hi) {
        try {
            return numerics::integrate(f, lo, hi, 1e-10, 1e-13).value;
        } catch (const NumericError&) {
            return numerics::integrate_singular(f, lo, hi, 1e-10, 1e-12).value;
        }
    };
    double total = 0.0;
    double lo = a;
    const auto& bp = hazard_.breakpoints;
    for (auto it = std::upper_bound(bp.begin(), bp.end(), a); it != bp.end() && *it < b; ++it) {
        total += piece(lo, *it);
        lo = *it;
    }
    total += piece(lo, b);
    return total;
}

double CumulativeHazard::cached(int k) const {
    std::lock_guard lock(mutex_);
    while (static_cast<int>(cumulative_.size()) <= k) {
        const int j = static_cast<int>(cumulative_.size());
        cumulative_.push_back(cumulative_.back() + segment_integral(knot(j - 1), knot(j)));
    }
    return cumulative_[static_cast<std::size_t>(k)];
}

double CumulativeHazard::operator()(double x) const {
    if (!std::isfinite(x)) {
        if (x > 0) return std::numeric_limits<double>::infinity();
        throw DomainError("cumulative hazard of a non-finite argument");
    }
    if (x <= left_) return 0.0;
    const int k = segment_of(x);
    return cached(k) + segment_integral(knot(k), x);
}

bool CumulativeHazard::reaches(double y) const {
    if (y <= 0.0) return true;
    for (int k = 1;; k = std::min(2 * k, kMaxKnots - 1)) {
        if (cached(k) >= y) return true;
        if (k == kMaxKnots - 1) return false;
    }
}

double CumulativeHazard::inverse(double y) const {
    if (std::isnan(y) || y < 0.0) throw DomainError("inverse cumulative hazard needs y >= 0");
    if (y == 0.0) return left_;
    if (std::isinf(y)) return std::numeric_limits<double>::infinity();

    // Expansion search for the upper bracket on the knot lattice.
    int hi = 1;
    while (cached(hi) < y) {
        if (hi == kMaxKnots - 1) {
            std::ostringstream msg;
            msg << "cumulative hazard of '" << hazard_.label << "' stays below " << y;
            throw NumericError(msg.str(), {cached(hi)});
        }
        hi = std::min(2 * hi, kMaxKnots - 1);
    }
    int lo = hi / 2;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (cached(mid) < y ? lo : hi) = mid;
    }
    const double base = cached(lo);
    const double a = knot(lo);
    auto g = [&](double x) { return base + segment_integral(a, x) - y; };
    return numerics::solve_increasing(g, a, knot(hi), 1e-12 * y);
}

}  // namespace semibiv
