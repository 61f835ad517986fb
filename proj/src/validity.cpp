#include "semibiv/validity.hpp"

#include "semibiv/errors.hpp"
#include "semibiv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace semibiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Running minimum of a margin; ties go to the lexicographically smaller point
// so the result does not depend on traversal order.
struct Worst {
    double margin = kInf;
    std::array<double, 2> point{kNaN, kNaN};
    bool any = false;

    // Ties go to the x1 > x2 wedge first, then to the lexicographically
    // smaller point, so symmetric models report a stable witness.
    void offer(double m, double x1, double x2) {
        const auto key = [](double a, double b) { return std::make_tuple(a < b, a, b); };
        if (!any || m < margin || (m == margin && key(x1, x2) < key(point[0], point[1]))) {
            margin = m;
            point = {x1, x2};
            any = true;
        }
    }
};

// Calls f(i, x1, x2) for every off-diagonal grid point, once per wedge, where
// i is the index of the larger coordinate.
template <class F>
void for_each_wedge_point(const BaselineModel& b, const GridSpec& grid, F&& f) {
    const auto& k = grid.knots;
    std::vector<double> r(k.size());
    for (std::size_t a = 0; a < k.size(); ++a) r[a] = b.cumulative_hazard(k[a]);
    for (std::size_t p = 0; p < k.size(); ++p) {
        for (std::size_t q = 0; q < k.size(); ++q) {
            if (r[p] - r[q] < grid.wedge_margin || r[p] - r[q] <= 0.0) continue;
            f(1, k[p], k[q]);
            f(2, k[q], k[p]);
        }
    }
}

ConditionResult from_worst(std::string id, std::string description, const Worst& worst,
                           bool failed) {
    ConditionResult c;
    c.id = std::move(id);
    c.description = std::move(description);
    c.margin = worst.margin;
    c.witness = worst.point;
    c.status = failed ? ConditionStatus::Fail : ConditionStatus::Pass;
    return c;
}

void stamp(ValidationReport& report, const GridSpec& grid, const Tolerance& tol) {
    report.grid_knots = grid.knots;
    report.wedge_margin = grid.wedge_margin;
    report.tolerance = tol;
}

// theta <= s <= 2 theta, with the margin as the smaller slack.
ConditionResult weight_sum_condition(std::string id, std::string description, double sum,
                                     double theta, double left, const Tolerance& tol) {
    ConditionResult c;
    c.id = std::move(id);
    c.description = std::move(description);
    c.witness = {left, left};
    c.margin = std::min(sum - theta, 2.0 * theta - sum);
    const bool ok = tol.holds(theta, sum) && tol.holds(sum, 2.0 * theta);
    c.status = ok ? ConditionStatus::Pass : ConditionStatus::Fail;
    std::ostringstream note;
    note.imbue(std::locale::classic());
    note.precision(12);
    note << "sum " << sum << ", theta " << theta;
    c.note = note.str();
    return c;
}

ConditionResult inconclusive(std::string id, std::string description, std::string note) {
    ConditionResult c;
    c.id = std::move(id);
    c.description = std::move(description);
    c.status = ConditionStatus::Inconclusive;
    c.note = std::move(note);
    c.margin = kNaN;
    return c;
}

// Grid condition evaluated pointwise; `eval` returns the inequality or throws
// / returns non-finite values to mark the point as skipped.
template <class Eval>
ConditionResult pointwise_condition(const std::string& id, const std::string& description,
                                    const BaselineModel& b, const GridSpec& grid,
                                    const Tolerance& tol, ValidationReport& report,
                                    Eval&& eval, bool require_nonnegative = false) {
    Worst worst;
    bool failed = false;
    std::size_t skipped = 0;
    std::size_t evaluated = 0;
    for_each_wedge_point(b, grid, [&](int i, double x1, double x2) {
        Inequality q;
        try {
            q = eval(i, x1, x2);
        } catch (const NumericError&) {
            ++skipped;
            return;
        } catch (const DomainError&) {
            ++skipped;
            return;
        }
        if (!std::isfinite(q.lhs) || !std::isfinite(q.rhs)) {
            ++skipped;
            return;
        }
        ++evaluated;
        double margin = q.rhs - q.lhs;
        bool ok = tol.holds(q.lhs, q.rhs);
        if (require_nonnegative) {
            margin = std::min(margin, q.lhs);
            ok = ok && q.lhs >= -tol.abs;
        }
        if (!ok) failed = true;
        worst.offer(margin, x1, x2);
    });
    if (skipped > 0) {
        report.notes.push_back(id + ": skipped " + std::to_string(skipped) +
                               " grid points (derivative stencil left the domain or evaluation "
                               "failed)");
    }
    if (evaluated == 0) {
        return inconclusive(id, description, "no grid point could be evaluated");
    }
    auto c = from_worst(id, description, worst, failed);
    if (skipped > 0) c.note = std::to_string(skipped) + " points skipped";
    return c;
}

// f_i(d) / r0(d) at the diagonal point x, approached with R0 gap eps.
double diagonal_restriction(const GeneralBivariateModel& model, int i, double x, double eps) {
    const auto& b = model.baseline();
    const double y = b.inverse_cumulative_hazard(eps);
    const double xi = b.combine(x, y);
    const double d = b.difference(xi, x);
    return model.marginal(i).density(d) / b.hazard(d);
}

ConditionResult diagonal_constancy(const GeneralBivariateModel& model, const GridSpec& grid,
                                   ValidationReport& report) {
    const std::string id = "diagonal-constancy";
    const std::string description = "diagonal limit u_i does not depend on the diagonal point";
    double worst_dev = 0.0;
    std::array<double, 2> witness{kNaN, kNaN};
    std::size_t skipped = 0;
    for (int i = 1; i <= 2; ++i) {
        for (double eps : {1e-3, 1e-4}) {
            double ref = kNaN;
            for (double x : grid.knots) {
                double v = kNaN;
                try {
                    v = diagonal_restriction(model, i, x, eps);
                } catch (const std::exception&) {
                }
                if (!std::isfinite(v)) {
                    ++skipped;
                    continue;
                }
                if (std::isnan(ref)) {
                    ref = v;
                    continue;
                }
                const double dev = std::abs(v - ref) / std::max(std::abs(ref), 1e-12);
                if (dev > worst_dev) {
                    worst_dev = dev;
                    witness = {x, x};
                }
            }
        }
    }
    if (skipped > 0) {
        report.notes.push_back(id + ": skipped " + std::to_string(skipped) + " diagonal points");
    }
    report.values.emplace_back("diagonal_deviation", worst_dev);
    ConditionResult c;
    c.id = id;
    c.description = description;
    c.margin = 1e-4 - worst_dev;
    c.witness = witness;
    if (worst_dev >= 1e-4) {
        c.status = ConditionStatus::Inconclusive;
        c.note = "restriction varies along the diagonal; mixture weight is ambiguous";
    }
    return c;
}

// Tail-divergence heuristic for the integrated marginal hazard.
ConditionResult hazard_divergence(int i, const MarginalModel& m, const BaselineModel& b,
                                  const GridSpec& grid, ValidationReport& report) {
    const std::string id = "hazard-divergence-" + std::to_string(i);
    const std::string description = "integrated marginal hazard grows without bound (heuristic)";
    std::vector<double> xs;
    if (!grid.knots.empty()) xs.push_back(grid.knots.back());
    for (int k = 0; k < 4; ++k) {
        try {
            const double x = b.inverse_cumulative_hazard(8.0 * std::ldexp(1.0, k));
            if (std::isfinite(x) && (xs.empty() || x > xs.back())) xs.push_back(x);
        } catch (const NumericError&) {
            break;
        }
    }
    std::vector<double> hs;
    for (double x : xs) hs.push_back(m.cumulative_hazard(x));

    ConditionResult c;
    c.id = id;
    c.description = description;
    c.heuristic = true;
    c.witness = {xs.empty() ? kNaN : xs.back(), xs.empty() ? kNaN : xs.back()};
    const double last = hs.empty() ? 0.0 : hs.back();
    c.margin = last - 30.0;
    bool monotone = hs.size() >= 2;
    for (std::size_t k = 1; k < hs.size(); ++k) monotone = monotone && hs[k] >= hs[k - 1];
    const bool rising = hs.size() >= 2 && hs.back() > hs[hs.size() - 2];
    report.values.emplace_back("H" + std::to_string(i) + "_tail", last);
    if (last > 30.0 && monotone && rising) {
        c.status = ConditionStatus::Pass;
        c.note = "heuristic";
    } else {
        c.status = ConditionStatus::Inconclusive;
        c.note = "integrated hazard stays small or stops growing in the tail";
    }

    if (m.kind() == MarginalKind::FromHazard && xs.size() >= 2) {
        const double f_grid = m.density(xs.front());
        const double f_tail = m.density(xs.back());
        if (f_tail >= f_grid && f_grid > 0.0) {
            report.notes.push_back(id + ": marginal density does not decay in the tail");
        }
    }
    return c;
}

ConditionResult limit_weights(const MarginalModel& m1, const MarginalModel& m2,
                              const BaselineModel& b, double theta, const Tolerance& tol,
                              ValidationReport& report) {
    const std::string id = "hazard-ratio-weights";
    const std::string description = "theta <= v1 + v2 <= 2 theta";
    LimitResult v1, v2;
    try {
        v1 = limit_hazard_ratio(m1, b);
        v2 = limit_hazard_ratio(m2, b);
    } catch (const NumericError& e) {
        return inconclusive(id, description, e.what());
    }
    const double left = b.left_endpoint();
    if (v1.divergent || v2.divergent) {
        ConditionResult c;
        c.id = id;
        c.description = description;
        c.status = ConditionStatus::Fail;
        c.margin = -kInf;
        c.witness = {left, left};
        c.note = "hazard ratio diverges at the left endpoint";
        return c;
    }
    report.values.emplace_back("v1", v1.value);
    report.values.emplace_back("v2", v2.value);
    return weight_sum_condition(id, description, v1.value + v2.value, theta, left, tol);
}

}  // namespace

// ---------------------------------------------------------------------------

double Tolerance::allowance(double rhs) const { return std::max(abs, rel * std::abs(rhs)); }

GridSpec GridSpec::log_spaced(const BaselineModel& baseline, int count, double r0_min,
                              double r0_max, double wedge_margin) {
    if (count < 8) throw DomainError("grid needs at least 8 knots per axis");
    if (!(r0_min > 0.0) || !(r0_max > r0_min)) {
        throw DomainError("grid range must satisfy 0 < r0_min < r0_max");
    }
    GridSpec g;
    g.wedge_margin = wedge_margin;
    const double lo = std::log(r0_min);
    const double hi = std::log(r0_max);
    for (int k = 0; k < count; ++k) {
        const double r = std::exp(lo + (hi - lo) * k / (count - 1));
        g.knots.push_back(baseline.inverse_cumulative_hazard(r));
    }
    for (std::size_t k = 1; k < g.knots.size(); ++k) {
        if (!(g.knots[k] > g.knots[k - 1])) throw DomainError("grid knots collapsed");
    }
    return g;
}

GridSpec GridSpec::from_knots(std::vector<double> knots, double wedge_margin) {
    if (knots.empty()) throw DomainError("grid needs at least one knot");
    for (double k : knots) {
        if (!std::isfinite(k)) throw DomainError("grid knots must be finite");
    }
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (!(knots[k] > knots[k - 1])) throw DomainError("grid knots must be strictly increasing");
    }
    if (!(wedge_margin >= 0.0)) throw DomainError("wedge margin must be non-negative");
    GridSpec g;
    g.knots = std::move(knots);
    g.wedge_margin = wedge_margin;
    return g;
}

std::vector<double> default_t_knots(const BaselineModel& baseline, int count, double r0_min,
                                    double r0_max) {
    if (count < 1) throw DomainError("need at least one t knot");
    std::vector<double> t;
    const double lo = std::log(r0_min);
    const double hi = std::log(r0_max);
    for (int k = 0; k < count; ++k) {
        const double r = count == 1 ? r0_min : std::exp(lo + (hi - lo) * k / (count - 1));
        t.push_back(baseline.inverse_cumulative_hazard(r));
    }
    return t;
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Valid: return "Valid";
        case Verdict::Invalid: return "Invalid";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string_view to_string(ConditionStatus status) {
    switch (status) {
        case ConditionStatus::Pass: return "pass";
        case ConditionStatus::Fail: return "fail";
        case ConditionStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

void ValidationReport::finalize() {
    bool failed = false;
    bool unsure = false;
    for (const auto& c : conditions) {
        failed = failed || c.status == ConditionStatus::Fail;
        unsure = unsure || c.status == ConditionStatus::Inconclusive;
    }
    verdict = failed ? Verdict::Invalid : unsure ? Verdict::Inconclusive : Verdict::Valid;
}

const ConditionResult* ValidationReport::find(std::string_view id) const {
    for (const auto& c : conditions) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

std::optional<double> ValidationReport::value(std::string_view key) const {
    for (const auto& [k, v] : values) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string ValidationReport::summary() const {
    switch (verdict) {
        case Verdict::Valid: return "no violation found on grid";
        case Verdict::Invalid: return "violation found";
        case Verdict::Inconclusive: return "inconclusive: a limit or grid evaluation did not settle";
    }
    return "";
}

ValidationReport merge_reports(const std::vector<ValidationReport>& reports) {
    ValidationReport out;
    for (const auto& r : reports) {
        if (out.grid_knots.empty()) {
            out.grid_knots = r.grid_knots;
            out.wedge_margin = r.wedge_margin;
            out.tolerance = r.tolerance;
        }
        out.conditions.insert(out.conditions.end(), r.conditions.begin(), r.conditions.end());
        for (const auto& kv : r.values) {
            if (!out.value(kv.first)) out.values.push_back(kv);
        }
        out.notes.insert(out.notes.end(), r.notes.begin(), r.notes.end());
    }
    out.finalize();
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise conditions

Inequality theorem2_condition_ii(const GeneralBivariateModel& model, int i, double x1,
                                 double x2) {
    const double xi = i == 1 ? x1 : x2;
    const double xj = i == 1 ? x2 : x1;
    if (!(xi > xj)) throw DomainError("condition needs x_i > x_(3-i)");
    const auto& b = model.baseline();
    const auto& m = model.marginal(i);
    const double d = b.difference(xi, xj);
    const double ri = m.hazard(d);
    const double r0d = b.hazard(d);
    // d/dx_j ln f_i(d) * dd/dx_j, with ln f_i = ln r_i - H_i and dd/dx_j = -r0(x_j)/r0(d),
    // plus the derivative of ln r0(x_i)/r0(d) coming from dd/dx_i.
    const double lhs =
        (ri - m.hazard_derivative(d) / ri + b.hazard_derivative(d) / r0d) * b.hazard(xj) / r0d;
    return {lhs, model.theta() * b.hazard(xj)};
}

Inequality theorem5_condition_i(const MarginalModel& marginal, const BaselineModel& baseline,
                                double theta, int i, double x1, double x2) {
    const double xi = i == 1 ? x1 : x2;
    const double xj = i == 1 ? x2 : x1;
    if (!(xi > xj)) throw DomainError("condition needs x_i > x_(3-i)");
    const double d = baseline.difference(xi, xj);
    const double r0j = baseline.hazard(xj);
    return {marginal.hazard(d) * r0j / baseline.hazard(d), theta * r0j};
}

Inequality theorem5_condition_iii(const MarginalModel& marginal, const BaselineModel& baseline,
                                  double theta, int i, double x1, double x2) {
    const double xi = i == 1 ? x1 : x2;
    const double xj = i == 1 ? x2 : x1;
    if (!(xi > xj)) throw DomainError("condition needs x_i > x_(3-i)");
    const double d = baseline.difference(xi, xj);
    const double r0i = baseline.hazard(xi);
    const double r0j = baseline.hazard(xj);
    const double r0d = baseline.hazard(d);
    const double ri = marginal.hazard(d);
    const double g = ri * r0i / r0d;
    const double h = -ri * r0j / r0d;

    double dg;
    if (marginal.has_analytic_derivative() && baseline.has_analytic_derivative()) {
        const double dg_dd =
            r0i * (marginal.hazard_derivative(d) * r0d - ri * baseline.hazard_derivative(d)) /
            (r0d * r0d);
        dg = dg_dd * (-r0j / r0d);
    } else {
        auto g_of = [&](double t) {
            const double dt = baseline.difference(xi, t);
            return marginal.hazard(dt) * r0i / baseline.hazard(dt);
        };
        dg = numerics::central_derivative_within(g_of, xj, baseline.left_endpoint(), xi);
    }
    return {dg, g * (theta * r0j + h)};
}

// ---------------------------------------------------------------------------
// Grid checks

ValidationReport check_theorem2(const GeneralBivariateModel& model, const GridSpec& grid,
                                const Tolerance& tol) {
    ValidationReport report;
    stamp(report, grid, tol);
    const auto& b = model.baseline();
    const double theta = model.theta();

    const std::string wid = "mixture-weights";
    const std::string wdesc = "theta <= u1 + u2 <= 2 theta";
    try {
        const Decomposition parts = decompose(model);
        report.values.emplace_back("u1", parts.u1);
        report.values.emplace_back("u2", parts.u2);
        report.values.emplace_back("alpha", parts.alpha);
        report.values.emplace_back("singular_mass", parts.singular_mass);
        report.conditions.push_back(weight_sum_condition(wid, wdesc, parts.u1 + parts.u2, theta,
                                                         b.left_endpoint(), tol));
    } catch (const DecompositionError& e) {
        ConditionResult c;
        c.id = wid;
        c.description = wdesc;
        c.status = ConditionStatus::Fail;
        c.margin = -kInf;
        c.witness = {b.left_endpoint(), b.left_endpoint()};
        c.note = e.what();
        report.conditions.push_back(c);
    } catch (const NumericError& e) {
        report.conditions.push_back(inconclusive(wid, wdesc, e.what()));
    }

    report.conditions.push_back(pointwise_condition(
        "density-sign", "d/dx_j ln(-d/dx_i F_i(x_i (-) x_j)) <= theta r0(x_j)", b, grid, tol,
        report,
        [&](int i, double x1, double x2) { return theorem2_condition_ii(model, i, x1, x2); }));

    report.conditions.push_back(diagonal_constancy(model, grid, report));
    report.finalize();
    return report;
}

ValidationReport check_hazard_bound(const GeneralBivariateModel& model, const GridSpec& grid,
                                    const Tolerance& tol) {
    ValidationReport report;
    stamp(report, grid, tol);
    const auto& b = model.baseline();
    report.conditions.push_back(pointwise_condition(
        "hazard-bound", "0 <= r_i(d) |dd/dx_j| <= theta r0(x_j)", b, grid, tol, report,
        [&](int i, double x1, double x2) {
            return theorem5_condition_i(model.marginal(i), b, model.theta(), i, x1, x2);
        },
        true));
    report.finalize();
    return report;
}

ValidationReport check_theorem5(const MarginalModel& marginal1, const MarginalModel& marginal2,
                                const BaselineModel& baseline, double theta,
                                const GridSpec& grid, const Tolerance& tol) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw ModelError("theta must be positive");
    ValidationReport report;
    stamp(report, grid, tol);
    const MarginalModel* ms[2] = {&marginal1, &marginal2};

    report.conditions.push_back(pointwise_condition(
        "hazard-bound", "0 <= r_i(d) |dd/dx_j| <= theta r0(x_j)", baseline, grid, tol, report,
        [&](int i, double x1, double x2) {
            return theorem5_condition_i(*ms[i - 1], baseline, theta, i, x1, x2);
        },
        true));

    for (int i = 1; i <= 2; ++i) {
        report.conditions.push_back(hazard_divergence(i, *ms[i - 1], baseline, grid, report));
    }

    report.conditions.push_back(pointwise_condition(
        "hazard-density-sign", "d g/dx_j <= g (theta r0(x_j) + h)", baseline, grid, tol, report,
        [&](int i, double x1, double x2) {
            return theorem5_condition_iii(*ms[i - 1], baseline, theta, i, x1, x2);
        }));

    report.conditions.push_back(
        limit_weights(marginal1, marginal2, baseline, theta, tol, report));
    report.finalize();
    return report;
}

ValidationReport check_theorem5(const HazardFunction& r1, const HazardFunction& r2,
                                const BaselineModel& baseline, double theta,
                                const GridSpec& grid, const Tolerance& tol) {
    const double left = baseline.left_endpoint();
    return check_theorem5(MarginalModel::from_hazard(r1, left),
                          MarginalModel::from_hazard(r2, left), baseline, theta, grid, tol);
}

ValidationReport check_two_increasing(const GeneralBivariateModel& model, const GridSpec& grid,
                                      double tolerance) {
    ValidationReport report;
    report.grid_knots = grid.knots;
    report.wedge_margin = grid.wedge_margin;
    report.tolerance = {tolerance, 0.0};

    ConditionResult c;
    c.id = "two-increasing";
    c.description = "every grid cell has probability >= 0";
    const auto& k = grid.knots;
    std::array<double, 4> worst_rect{kNaN, kNaN, kNaN, kNaN};
    double worst = kInf;
    for (std::size_t a = 0; a + 1 < k.size(); ++a) {
        for (std::size_t q = 0; q + 1 < k.size(); ++q) {
            const double p = rectangle_probability(model, k[a], k[a + 1], k[q], k[q + 1]);
            const std::array<double, 4> rect{k[a], k[a + 1], k[q], k[q + 1]};
            if (p < worst || (p == worst && rect < worst_rect)) {
                worst = p;
                worst_rect = rect;
            }
        }
    }
    if (std::isfinite(worst)) {
        c.margin = worst;
        c.rectangle = worst_rect;
        c.witness = {worst_rect[0], worst_rect[2]};
        if (worst < -tolerance) c.status = ConditionStatus::Fail;
    } else {
        c.note = "fewer than two knots; nothing to check";
    }
    report.values.emplace_back("min_cell_probability", std::isfinite(worst) ? worst : 0.0);
    report.conditions.push_back(c);
    report.finalize();
    return report;
}

ResidualReport check_functional_equation(const GeneralBivariateModel& model, const GridSpec& grid,
                                         const std::vector<double>& t_knots) {
    ResidualReport out;
    const auto& b = model.baseline();
    for (double x1 : grid.knots) {
        for (double x2 : grid.knots) {
            const double base = model.cumulative_hazard(x1, x2);
            for (double t : t_knots) {
                const double shifted = model.cumulative_hazard(b.combine(x1, t), b.combine(x2, t));
                const double res =
                    std::abs(shifted - base - model.theta() * b.cumulative_hazard(t));
                if (out.evaluated++ == 0 || res > out.max_residual) {
                    out.max_residual = res;
                    out.worst = {x1, x2, t};
                }
            }
        }
    }
    return out;
}

std::array<double, 2> hazard_gradient(const GeneralBivariateModel& model, double x1, double x2) {
    if (std::isnan(x1) || std::isnan(x2)) throw DomainError("hazard_gradient: NaN argument");
    const auto& b = model.baseline();
    if (x1 < b.left_endpoint() || x2 < b.left_endpoint()) {
        throw DomainError("hazard_gradient: point below the support");
    }
    if (x1 == x2) throw DomainError("hazard gradient is undefined on the diagonal");
    const int i = x1 > x2 ? 1 : 2;
    const double xi = i == 1 ? x1 : x2;
    const double xj = i == 1 ? x2 : x1;
    const double d = b.difference(xi, xj);
    const double ratio = model.marginal(i).hazard(d) / b.hazard(d);
    const double gi = ratio * b.hazard(xi);
    const double gj = -ratio * b.hazard(xj) + model.theta() * b.hazard(xj);
    return i == 1 ? std::array<double, 2>{gi, gj} : std::array<double, 2>{gj, gi};
}

std::array<double, 2> hazard_gradient_numeric(const GeneralBivariateModel& model, double x1,
                                              double x2) {
    if (x1 == x2) throw DomainError("hazard gradient is undefined on the diagonal");
    const double left = model.baseline().left_endpoint();
    const double inf = kInf;
    auto R1 = [&](double u) { return model.cumulative_hazard(u, x2); };
    auto R2 = [&](double u) { return model.cumulative_hazard(x1, u); };
    const double g1 = x1 > x2 ? numerics::central_derivative_within(R1, x1, x2, inf)
                              : numerics::central_derivative_within(R1, x1, left, x2);
    const double g2 = x2 > x1 ? numerics::central_derivative_within(R2, x2, x1, inf)
                              : numerics::central_derivative_within(R2, x2, left, x1);
    return {g1, g2};
}

ResidualReport check_hazard_gradient_identity(const GeneralBivariateModel& model,
                                              const GridSpec& grid,
                                              const std::vector<double>& t_knots) {
    ResidualReport out;
    const auto& b = model.baseline();
    for_each_wedge_point(b, grid, [&](int, double x1, double x2) {
        for (double t : t_knots) {
            const double y1 = b.combine(x1, t);
            const double y2 = b.combine(x2, t);
            if (y1 == y2) continue;
            const auto g = hazard_gradient(model, y1, y2);
            const double r0t = b.hazard(t);
            const double sum = g[0] * r0t / b.hazard(y1) + g[1] * r0t / b.hazard(y2);
            const double target = model.theta() * r0t;
            const double res = std::abs(sum - target) / target;
            if (out.evaluated++ == 0 || res > out.max_residual) {
                out.max_residual = res;
                out.worst = {x1, x2, t};
            }
        }
    });
    return out;
}

double reconstruct_survival_from_gradient(const GeneralBivariateModel& model, double x1,
                                          double x2) {
    if (std::isnan(x1) || std::isnan(x2)) throw DomainError("reconstruct: NaN argument");
    const auto& b = model.baseline();
    const double left = b.left_endpoint();
    x1 = std::max(x1, left);
    x2 = std::max(x2, left);
    if (std::isinf(x1) || std::isinf(x2)) return 0.0;

    // In w = R0(u) the path element is du = dw / r0(u).
    auto along = [&](double w_lo, double w_hi, auto&& gradient_component) {
        if (!(w_hi > w_lo)) return 0.0;
        auto f = [&](double w) {
            const double u = b.inverse_cumulative_hazard(w);
            return gradient_component(u) / b.hazard(u);
        };
        return numerics::integrate(f, w_lo, w_hi, 1e-12, 1e-11).value;
    };

    // First leg: (u, left), u from left to x1; r1(u, left) with u > left.
    const double w1 = b.cumulative_hazard(x1);
    const double first =
        along(0.0, w1, [&](double u) { return hazard_gradient(model, u, left)[0]; });

    // Second leg: (x1, u), u from left to x2, split at u = x1.
    const double w2 = b.cumulative_hazard(x2);
    auto r2 = [&](double u) { return hazard_gradient(model, x1, u)[1]; };
    double second = 0.0;
    if (w2 <= w1) {
        second = along(0.0, w2, r2);
    } else {
        second = along(0.0, w1, r2) + along(w1, w2, r2);
    }
    return std::exp(-first - second);
}

}  // namespace semibiv
