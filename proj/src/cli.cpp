#include "semibiv/cli.hpp"

#include "semibiv/config.hpp"
#include "semibiv/errors.hpp"
#include "semibiv/report.hpp"
#include "semibiv/sampling.hpp"
#include "semibiv/validity.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace semibiv {

namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config;
    std::string out_path;
    std::string format = "table";
    std::optional<double> theta;
    std::string grid_knots;
    std::string tol;
};

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw UsageError("not a number: '" + text + "'");
    }
    return v;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

LoadedModel load(const CommonOptions& opt) {
    if (opt.config.empty()) throw UsageError("--config is required");
    ModelConfig cfg;
    try {
        cfg = load_model_config(opt.config);
    } catch (const std::ios_base::failure& e) {
        throw IoError(e.what());
    }
    if (opt.theta) {
        if (cfg.theta123) throw UsageError("--theta only applies to configs with 'marginals'");
        cfg.theta = *opt.theta;
    }
    if (!opt.grid_knots.empty()) {
        const auto parts = split_commas(opt.grid_knots);
        if (parts.size() == 1) {
            const double count = parse_double(parts[0]);
            if (count != std::floor(count) || count < 1) {
                throw UsageError("--grid-knots needs a knot count or a comma-separated list");
            }
            cfg.grid.knots.clear();
            cfg.grid.count = static_cast<int>(count);
        } else {
            cfg.grid.knots.clear();
            for (const auto& p : parts) cfg.grid.knots.push_back(parse_double(p));
        }
    }
    if (!opt.tol.empty()) {
        const auto parts = split_commas(opt.tol);
        if (parts.empty() || parts.size() > 2) throw UsageError("--tol expects abs[,rel]");
        cfg.tolerance.abs = parse_double(parts[0]);
        if (parts.size() == 2) cfg.tolerance.rel = parse_double(parts[1]);
        if (!(cfg.tolerance.abs >= 0.0) || !(cfg.tolerance.rel >= 0.0)) {
            throw UsageError("tolerances must be non-negative");
        }
    }
    return build_model(cfg);
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_config = true) {
    auto* c = cmd->add_option("--config", opt.config, "model config (JSON)");
    if (needs_config) c->required();
    cmd->add_option("--out", opt.out_path, "write machine-readable output to this file");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "table", "csv"}));
}

void add_model_overrides(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--theta", opt.theta, "override theta (marginals form)");
    cmd->add_option("--grid-knots", opt.grid_knots, "knot count or comma-separated knots");
    cmd->add_option("--tol", opt.tol, "inequality tolerance abs[,rel]");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file " + path);
    f << text;
    f.flush();
    if (!f) throw IoError("failed writing " + path);
}

// Sends `text` to --out when given, otherwise to the stream.
void emit(const CommonOptions& opt, std::ostream& out, const std::string& text) {
    if (opt.out_path.empty()) {
        out << text;
    } else {
        write_file(opt.out_path, text);
    }
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

int cmd_eval(const CommonOptions& opt, double x1, double x2, std::ostream& out) {
    const LoadedModel m = load(opt);
    const double survival = m.ph ? m.ph->survival(x1, x2) : m.general.survival(x1, x2);

    std::optional<double> density;
    std::optional<std::array<double, 2>> gradient;
    std::string note;
    if (x1 == x2) {
        note = "diagonal";
    } else {
        try {
            density = m.ph ? ac_density(*m.ph, x1, x2) : ac_density(m.general, x1, x2);
        } catch (const DomainError& e) {
            note = e.what();
        } catch (const DecompositionError& e) {
            note = e.what();
        }
        gradient = hazard_gradient(m.general, x1, x2);
    }

    if (opt.format == "json") {
        ojson j;
        j["x"] = ojson::array({json_number(x1), json_number(x2)});
        j["survival"] = json_number(survival);
        j["ac_density"] = density ? json_number(*density) : ojson(nullptr);
        j["hazard_gradient"] = gradient ? ojson::array({json_number((*gradient)[0]),
                                                        json_number((*gradient)[1])})
                                        : ojson(nullptr);
        if (!note.empty()) j["note"] = note;
        emit(opt, out, dump(j));
    } else if (opt.format == "csv") {
        std::ostringstream os;
        os << "x1,x2,survival,ac_density,r1,r2\n"
           << format_number(x1) << ',' << format_number(x2) << ',' << format_number(survival)
           << ',' << (density ? format_number(*density) : "") << ','
           << (gradient ? format_number((*gradient)[0]) : "") << ','
           << (gradient ? format_number((*gradient)[1]) : "") << '\n';
        emit(opt, out, os.str());
    } else {
        std::ostringstream os;
        os << "survival " << format_number(survival) << "\n";
        if (density) os << "ac_density " << format_number(*density) << "\n";
        if (gradient) {
            os << "hazard_gradient " << format_number((*gradient)[0]) << " "
               << format_number((*gradient)[1]) << "\n";
        }
        if (!note.empty()) os << "note: " << note << "\n";
        emit(opt, out, os.str());
    }
    return kExitOk;
}

int cmd_rect(const CommonOptions& opt, const std::vector<std::string>& bounds, std::ostream& out) {
    if (bounds.size() != 4) throw UsageError("rect expects a1 b1 a2 b2");
    std::array<double, 4> b{};
    for (std::size_t k = 0; k < 4; ++k) b[k] = parse_double(bounds[k]);
    const LoadedModel m = load(opt);
    const double p = m.ph ? rectangle_probability(*m.ph, b[0], b[1], b[2], b[3])
                          : rectangle_probability(m.general, b[0], b[1], b[2], b[3]);
    if (opt.format == "json") {
        ojson j;
        j["rectangle"] = ojson::array(
            {json_number(b[0]), json_number(b[1]), json_number(b[2]), json_number(b[3])});
        j["probability"] = json_number(p);
        emit(opt, out, dump(j));
    } else if (opt.format == "csv") {
        emit(opt, out,
             "a1,b1,a2,b2,probability\n" + format_number(b[0]) + "," + format_number(b[1]) + "," +
                 format_number(b[2]) + "," + format_number(b[3]) + "," + format_number(p) + "\n");
    } else {
        emit(opt, out, "probability " + format_number(p) + "\n");
    }
    return kExitOk;
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Valid: return kExitOk;
        case Verdict::Invalid: return kExitInvalid;
        case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

int cmd_validate(const CommonOptions& opt, std::ostream& out) {
    const LoadedModel m = load(opt);
    const auto& g = m.general;
    std::vector<ValidationReport> parts;
    parts.push_back(check_theorem2(g, m.grid, m.tolerance));
    parts.push_back(
        check_theorem5(g.marginal(1), g.marginal(2), g.baseline(), g.theta(), m.grid, m.tolerance));
    parts.push_back(check_two_increasing(g, m.grid));
    ValidationReport report = merge_reports(parts);
    report.tolerance = m.tolerance;
    const auto fe = check_functional_equation(g, m.grid, default_t_knots(g.baseline()));
    report.values.emplace_back("functional_equation_residual", fe.max_residual);

    const std::string json_text = dump(report_to_json(report));
    if (!opt.out_path.empty()) write_file(opt.out_path, json_text);
    out << (opt.format == "json" ? json_text : report_to_table(report));
    return verdict_exit(report.verdict);
}

int cmd_check_fe(const CommonOptions& opt, std::ostream& out) {
    const LoadedModel m = load(opt);
    const auto r = check_functional_equation(m.general, m.grid, default_t_knots(m.baseline));
    const bool ok = r.max_residual < 1e-9;
    if (opt.format == "json") {
        ojson j = residual_to_json(r);
        j["pass"] = ok;
        emit(opt, out, dump(j));
    } else {
        std::ostringstream os;
        os << "max_residual " << format_number(r.max_residual) << "\n"
           << "worst (x1, x2, t) (" << format_number(r.worst[0]) << ", "
           << format_number(r.worst[1]) << ", " << format_number(r.worst[2]) << ")\n"
           << "evaluated " << r.evaluated << "\n";
        emit(opt, out, os.str());
    }
    return ok ? kExitOk : kExitInvalid;
}

int cmd_decompose(const CommonOptions& opt, bool masses, std::ostream& out) {
    const LoadedModel m = load(opt);
    const Decomposition d = m.ph ? decompose(*m.ph) : decompose(m.general);
    std::optional<WedgeMasses> w;
    if (masses) w = m.ph ? wedge_masses(*m.ph) : wedge_masses(m.general);
    if (opt.format == "json") {
        ojson j;
        j["alpha"] = json_number(d.alpha);
        j["u1"] = json_number(d.u1);
        j["u2"] = json_number(d.u2);
        j["singular_mass"] = json_number(d.singular_mass);
        j["valid"] = d.valid;
        if (w) {
            j["wedge_masses"] = {{"first_larger", json_number(w->first_larger)},
                                 {"second_larger", json_number(w->second_larger)}};
        }
        emit(opt, out, dump(j));
    } else {
        std::ostringstream os;
        os << "alpha " << format_number(d.alpha) << "\n"
           << "u1 " << format_number(d.u1) << "\n"
           << "u2 " << format_number(d.u2) << "\n"
           << "singular_mass " << format_number(d.singular_mass) << "\n";
        if (w) {
            os << "mass_first_larger " << format_number(w->first_larger) << "\n"
               << "mass_second_larger " << format_number(w->second_larger) << "\n";
        }
        if (!d.valid) os << "note: alpha outside [0, 1]; not a survival function\n";
        emit(opt, out, os.str());
    }
    return d.valid ? kExitOk : kExitInvalid;
}

int cmd_sample(const CommonOptions& opt, long long n, std::uint64_t seed,
               const std::string& method, unsigned threads, std::ostream& out) {
    if (n < 1) throw UsageError("--n must be at least 1");
    const LoadedModel m = load(opt);
    SamplingOptions so;
    so.threads = threads;
    SampleBatch batch;
    const bool use_ph = method == "ph" || (method == "auto" && m.ph);
    if (use_ph) {
        if (!m.ph) throw UsageError("--method ph needs a 'theta123' config");
        batch = sample_ph(*m.ph, static_cast<std::size_t>(n), seed, so);
    } else {
        batch = sample_general(m.general, static_cast<std::size_t>(n), seed, so, m.grid);
    }
    std::ostringstream os;
    write_batch_csv(os, batch);
    emit(opt, out, os.str());
    return kExitOk;
}

int cmd_counterexample(const CommonOptions& opt, std::ostream& out) {
    constexpr double a = 1.5;
    constexpr double theta = 3.0;
    const BaselineModel base = BaselineModel::exponential();
    const GeneralBivariateModel model(base, MarginalModel::linear_failure_rate(a),
                                      MarginalModel::linear_failure_rate(a), theta);

    const double rect = rectangle_probability(model, 1.0, 2.0, 3.0, 5.0);
    const Inequality cond = theorem2_condition_ii(model, 1, 5.0, 3.0);
    const Decomposition parts = decompose(model);
    const double usum = parts.u1 + parts.u2;
    const GridSpec grid = GridSpec::log_spaced(base);
    const ResidualReport fe = check_functional_equation(model, grid, default_t_knots(base));
    const ValidationReport cells =
        check_two_increasing(model, GridSpec::from_knots({1, 2, 3, 5, 6, 7, 8, 9}));
    const ConditionResult& cell = cells.conditions.front();

    const bool reproduced = rect < 0.0 && cond.lhs > cond.rhs && usum < theta &&
                            fe.max_residual < 1e-9 && cells.verdict == Verdict::Invalid;

    if (opt.format == "json") {
        ojson j;
        j["model"] = {{"baseline", base.describe()},
                      {"marginals", ojson::array({model.marginal(1).describe(),
                                                  model.marginal(2).describe()})},
                      {"theta", theta}};
        j["rectangle"] = {{"bounds", ojson::array({1, 2, 3, 5})},
                          {"probability", json_number(rect)}};
        j["density_sign"] = {{"witness", ojson::array({5, 3})},
                             {"lhs", json_number(cond.lhs)},
                             {"rhs", json_number(cond.rhs)}};
        j["mixture_weights"] = {{"u1", json_number(parts.u1)},
                                {"u2", json_number(parts.u2)},
                                {"sum", json_number(usum)},
                                {"theta", theta},
                                {"alpha", json_number(parts.alpha)}};
        ojson rect_w = ojson::array();
        if (cell.rectangle) {
            for (double v : *cell.rectangle) rect_w.push_back(json_number(v));
        }
        j["two_increasing"] = {{"witness", rect_w}, {"probability", json_number(cell.margin)}};
        j["functional_equation_residual"] = json_number(fe.max_residual);
        j["reproduced"] = reproduced;
        emit(opt, out, dump(j));
    } else {
        std::ostringstream os;
        os << "model: " << base.describe() << " baseline, marginals "
           << model.marginal(1).describe() << " / " << model.marginal(2).describe()
           << ", theta " << format_number(theta) << "\n"
           << "P(1 < X1 <= 2, 3 < X2 <= 5) = " << format_number(rect) << "\n"
           << "density-sign condition at (5, 3): lhs " << format_number(cond.lhs) << " > rhs "
           << format_number(cond.rhs) << "\n"
           << "mixture weights: u1 + u2 = " << format_number(usum) << " < theta = "
           << format_number(theta) << " (alpha = " << format_number(parts.alpha) << ")\n";
        if (cell.rectangle) {
            const auto& r = *cell.rectangle;
            os << "most negative grid cell: (" << format_number(r[0]) << ", "
               << format_number(r[1]) << ") x (" << format_number(r[2]) << ", "
               << format_number(r[3]) << ") = " << format_number(cell.margin) << "\n";
        }
        os << "functional equation max residual: " << format_number(fe.max_residual) << "\n"
           << "reproduced: " << (reproduced ? "yes" : "no") << "\n";
        emit(opt, out, os.str());
    }
    return reproduced ? kExitOk : kExitReproductionFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bivariate survival models with a singular diagonal component"};
    app.name("semibiv");
    app.require_subcommand(1, 1);

    CommonOptions opt;
    std::vector<double> point;
    std::vector<std::string> bounds;
    bool masses = false;
    long long n = 0;
    std::uint64_t seed = 1;
    std::string method = "auto";
    unsigned threads = 0;

    auto* eval = app.add_subcommand("eval", "survival, AC density and hazard gradient at a point");
    add_common(eval, opt);
    add_model_overrides(eval, opt);
    eval->add_option("x", point, "x1 x2")->expected(2)->required();

    auto* rect = app.add_subcommand("rect", "probability of (a1, b1] x (a2, b2]");
    add_common(rect, opt);
    add_model_overrides(rect, opt);
    rect->add_option("bounds", bounds, "a1 b1 a2 b2 (inf allowed)")->expected(4)->required();

    auto* validate = app.add_subcommand("validate", "grid validity checks");
    add_common(validate, opt);
    add_model_overrides(validate, opt);

    auto* checkfe = app.add_subcommand("check-fe", "functional-equation residual on the grid");
    add_common(checkfe, opt);
    add_model_overrides(checkfe, opt);

    auto* decomp = app.add_subcommand("decompose", "mixture weight and singular mass");
    add_common(decomp, opt);
    add_model_overrides(decomp, opt);
    decomp->add_flag("--masses", masses, "also integrate the AC mass of each wedge");

    auto* sample = app.add_subcommand("sample", "draw a sample as CSV x1,x2,tied");
    add_common(sample, opt);
    add_model_overrides(sample, opt);
    sample->add_option("--n", n, "sample size")->required();
    sample->add_option("--seed", seed, "64-bit seed");
    sample->add_option("--method", method, "sampler")
        ->check(CLI::IsMember({"auto", "ph", "general"}));
    sample->add_option("--threads", threads, "worker threads (0: all cores)");

    auto* counter = app.add_subcommand(
        "counterexample", "linear-failure-rate example that solves the equation but is invalid");
    add_common(counter, opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*eval) return cmd_eval(opt, point[0], point[1], out);
        if (*rect) return cmd_rect(opt, bounds, out);
        if (*validate) return cmd_validate(opt, out);
        if (*checkfe) return cmd_check_fe(opt, out);
        if (*decomp) return cmd_decompose(opt, masses, out);
        if (*sample) return cmd_sample(opt, n, seed, method, threads, out);
        if (*counter) return cmd_counterexample(opt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DecompositionError& e) {
        err << "invalid model: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ModelError& e) {
        err << "invalid model: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const SamplerError& e) {
        err << "sampler error: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitInconclusive;
    }
    return kExitUsage;
}

}  // namespace semibiv
