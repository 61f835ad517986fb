#include "semibiv/config.hpp"

#include "semibiv/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace semibiv {

namespace {

using nlohmann::json;

double parse_number(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value)) {
        throw ConfigError("bad number '" + std::string(text) + "' in " + std::string(what));
    }
    return value;
}

std::pair<std::string_view, std::string_view> split_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) return {spec, {}};
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

std::filesystem::path resolve(std::string_view path, const std::filesystem::path& base_dir) {
    std::filesystem::path p{std::string(path)};
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return p;
}

HazardFunction read_table(std::string_view path, const std::filesystem::path& base_dir,
                          std::string_view what) {
    if (path.empty()) throw ConfigError(std::string(what) + " needs a CSV path");
    const auto full = resolve(path, base_dir);
    if (!std::filesystem::exists(full)) {
        throw ConfigError("hazard table not found: " + full.string());
    }
    try {
        HazardFunction h = load_hazard_csv(full.string());
        h.label = std::string(path);
        return h;
    } catch (const ModelError& e) {
        throw ConfigError(std::string("hazard table ") + full.string() + ": " + e.what());
    } catch (const std::ios_base::failure&) {
        throw ConfigError(std::string("cannot read hazard table ") + full.string());
    }
}

template <class Build>
auto wrap_model_errors(Build&& build) {
    try {
        return build();
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

double number_field(const json& j, const char* key) {
    if (!j.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return j.get<double>();
}

}  // namespace

BaselineModel parse_baseline(std::string_view spec, const std::filesystem::path& base_dir) {
    const auto [name, arg] = split_spec(spec);
    return wrap_model_errors([&] {
        if (name == "exponential" && arg.empty()) return BaselineModel::exponential();
        if (name == "pareto" && arg.empty()) return BaselineModel::pareto();
        if (name == "weibull") return BaselineModel::weibull(parse_number(arg, "weibull shape"));
        if (name == "custom") return BaselineModel::custom(read_table(arg, base_dir, "custom"));
        throw ConfigError("unknown baseline '" + std::string(spec) +
                          "' (expected exponential, weibull:<a>, pareto or custom:<csv>)");
    });
}

MarginalModel parse_marginal(std::string_view spec, const BaselineModel& baseline,
                             const std::filesystem::path& base_dir) {
    const auto [name, arg] = split_spec(spec);
    return wrap_model_errors([&] {
        if (name == "ph") {
            return MarginalModel::proportional_hazard(baseline, parse_number(arg, "ph exponent"));
        }
        if (name == "lfr") {
            return MarginalModel::linear_failure_rate(parse_number(arg, "lfr coefficient"));
        }
        if (name == "hazard") {
            return MarginalModel::from_hazard(read_table(arg, base_dir, "hazard"),
                                              baseline.left_endpoint());
        }
        throw ConfigError("unknown marginal '" + std::string(spec) +
                          "' (expected ph:<delta>, lfr:<a> or hazard:<csv>)");
    });
}

ModelConfig parse_model_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const char* known[] = {"baseline", "theta", "marginals", "theta123", "grid",
                                  "tolerance"};
    for (const auto& item : j.items()) {
        if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known)) {
            throw ConfigError("unknown config key '" + item.key() + "'");
        }
    }

    ModelConfig cfg;
    cfg.base_dir = base_dir;
    if (!j.contains("baseline") || !j["baseline"].is_string()) {
        throw ConfigError("config needs a string 'baseline'");
    }
    cfg.baseline = j["baseline"].get<std::string>();

    const bool has_marginals = j.contains("marginals");
    const bool has_t123 = j.contains("theta123");
    if (has_marginals == has_t123) {
        throw ConfigError("config needs exactly one of 'marginals' and 'theta123'");
    }
    if (has_marginals) {
        const auto& m = j["marginals"];
        if (!m.is_array() || m.size() != 2 || !m[0].is_string() || !m[1].is_string()) {
            throw ConfigError("'marginals' must be an array of two strings");
        }
        cfg.marginals = std::array<std::string, 2>{m[0].get<std::string>(),
                                                   m[1].get<std::string>()};
        if (!j.contains("theta")) throw ConfigError("'marginals' form needs 'theta'");
        cfg.theta = number_field(j["theta"], "theta");
    } else {
        const auto& t = j["theta123"];
        if (!t.is_array() || t.size() != 3) {
            throw ConfigError("'theta123' must be an array of three numbers");
        }
        std::array<double, 3> v{};
        for (std::size_t k = 0; k < 3; ++k) v[k] = number_field(t[k], "theta123");
        cfg.theta123 = v;
        if (j.contains("theta")) {
            const double theta = number_field(j["theta"], "theta");
            if (std::abs(theta - (v[0] + v[1] + v[2])) > 1e-12 * std::abs(theta)) {
                throw ConfigError("'theta' disagrees with the sum of 'theta123'");
            }
        }
    }

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (!g.is_object()) throw ConfigError("'grid' must be an object");
        for (const auto& item : g.items()) {
            const auto& key = item.key();
            if (key == "knots") {
                if (!item.value().is_array()) throw ConfigError("'grid.knots' must be an array");
                for (const auto& k : item.value()) cfg.grid.knots.push_back(number_field(k, "knots"));
            } else if (key == "count") {
                if (!item.value().is_number_integer()) {
                    throw ConfigError("'grid.count' must be an integer");
                }
                cfg.grid.count = item.value().get<int>();
            } else if (key == "r0_min") {
                cfg.grid.r0_min = number_field(item.value(), "r0_min");
            } else if (key == "r0_max") {
                cfg.grid.r0_max = number_field(item.value(), "r0_max");
            } else if (key == "wedge_margin") {
                cfg.grid.wedge_margin = number_field(item.value(), "wedge_margin");
            } else {
                throw ConfigError("unknown grid key '" + key + "'");
            }
        }
    }
    if (j.contains("tolerance")) {
        const auto& t = j["tolerance"];
        if (!t.is_object()) throw ConfigError("'tolerance' must be an object");
        for (const auto& item : t.items()) {
            if (item.key() == "abs") {
                cfg.tolerance.abs = number_field(item.value(), "abs");
            } else if (item.key() == "rel") {
                cfg.tolerance.rel = number_field(item.value(), "rel");
            } else {
                throw ConfigError("unknown tolerance key '" + item.key() + "'");
            }
        }
        if (!(cfg.tolerance.abs >= 0.0) || !(cfg.tolerance.rel >= 0.0)) {
            throw ConfigError("tolerances must be non-negative");
        }
    }
    return cfg;
}

ModelConfig load_model_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open config file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_model_config(text.str(), path.parent_path());
}

LoadedModel build_model(const ModelConfig& cfg) {
    const BaselineModel baseline = parse_baseline(cfg.baseline, cfg.base_dir);
    std::optional<PHBivariateModel> ph;
    std::optional<GeneralBivariateModel> general;
    wrap_model_errors([&] {
        if (cfg.theta123) {
            const auto& t = *cfg.theta123;
            ph.emplace(baseline, t[0], t[1], t[2]);
            general.emplace(ph->to_general());
        } else {
            general.emplace(baseline, parse_marginal((*cfg.marginals)[0], baseline, cfg.base_dir),
                            parse_marginal((*cfg.marginals)[1], baseline, cfg.base_dir),
                            *cfg.theta);
        }
        return 0;
    });

    const GridSpec grid = wrap_model_errors([&] {
        if (!cfg.grid.knots.empty()) {
            return GridSpec::from_knots(cfg.grid.knots, cfg.grid.wedge_margin);
        }
        return GridSpec::log_spaced(baseline, cfg.grid.count, cfg.grid.r0_min, cfg.grid.r0_max,
                                    cfg.grid.wedge_margin);
    });
    return LoadedModel{baseline, ph, *general, grid, cfg.tolerance};
}

}  // namespace semibiv
