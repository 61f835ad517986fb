#pragma once

#include "semibiv/baseline.hpp"
#include "semibiv/bivariate.hpp"
#include "semibiv/marginal.hpp"
#include "semibiv/validity.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semibiv {

// Malformed model description; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// exponential | weibull:<shape> | pareto | custom:<csv path>
// Relative paths resolve against base_dir.
BaselineModel parse_baseline(std::string_view spec, const std::filesystem::path& base_dir = {});

// ph:<delta> | lfr:<a> | hazard:<csv path>
// PH marginals use `baseline`; hazard tables start at its left endpoint.
MarginalModel parse_marginal(std::string_view spec, const BaselineModel& baseline,
                             const std::filesystem::path& base_dir = {});

struct GridConfig {
    std::vector<double> knots;  // explicit knots win over the log-spaced fields
    int count = 16;
    double r0_min = 0.05;
    double r0_max = 8.0;
    double wedge_margin = 0.02;
};

struct ModelConfig {
    std::string baseline;
    // Exactly one of the two forms.
    std::optional<std::array<std::string, 2>> marginals;
    std::optional<double> theta;
    std::optional<std::array<double, 3>> theta123;

    GridConfig grid;
    Tolerance tolerance;
    std::filesystem::path base_dir;
};

// Parses the JSON text of a model file:
//   { "baseline": "...", "theta": 3, "marginals": ["...", "..."] }
//   { "baseline": "...", "theta123": [1, 1, 1] }
// with optional "grid": {"knots": [...]} or {"count", "r0_min", "r0_max", "wedge_margin"}
// and "tolerance": {"abs", "rel"}.
ModelConfig parse_model_config(std::string_view json_text,
                               const std::filesystem::path& base_dir = {});

// Reads and parses a file; std::ios_base::failure when it cannot be read.
ModelConfig load_model_config(const std::filesystem::path& path);

struct LoadedModel {
    BaselineModel baseline;
    std::optional<PHBivariateModel> ph;
    GeneralBivariateModel general;
    GridSpec grid;
    Tolerance tolerance;
};

LoadedModel build_model(const ModelConfig& config);

}  // namespace semibiv
