#pragma once

#include "semibiv/validity.hpp"

#include <json.hpp>

#include <string>

namespace semibiv {

// Locale-independent %.12g; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

// Value rounded to 12 significant digits, or a string for non-finite values,
// so JSON output is byte-stable.
nlohmann::ordered_json json_number(double value);

// {verdict, summary, conditions: [{id, pass, status, witness, margin, ...}], diagnostics}
nlohmann::ordered_json report_to_json(const ValidationReport& report);
nlohmann::ordered_json residual_to_json(const ResidualReport& residual);

// Aligned plain-text table.
std::string report_to_table(const ValidationReport& report);

}  // namespace semibiv
