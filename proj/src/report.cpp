#include "semibiv/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace semibiv {

namespace {

using ojson = nlohmann::ordered_json;

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string point(const std::array<double, 2>& p) {
    if (std::isnan(p[0])) return "-";
    return "(" + format_number(p[0]) + ", " + format_number(p[1]) + ")";
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, r.ptr);
}

ojson json_number(double value) {
    if (!std::isfinite(value)) return format_number(value);
    const std::string text = format_number(value);
    double rounded = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), rounded);
    return rounded;
}

ojson report_to_json(const ValidationReport& report) {
    ojson out;
    out["verdict"] = std::string(to_string(report.verdict));
    out["summary"] = report.summary();
    ojson conditions = ojson::array();
    for (const auto& c : report.conditions) {
        ojson item;
        item["id"] = c.id;
        item["pass"] = c.pass();
        item["status"] = std::string(to_string(c.status));
        item["witness"] = ojson::array({json_number(c.witness[0]), json_number(c.witness[1])});
        item["margin"] = json_number(c.margin);
        if (c.rectangle) {
            ojson rect = ojson::array();
            for (double v : *c.rectangle) rect.push_back(json_number(v));
            item["rectangle"] = rect;
        }
        if (c.heuristic) item["heuristic"] = true;
        item["description"] = c.description;
        if (!c.note.empty()) item["note"] = c.note;
        conditions.push_back(item);
    }
    out["conditions"] = conditions;

    ojson diag;
    ojson values = ojson::object();
    for (const auto& [k, v] : report.values) values[k] = json_number(v);
    diag["values"] = values;
    ojson knots = ojson::array();
    for (double k : report.grid_knots) knots.push_back(json_number(k));
    diag["grid"] = {{"knots", knots}, {"wedge_margin", json_number(report.wedge_margin)}};
    diag["tolerance"] = {{"abs", json_number(report.tolerance.abs)},
                         {"rel", json_number(report.tolerance.rel)}};
    diag["notes"] = report.notes;
    out["diagnostics"] = diag;
    return out;
}

ojson residual_to_json(const ResidualReport& residual) {
    ojson out;
    out["max_residual"] = json_number(residual.max_residual);
    out["worst"] = ojson::array({json_number(residual.worst[0]), json_number(residual.worst[1]),
                                 json_number(residual.worst[2])});
    out["evaluated"] = residual.evaluated;
    return out;
}

std::string report_to_table(const ValidationReport& report) {
    std::ostringstream os;
    os << "verdict: " << to_string(report.verdict) << " (" << report.summary() << ")\n";
    std::size_t id_width = 10;
    for (const auto& c : report.conditions) id_width = std::max(id_width, c.id.size() + 2);
    os << pad("condition", id_width) << pad("status", 14) << pad("margin", 20) << "witness\n";
    for (const auto& c : report.conditions) {
        std::string status(to_string(c.status));
        if (c.heuristic) status += "*";
        std::string where = point(c.witness);
        if (c.rectangle) {
            const auto& r = *c.rectangle;
            where = "(" + format_number(r[0]) + ", " + format_number(r[1]) + ") x (" +
                    format_number(r[2]) + ", " + format_number(r[3]) + ")";
        }
        os << pad(c.id, id_width) << pad(status, 14) << pad(format_number(c.margin), 20) << where
           << "\n";
    }
    if (!report.values.empty()) {
        os << "diagnostics:\n";
        for (const auto& [k, v] : report.values) os << "  " << k << " = " << format_number(v) << "\n";
    }
    for (const auto& n : report.notes) os << "note: " << n << "\n";
    if (std::any_of(report.conditions.begin(), report.conditions.end(),
                    [](const ConditionResult& c) { return c.heuristic; })) {
        os << "* heuristic check\n";
    }
    return os.str();
}

}  // namespace semibiv
