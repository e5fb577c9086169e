#ifndef HEISLAB_REPORT_HPP
#define HEISLAB_REPORT_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "heislab/errors.hpp"

namespace heis {

inline constexpr std::string_view version = "0.1.0";

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct ReportMeta {
    std::string version{heis::version};
    std::uint64_t seed = 0;
    std::string timestamp;
};

/// Tabular result of one subcommand plus a free-form summary object.
struct Report {
    std::string command;
    ReportMeta meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    Json summary = Json::object();

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            throw DimensionError("row has " + std::to_string(row.size()) + " cells, expected " +
                                 std::to_string(columns.size()));
        rows.push_back(std::move(row));
    }
};

/// SOURCE_DATE_EPOCH when set, otherwise the epoch, so that identical runs
/// produce identical bytes.
inline std::string report_timestamp() {
    std::time_t t = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        long long v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && ptr == s.data() + s.size() && v >= 0) t = static_cast<std::time_t>(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Shortest round-trip text: fixed for |v| in [1e-4, 1e6), scientific
/// otherwise, "0" for zero.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    const double a = std::abs(v);
    const auto fmt = (a >= 1e-4 && a < 1e6) ? std::chars_format::fixed : std::chars_format::scientific;
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, fmt);
    if (ec != std::errc{}) throw ParameterError("number formatting failed");
    return {buf, ptr};
}

inline std::string format_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
            std::string out = "\"";
            for (char ch : s) {
                if (ch == '"') out += '"';
                out += ch;
            }
            return out + '"';
        }
    };
    return std::visit(Visitor{}, c);
}

inline Json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return Json(v); }, c);
}

/// Header row then one line per row. The summary goes to `notes` as
/// "# key: value" lines when given.
inline void emit_csv(const Report& r, std::ostream& out, std::ostream* notes = nullptr) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << format_cell(r.columns[i]);
    out << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
    if (notes) {
        *notes << "# command: " << r.command << '\n';
        for (const auto& [k, v] : r.summary.items())
            *notes << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
}

inline Json to_json(const Report& r) {
    Json j;
    j["meta"] = {{"command", r.command},
                 {"version", r.meta.version},
                 {"seed", r.meta.seed},
                 {"timestamp", r.meta.timestamp}};
    j["columns"] = r.columns;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json o = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) o[r.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
    j["summary"] = r.summary;
    return j;
}

/// {meta, columns, rows, summary}; doubles use shortest round-trip digits.
/// Non-finite numbers are written as null.
inline void emit_json(const Report& r, std::ostream& out) { out << to_json(r).dump(2) << '\n'; }

/// Inverse of to_json for reports written by emit_json.
inline Report from_json(const Json& j) {
    Report r;
    r.command = j.at("meta").at("command").get<std::string>();
    r.meta.version = j.at("meta").at("version").get<std::string>();
    r.meta.seed = j.at("meta").at("seed").get<std::uint64_t>();
    r.meta.timestamp = j.at("meta").at("timestamp").get<std::string>();
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& o : j.at("rows")) {
        std::vector<Cell> row;
        for (const auto& c : r.columns) {
            const Json& v = o.at(c);
            if (v.is_boolean()) row.emplace_back(v.get<bool>());
            else if (v.is_number_integer()) row.emplace_back(v.get<std::int64_t>());
            else if (v.is_number()) row.emplace_back(v.get<double>());
            else if (v.is_null()) row.emplace_back(std::nan(""));
            else row.emplace_back(v.get<std::string>());
        }
        r.rows.push_back(std::move(row));
    }
    r.summary = j.at("summary");
    return r;
}

} // namespace heis

#endif
