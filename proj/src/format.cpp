#include "tqd/format.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace tqd {

std::string format_number(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0.0) {
        return "0";
    }
    char buf[64];
    const double mag = std::abs(x);
    if (mag < 1e-4 || mag >= 1e6) {
        std::snprintf(buf, sizeof buf, "%.11e", x);
    } else {
        // %g stays in fixed notation for exponents in [-4, 12).
        std::snprintf(buf, sizeof buf, "%.12g", x);
    }
    return buf;
}

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size()) {
        throw std::invalid_argument("Table: row width does not match the header");
    }
    rows.push_back(std::move(row));
}

std::optional<OutputFormat> parse_output_format(const std::string& name)
{
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json") {
        return OutputFormat::json;
    }
    return std::nullopt;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string csv_cell(const Cell& cell)
{
    if (const auto* d = std::get_if<double>(&cell)) {
        return format_number(*d);
    }
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return csv_field(*s);
    }
    return {};
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_cell(const Cell& cell)
{
    if (const auto* d = std::get_if<double>(&cell)) {
        return std::isfinite(*d) ? format_number(*d) : "null";
    }
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return json_string(*s);
    }
    return "null";
}

} // namespace

void write_csv(std::ostream& out, const Table& table)
{
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << csv_field(table.columns[c]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << csv_cell(row[c]);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table)
{
    out << '[';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << (r ? ",\n " : "\n ") << '{';
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? ", " : "") << json_string(table.columns[c]) << ": " << json_cell(table.rows[r][c]);
        }
        out << '}';
    }
    out << (table.rows.empty() ? "]\n" : "\n]\n");
}

void write_table(std::ostream& out, const Table& table, OutputFormat format)
{
    if (format == OutputFormat::csv) {
        write_csv(out, table);
    } else {
        write_json(out, table);
    }
}

} // namespace tqd
