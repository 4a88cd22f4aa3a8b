#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tqd {

/// 12 significant digits; lowercase scientific when 0 < |x| < 1e-4 or |x| >= 1e6.
/// Negative zero prints as "0", non-finite values as "nan" / "inf" / "-inf".
std::string format_number(double x);

using Cell = std::variant<std::monostate, double, std::string>;

/// Rectangular output: every row has one cell per column.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// Throws std::invalid_argument when the row width is wrong.
    void add_row(std::vector<Cell> row);
};

enum class OutputFormat { csv, json };

std::optional<OutputFormat> parse_output_format(const std::string& name);

/// RFC 4180: header row, comma separated, CRLF-free ("\n" line ends), fields
/// quoted when they contain a comma, quote or newline. Empty cell for null.
void write_csv(std::ostream& out, const Table& table);

/// Array of objects with the column names as keys, null for empty cells and
/// for non-finite numbers.
void write_json(std::ostream& out, const Table& table);

void write_table(std::ostream& out, const Table& table, OutputFormat format);

} // namespace tqd
