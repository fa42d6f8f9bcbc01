#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "copulacpd/core.hpp"

namespace copulacpd {

/// Comma-separated text with a header row; cells are kept as trimmed strings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Position of `name` in the header, if present.
    std::optional<std::size_t> find(const std::string& name) const;
    /// Column `name` parsed as doubles; throws Parse on a missing column or bad cell.
    std::vector<double> numeric(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Parses a decimal floating-point cell; throws Parse mentioning `where` on failure.
double parse_double(const std::string& text, const std::string& where);

/// Input table: columns x, y and z_1..z_d (d >= 1); an optional t column is carried along as
/// labels; any other column is ignored. The column set is checked before any value is parsed.
struct InputTable {
    Dataset data;
    std::optional<std::vector<std::string>> t;
};

InputTable to_input_table(const CsvTable& table);
InputTable read_input_file(const std::string& path);

/// Formats with 17 significant digits so values survive a text round trip.
std::string format_double(double v);

struct ExtraColumn {
    std::string name;
    std::vector<double> values;
};

void write_csv(std::ostream& out, const Dataset& data, const std::optional<std::vector<std::string>>& t = std::nullopt,
               const std::vector<ExtraColumn>& extra = {});

}  // namespace copulacpd
