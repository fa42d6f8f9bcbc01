#include "copulacpd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace copulacpd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

std::optional<std::size_t> CsvTable::find(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return c;
    }
    return std::nullopt;
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
    const auto col = find(name);
    if (!col) throw Error(ErrorCode::Parse, "missing column '" + name + "'");
    std::vector<double> out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out[r] = parse_double(rows[r][*col], "row " + std::to_string(r + 1) + ", column " + name);
    }
    return out;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        auto cells = split_line(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                              " cells, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) throw Error(ErrorCode::Parse, "empty input: no header row");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    return read_csv(in);
}

double parse_double(const std::string& text, const std::string& where) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::Parse, "cannot parse '" + text + "' as a number at " + where);
    }
    return v;
}

InputTable to_input_table(const CsvTable& table) {
    for (const char* name : {"x", "y", "z_1"}) {
        if (!table.find(name)) throw Error(ErrorCode::Parse, std::string("missing required column '") + name + "'");
    }
    std::size_t d = 1;
    while (table.find("z_" + std::to_string(d + 1))) ++d;
    for (const auto& name : table.header) {
        if (name.rfind("z_", 0) != 0) continue;
        std::size_t idx = 0;
        const auto [ptr, ec] = std::from_chars(name.data() + 2, name.data() + name.size(), idx);
        if (ec == std::errc() && ptr == name.data() + name.size() && idx > d) {
            throw Error(ErrorCode::Parse, "column '" + name + "' present but z_" + std::to_string(d + 1) + " missing");
        }
    }

    InputTable out;
    out.data.x = table.numeric("x");
    out.data.y = table.numeric("y");
    const std::size_t n = table.rows.size();
    Matrix z(n, d);
    for (std::size_t c = 0; c < d; ++c) {
        const auto col = table.numeric("z_" + std::to_string(c + 1));
        for (std::size_t r = 0; r < n; ++r) z(r, c) = col[r];
    }
    out.data.z = std::move(z);
    if (const auto tc = table.find("t")) {
        std::vector<std::string> labels(n);
        for (std::size_t r = 0; r < n; ++r) labels[r] = table.rows[r][*tc];
        out.t = std::move(labels);
    }
    validate(out.data);
    return out;
}

InputTable read_input_file(const std::string& path) { return to_input_table(read_csv_file(path)); }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const Dataset& data, const std::optional<std::vector<std::string>>& t,
               const std::vector<ExtraColumn>& extra) {
    const std::size_t n = data.n();
    if (t) out << "t,";
    out << "x,y";
    for (std::size_t c = 0; c < data.d(); ++c) out << ",z_" << c + 1;
    for (const auto& e : extra) out << ',' << e.name;
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        if (t) out << (*t)[i] << ',';
        out << format_double(data.x[i]) << ',' << format_double(data.y[i]);
        for (std::size_t c = 0; c < data.d(); ++c) out << ',' << format_double(data.z(i, c));
        for (const auto& e : extra) out << ',' << format_double(e.values[i]);
        out << '\n';
    }
}

}  // namespace copulacpd
