#include "hvdp/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hvdp/errors.hpp"

namespace hvdp {

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw InvalidArgument("row has " + std::to_string(row.size()) + " values, table has " +
                              std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::size_t ResultTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw InvalidArgument("no column named '" + name + "'");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw InvalidArgument("not a number: '" + s + "'");
    return v;
}

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (const auto& line : table.provenance) out += "# " + line + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
        out += "\n";
    }
    return out;
}

namespace {
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) parts.push_back(cur);
    if (!line.empty() && line.back() == ',') parts.emplace_back();
    return parts;
}
}  // namespace

ResultTable from_csv(const std::string& text) {
    ResultTable t;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.provenance.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
        } else if (!have_header) {
            t.columns = split(line);
            have_header = true;
        } else {
            std::vector<double> row;
            for (const auto& cell : split(line)) row.push_back(parse_double(cell));
            t.add_row(std::move(row));
        }
    }
    if (!have_header) throw InvalidArgument("CSV has no header line");
    return t;
}

void write_csv(const ResultTable& table, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << to_csv(table);
    if (!f) throw IoError("write failed for '" + path.string() + "'");
}

ResultTable read_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_csv(ss.str());
}

}  // namespace hvdp
