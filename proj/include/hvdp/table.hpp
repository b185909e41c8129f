#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hvdp {

// Rectangular numeric table with '#'-prefixed provenance lines.
struct ResultTable {
    std::vector<std::string> provenance;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);  // throws InvalidArgument on width mismatch
    std::size_t column(const std::string& name) const;
};

// 17 significant digits, locale-independent; NaN and infinities as nan/inf/-inf.
std::string format_double(double v);
double parse_double(const std::string& s);

std::string to_csv(const ResultTable& table);
ResultTable from_csv(const std::string& text);

// Throws IoError with the path in the message.
void write_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_csv(const std::filesystem::path& path);

}  // namespace hvdp
