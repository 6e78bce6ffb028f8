#include "oscwave/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oscwave::csv {

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace {
std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no newline mangling
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    return out;
}

void write_row(std::ofstream& out, const std::vector<double>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) out << ',';
        out << format_number(row[j]);
    }
    out << '\n';
}
}  // namespace

void write_table(const std::string& path, const Table& table) {
    auto out = open_or_throw(path);
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j) out << ',';
        out << table.header[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::runtime_error("csv: row width disagrees with header in " +
                                     path);
        write_row(out, row);
    }
    if (!out) throw std::runtime_error("csv: write failed for " + path);
}

void write_matrix(const std::string& path, const std::string& corner_label,
                  const std::vector<double>& x_axis,
                  const std::vector<double>& times,
                  const std::vector<std::vector<double>>& rows) {
    if (times.size() != rows.size())
        throw std::runtime_error("csv: time axis length disagrees with rows");
    auto out = open_or_throw(path);
    out << corner_label;
    for (double x : x_axis) out << ',' << format_number(x);
    out << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != x_axis.size())
            throw std::runtime_error("csv: row width disagrees with x axis in " +
                                     path);
        out << format_number(times[i]);
        for (double value : rows[i]) out << ',' << format_number(value);
        out << '\n';
    }
    if (!out) throw std::runtime_error("csv: write failed for " + path);
}

}  // namespace oscwave::csv
