#pragma once

#include <string>
#include <vector>

namespace oscwave::csv {

// All numeric output goes through one formatter (%.17g) so that identical
// runs produce byte-identical files.

std::string format_number(double value);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Writes header + rows; throws std::runtime_error when the file cannot be
/// opened or a row width disagrees with the header.
void write_table(const std::string& path, const Table& table);

/// Matrix with an x-axis header row: first header cell is `corner_label`,
/// the rest are the x coordinates; each data row starts with its time stamp.
void write_matrix(const std::string& path, const std::string& corner_label,
                  const std::vector<double>& x_axis,
                  const std::vector<double>& times,
                  const std::vector<std::vector<double>>& rows);

}  // namespace oscwave::csv
