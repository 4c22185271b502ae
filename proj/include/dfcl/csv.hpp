#ifndef DFCL_CSV_HPP
#define DFCL_CSV_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dfcl::csv {

/// One parsed CSV row; empty cells become std::nullopt.
using NumericRow = std::vector<std::optional<double>>;

/// Parses a numeric CSV file. Cells must be numbers or blank; anything else
/// throws std::invalid_argument with the offending row/column. When
/// `skip_header` is set the first line is discarded.
std::vector<NumericRow> read_numeric(const std::filesystem::path& path,
                                     bool skip_header = false);

/// Writes a table with an optional header row. Values are formatted with
/// enough digits to round-trip doubles.
void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);

std::string format_double(double v);

}  // namespace dfcl::csv

#endif
