#include "dfcl/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dfcl::csv {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<NumericRow> read_numeric(const std::filesystem::path& path,
                                     bool skip_header) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path.string());

  std::vector<NumericRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && skip_header) continue;
    if (trim(line).empty()) continue;
    NumericRow row;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      cell = trim(cell);
      if (cell.empty()) {
        row.push_back(std::nullopt);
        continue;
      }
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("unparsable number '" + cell + "' at " +
                                    path.string() + ":" + std::to_string(lineno) +
                                    " column " + std::to_string(col));
      }
    }
    // a trailing comma means one more empty cell
    if (!line.empty() && line.back() == ',') row.push_back(std::nullopt);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  auto res = std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf, static_cast<std::size_t>(res));
  // prefer the shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) return buf;
  }
  return s;
}

void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  if (!header.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out << ',';
      out << header[i];
    }
    out << '\n';
  }
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << ',';
      out << format_double(r[i]);
    }
    out << '\n';
  }
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace dfcl::csv
