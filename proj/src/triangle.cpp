#include "dfcl/triangle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dfcl/csv.hpp"

namespace dfcl {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ClaimsTriangle::ClaimsTriangle(Eigen::MatrixXd cumulative)
    : values_(std::move(cumulative)) {
  if (values_.rows() != values_.cols())
    throw std::invalid_argument(
        "triangle must be square (accident years == development years), got " +
        std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
  if (values_.rows() < 1) throw std::invalid_argument("empty triangle");
  size_ = static_cast<int>(values_.rows()) - 1;
  for (int i = 0; i <= size_; ++i) {
    for (int j = 0; j <= size_; ++j) {
      if (i + j <= size_) {
        double v = values_(i, j);
        if (!std::isfinite(v))
          throw std::invalid_argument("missing observed cell (" +
                                      std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        if (v <= 0.0)
          throw std::invalid_argument("non-positive cumulative claim at (" +
                                      std::to_string(i) + "," +
                                      std::to_string(j) +
                                      "): " + std::to_string(v));
      } else {
        values_(i, j) = kNaN;
      }
    }
  }
}

ClaimsTriangle triangle_from_rows(const std::vector<std::vector<double>>& rows,
                                  TriangleLayout layout, double scale) {
  if (scale <= 0.0) throw std::invalid_argument("scale must be positive");
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::invalid_argument("empty triangle");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, kNaN);
  for (int i = 0; i < n; ++i) {
    const int expected = n - i;
    if (static_cast<int>(rows[i].size()) != expected)
      throw std::invalid_argument(
          "row " + std::to_string(i) + " has " +
          std::to_string(rows[i].size()) + " cells, expected " +
          std::to_string(expected));
    double acc = 0.0;
    for (int j = 0; j < expected; ++j) {
      double v = rows[i][static_cast<std::size_t>(j)];
      if (layout == TriangleLayout::Incremental) {
        acc += v;
        m(i, j) = acc * scale;
      } else {
        m(i, j) = v * scale;
      }
    }
  }
  return ClaimsTriangle(std::move(m));
}

ClaimsTriangle load_triangle(const std::filesystem::path& path,
                             TriangleLayout layout, double scale,
                             bool skip_header) {
  auto raw = csv::read_numeric(path, skip_header);
  if (raw.empty()) throw std::invalid_argument("empty triangle file: " + path.string());
  const int n = static_cast<int>(raw.size());

  // Rows may be padded with trailing blanks up to a rectangle, or stop at
  // the anti-diagonal; both are accepted. Width beyond n, or a blank in the
  // observed region, is not.
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& r = raw[static_cast<std::size_t>(i)];
    if (static_cast<int>(r.size()) > n)
      throw std::invalid_argument("row " + std::to_string(i) + " of " +
                                  path.string() + " has " +
                                  std::to_string(r.size()) +
                                  " cells; triangle has only " +
                                  std::to_string(n) + " rows");
    const int expected = n - i;
    for (int j = 0; j < static_cast<int>(r.size()); ++j) {
      const auto& cell = r[static_cast<std::size_t>(j)];
      if (j < expected) {
        if (!cell.has_value())
          throw std::invalid_argument("blank cell in observed region at row " +
                                      std::to_string(i) + " column " +
                                      std::to_string(j) + " of " + path.string());
        rows[static_cast<std::size_t>(i)].push_back(*cell);
      } else if (cell.has_value()) {
        throw std::invalid_argument(
            "unexpected value below the anti-diagonal at row " +
            std::to_string(i) + " column " + std::to_string(j) + " of " +
            path.string());
      }
    }
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != expected)
      throw std::invalid_argument("row " + std::to_string(i) + " of " +
                                  path.string() + " is too short");
  }
  return triangle_from_rows(rows, layout, scale);
}

Eigen::VectorXd anti_diagonal(const ClaimsTriangle& t) {
  const int I = t.size();
  Eigen::VectorXd d(I + 1);
  for (int i = 0; i <= I; ++i) d(i) = t(i, I - i);
  return d;
}

std::vector<std::pair<int, int>> observed_cells(const ClaimsTriangle& t) {
  std::vector<std::pair<int, int>> cells;
  const int I = t.size();
  cells.reserve(static_cast<std::size_t>((I + 1) * (I + 2) / 2));
  for (int i = 0; i <= I; ++i)
    for (int j = 0; i + j <= I; ++j) cells.emplace_back(i, j);
  return cells;
}

std::vector<std::pair<int, int>> future_cells(const ClaimsTriangle& t) {
  std::vector<std::pair<int, int>> cells;
  const int I = t.size();
  for (int i = 0; i <= I; ++i)
    for (int j = I - i + 1; j <= I; ++j) cells.emplace_back(i, j);
  return cells;
}

}  // namespace dfcl
