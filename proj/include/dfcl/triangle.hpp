#ifndef DFCL_TRIANGLE_HPP
#define DFCL_TRIANGLE_HPP

#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dfcl {

enum class TriangleLayout { Cumulative, Incremental };

/// Square run-off triangle of cumulative claims. Rows are accident years
/// i = 0..I, columns development years j = 0..J with I = J. Cells with
/// i + j <= I are observed; the rest of the matrix holds NaN.
///
/// Every observed cell must be strictly positive. Monotonicity along a row
/// is not required (negative increments are allowed).
///
/// Immutable after construction; safe to share across threads.
class ClaimsTriangle {
 public:
  /// `cumulative` is an (I+1)x(I+1) matrix; entries below the anti-diagonal
  /// are ignored and normalised to NaN.
  explicit ClaimsTriangle(Eigen::MatrixXd cumulative);

  /// Index of the last accident year (== last development year).
  int size() const { return size_; }

  double operator()(int i, int j) const { return values_(i, j); }
  const Eigen::MatrixXd& values() const { return values_; }

  bool is_observed(int i, int j) const {
    return i >= 0 && j >= 0 && i + j <= size_;
  }

 private:
  Eigen::MatrixXd values_;
  int size_ = 0;
};

/// Reads a triangle from CSV (row = accident year, column = development
/// year, blank below the anti-diagonal). Incremental input is cumulated
/// row-wise; every value is multiplied by `scale` afterwards.
ClaimsTriangle load_triangle(const std::filesystem::path& path,
                             TriangleLayout layout, double scale = 1.0,
                             bool skip_header = false);

ClaimsTriangle triangle_from_rows(const std::vector<std::vector<double>>& rows,
                                  TriangleLayout layout, double scale = 1.0);

/// The latest observed diagonal C_{i,I-i}, i = 0..I.
Eigen::VectorXd anti_diagonal(const ClaimsTriangle& t);

/// Observed cells (i+j <= I) in row-major order.
std::vector<std::pair<int, int>> observed_cells(const ClaimsTriangle& t);

/// Future cells (i+j > I) in row-major order.
std::vector<std::pair<int, int>> future_cells(const ClaimsTriangle& t);

/// Number of residual-bearing cells {i+j <= I, j > 0}: I(I+1)/2.
inline int residual_cell_count(int size) { return size * (size + 1) / 2; }

}  // namespace dfcl

#endif
