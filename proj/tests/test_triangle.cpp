#include <doctest.h>

#include <cmath>
#include <fstream>

#include "dfcl/triangle.hpp"
#include "test_util.hpp"

using namespace dfcl;

TEST_CASE("incremental ingestion cumulates row-wise") {
  const auto t = test::real_triangle(1.0);
  CHECK(t.size() == 9);
  CHECK(t(0, 0) == doctest::Approx(594.6975).epsilon(1e-12));
  CHECK(t(0, 1) == doctest::Approx(966.8211).epsilon(1e-12));
  CHECK(t(9, 0) == doctest::Approx(567.5568).epsilon(1e-12));
}

TEST_CASE("scale multiplies every cell") {
  const auto t = test::real_triangle(10000.0);
  CHECK(t(0, 0) == doctest::Approx(5946975.0).epsilon(1e-12));
  // factors are scale-invariant; checked in the chain ladder tests
}

TEST_CASE("cumulative layout with identity scale is returned unchanged") {
  const auto t = test::toy_constant_ratio();
  CHECK(t(0, 0) == 100.0);
  CHECK(t(0, 2) == 300.0);
  CHECK(t(2, 0) == 100.0);
  CHECK(std::isnan(t(2, 1)));
}

TEST_CASE("anti-diagonal") {
  const auto toy = test::toy_constant_ratio();
  const Eigen::VectorXd d = anti_diagonal(toy);
  REQUIRE(d.size() == 3);
  CHECK(d(0) == 300.0);
  CHECK(d(1) == 200.0);
  CHECK(d(2) == 100.0);

  const Eigen::VectorXd syn = anti_diagonal(test::synthetic_triangle());
  CHECK(syn(0) == doctest::Approx(1084.24));

  const Eigen::VectorXd real = anti_diagonal(test::real_triangle());
  CHECK(real(9) == doctest::Approx(567.5568));
}

TEST_CASE("index sets partition the grid") {
  const auto t = test::real_triangle();
  const auto obs = observed_cells(t);
  const auto fut = future_cells(t);
  const int I = t.size();
  CHECK(static_cast<int>(obs.size()) == (I + 1) * (I + 2) / 2);
  CHECK(static_cast<int>(obs.size() + fut.size()) == (I + 1) * (I + 1));
  CHECK(residual_cell_count(I) == I * (I + 1) / 2);
  for (const auto& [i, j] : obs) CHECK(i + j <= I);
  for (const auto& [i, j] : fut) CHECK(i + j > I);
}

TEST_CASE("differencing a loaded incremental triangle recovers the input") {
  const auto t = test::real_triangle(1.0);
  // row 0 increments
  const double y01 = t(0, 1) - t(0, 0);
  CHECK(y01 == doctest::Approx(372.1236).epsilon(1e-12));
  const double y09 = t(0, 9) - t(0, 8);
  CHECK(y09 == doctest::Approx(1.5813).epsilon(1e-9));
}

TEST_CASE("negative increments are allowed, non-positive cumulatives are not") {
  // cumulative dips from 200 to 150: legal
  CHECK_NOTHROW(triangle_from_rows({{100, 200, 150}, {100, 120}, {100}},
                                   TriangleLayout::Cumulative));
  // zero cell in the observed region: rejected
  CHECK_THROWS_AS(triangle_from_rows({{100, 0, 150}, {100, 120}, {100}},
                                     TriangleLayout::Cumulative),
                  std::invalid_argument);
  // incremental input whose cumulation goes negative: rejected
  CHECK_THROWS_AS(triangle_from_rows({{100, -200, 50}, {100, 20}, {100}},
                                     TriangleLayout::Incremental),
                  std::invalid_argument);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(triangle_from_rows({{1.0, 2.0}, {1.0, 2.0}, {1.0}},
                                     TriangleLayout::Cumulative),
                  std::invalid_argument);
  CHECK_THROWS_AS(triangle_from_rows({}, TriangleLayout::Cumulative),
                  std::invalid_argument);
  CHECK_THROWS_AS(triangle_from_rows({{1.0}}, TriangleLayout::Cumulative, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(triangle_from_rows({{1.0}}, TriangleLayout::Cumulative, -2.0),
                  std::invalid_argument);
}

TEST_CASE("loader rejects malformed files") {
  const auto dir = std::filesystem::temp_directory_path();

  const auto bad_number = dir / "dfcl_bad_number.csv";
  {
    std::ofstream out(bad_number);
    out << "100,abc\n120,\n";
  }
  CHECK_THROWS_AS(load_triangle(bad_number, TriangleLayout::Cumulative),
                  std::invalid_argument);

  const auto bad_blank = dir / "dfcl_bad_blank.csv";
  {
    std::ofstream out(bad_blank);
    out << "100,\n120,\n";  // blank inside the observed region
  }
  CHECK_THROWS_AS(load_triangle(bad_blank, TriangleLayout::Cumulative),
                  std::invalid_argument);

  const auto below_diag = dir / "dfcl_below_diag.csv";
  {
    std::ofstream out(below_diag);
    out << "100,200\n120,999\n";  // value below the anti-diagonal
  }
  CHECK_THROWS_AS(load_triangle(below_diag, TriangleLayout::Cumulative),
                  std::invalid_argument);

  CHECK_THROWS_AS(load_triangle(dir / "dfcl_does_not_exist.csv",
                                TriangleLayout::Cumulative),
                  std::invalid_argument);
}

TEST_CASE("header row is skipped when requested") {
  const auto path = std::filesystem::temp_directory_path() / "dfcl_header.csv";
  {
    std::ofstream out(path);
    out << "dev0,dev1\n100,200\n120,\n";
  }
  const auto t = load_triangle(path, TriangleLayout::Cumulative, 1.0, true);
  CHECK(t(0, 1) == 200.0);
  CHECK_THROWS_AS(load_triangle(path, TriangleLayout::Cumulative, 1.0, false),
                  std::invalid_argument);
}
