#include <doctest.h>

#include <random>

#include "dfcl/chainladder.hpp"
#include "dfcl/synthetic.hpp"
#include "test_util.hpp"

using namespace dfcl;

namespace {

// Table-row values the classical fit has to reproduce.
const double kFactors[9] = {1.4925, 1.0778, 1.0229, 1.0148, 1.0070,
                            1.0051, 1.0011, 1.0010, 1.0014};

}  // namespace

TEST_CASE("development factors on the real data") {
  const auto t = test::real_triangle();
  const Eigen::VectorXd f = estimate_cl_factors(t);
  REQUIRE(f.size() == 9);
  for (int j = 0; j < 9; ++j) CHECK(std::abs(f(j) - kFactors[j]) <= 5e-5);
}

TEST_CASE("constant-ratio toy gives exact factors") {
  const Eigen::VectorXd f = estimate_cl_factors(test::toy_constant_ratio());
  REQUIRE(f.size() == 2);
  CHECK(f(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f(1) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("noisy toy factors match the hand-computed column sums") {
  const Eigen::VectorXd f = estimate_cl_factors(test::toy_noisy());
  CHECK(f(0) == doctest::Approx(326.0 / 210.0).epsilon(1e-14));
  CHECK(f(1) == doctest::Approx(1.2).epsilon(1e-14));
}

TEST_CASE("column variance on the noisy toy") {
  const auto t = test::toy_noisy();
  const Eigen::VectorXd f = estimate_cl_factors(t);
  // hand sum: 100*(1.5 - 326/210)^2 + 110*(1.6 - 326/210)^2
  CHECK(column_variance(t, f, 0) == doctest::Approx(0.523810).epsilon(1e-5));
  // tail rule needs J >= 3
  CHECK_THROWS_AS(estimate_cl_variances(t, f), std::invalid_argument);
}

TEST_CASE("zero column variance when ratios are identical") {
  // 5x5 triangle, column 0 with a common ratio, noise later on
  const auto t = triangle_from_rows({{100, 150, 180, 200, 210},
                                     {200, 300, 370, 400},
                                     {150, 225, 260},
                                     {120, 180},
                                     {90}},
                                    TriangleLayout::Cumulative);
  const Eigen::VectorXd f = estimate_cl_factors(t);
  CHECK(f(0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(column_variance(t, f, 0) == doctest::Approx(0.0).scale(1.0));
  const Eigen::VectorXd s2 = estimate_cl_variances(t, f);
  CHECK(s2(0) == doctest::Approx(0.0).scale(1.0));
  CHECK(s2(1) > 0.0);
}

TEST_CASE("variances on the real data at scale 10,000") {
  const auto t = test::real_triangle(10000.0);
  const Eigen::VectorXd f = estimate_cl_factors(t);
  const Eigen::VectorXd s2 = estimate_cl_variances(t, f);
  const Eigen::VectorXd s = s2.cwiseSqrt();
  // frozen full-precision values, cross-checked with an independent
  // implementation of the same estimators
  const double expected[9] = {135.25292, 33.80281, 15.75964, 19.84665,
                              9.336236,  2.001022, 0.8231620, 0.2194371,
                              0.05849714};
  for (int j = 0; j < 9; ++j)
    CHECK(s(j) == doctest::Approx(expected[j]).epsilon(1e-5));
  // the tail picks the first candidate here: s2_8 = s2_7^2 / s2_6
  CHECK(s2(8) == doctest::Approx(s2(7) * s2(7) / s2(6)).epsilon(1e-12));
}

TEST_CASE("tail rule error cases") {
  // sigma2_{J-3} = 0 makes the tail rule divide by zero
  const auto t = triangle_from_rows({{100, 150, 180, 200},
                                     {200, 300, 370},
                                     {150, 225},
                                     {120}},
                                    TriangleLayout::Cumulative);
  const Eigen::VectorXd f = estimate_cl_factors(t);
  CHECK_THROWS_AS(estimate_cl_variances(t, f), std::invalid_argument);
}

TEST_CASE("prediction anchors at the anti-diagonal") {
  const auto toy = test::toy_constant_ratio();
  const auto pred = predict(toy, estimate_cl_factors(toy));
  CHECK(pred.completed(2, 2) == doctest::Approx(300.0).epsilon(1e-14));
  CHECK(pred.reserves(2) == doctest::Approx(200.0).epsilon(1e-14));
  CHECK(pred.reserves(0) == 0.0);
  // anchoring is exact
  CHECK(pred.completed(1, 1) == toy(1, 1));
}

TEST_CASE("reserves on the real data at scale 10,000") {
  const auto t = test::real_triangle(10000.0);
  const auto pred = predict(t, estimate_cl_factors(t));
  CHECK(std::abs(pred.total_reserve - 6047061.0) <= 5.0);
  CHECK(std::abs(pred.reserves(9) - 3950814.0) <= 5.0);
}

TEST_CASE("process variance per year and total") {
  const auto t = test::real_triangle(10000.0);
  const Eigen::VectorXd f = estimate_cl_factors(t);
  const Eigen::VectorXd s2 = estimate_cl_variances(t, f);
  const auto pv = freq_process_variance(t, f, s2);
  CHECK(pv.per_year(0) == 0.0);  // fully developed year
  // frozen values from the independent reference implementation
  CHECK(std::sqrt(pv.per_year(1)) == doctest::Approx(190.885).epsilon(1e-4));
  CHECK(std::sqrt(pv.per_year(9)) == doctest::Approx(389782.6).epsilon(1e-4));
  CHECK(std::sqrt(pv.total) == doctest::Approx(424379.0).epsilon(1e-4));
  CHECK(pv.total == doctest::Approx(pv.per_year.sum()).epsilon(1e-12));
}

TEST_CASE("scale invariance of factors, linear scaling of variances") {
  const auto t1 = test::real_triangle(1.0);
  const auto tc = test::real_triangle(137.25);
  const Eigen::VectorXd f1 = estimate_cl_factors(t1);
  const Eigen::VectorXd fc = estimate_cl_factors(tc);
  for (int j = 0; j < 9; ++j) CHECK(fc(j) == doctest::Approx(f1(j)).epsilon(1e-12));
  const Eigen::VectorXd v1 = estimate_cl_variances(t1, f1);
  const Eigen::VectorXd vc = estimate_cl_variances(tc, fc);
  for (int j = 0; j < 9; ++j)
    CHECK(vc(j) == doctest::Approx(137.25 * v1(j)).epsilon(1e-9));
}

TEST_CASE("noise-free generation recovers the factors to machine precision") {
  GeneratorSpec spec;
  spec.size = 6;
  spec.factors = Eigen::VectorXd::Constant(6, 1.3);
  spec.sigmas = Eigen::VectorXd::Zero(6);
  spec.seed = 99;
  const auto t = generate(spec);
  const Eigen::VectorXd f = estimate_cl_factors(t);
  for (int j = 0; j < 6; ++j) CHECK(f(j) == doctest::Approx(1.3).epsilon(1e-13));
}

TEST_CASE("degenerate triangle is rejected") {
  const auto t = triangle_from_rows({{100.0}}, TriangleLayout::Cumulative);
  CHECK_THROWS_AS(estimate_cl_factors(t), std::invalid_argument);
}
