#include <doctest.h>

#include <cmath>
#include <random>

#include "dfcl/bootstrap.hpp"
#include "dfcl/synthetic.hpp"
#include "test_util.hpp"

using namespace dfcl;

namespace {

DfclParams constant_params(int J, double f, double s) {
  DfclParams p;
  p.factors = Eigen::VectorXd::Constant(J, f);
  p.sigmas = Eigen::VectorXd::Constant(J, s);
  return p;
}

}  // namespace

TEST_CASE("residuals vanish on a constant-ratio triangle under its own fit") {
  const auto t = test::toy_constant_ratio();
  DfclParams p;
  p.factors = estimate_cl_factors(t);
  p.sigmas = Eigen::VectorXd::Constant(2, 0.7);
  const ResidualSet r = compute_residuals(t, p);
  CHECK(r.count() == 3);
  for (int k = 0; k < r.count(); ++k)
    CHECK(r.values(k) == doctest::Approx(0.0).scale(1.0));
  CHECK(r.mean == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("residuals under the true parameters recover the generating noise") {
  const double bound = std::sqrt(3.0) + 1e-9;

  // a triangle generated by this codebase inverts exactly
  GeneratorSpec spec;
  spec.size = 9;
  spec.factors = Eigen::VectorXd::Constant(9, 1.2);
  spec.sigmas = Eigen::VectorXd::Constant(9, 1.0);
  spec.seed = 4711;
  const auto gen = generate(spec);
  const ResidualSet rg = compute_residuals(gen, constant_params(9, 1.2, 1.0));
  for (int k = 0; k < rg.count(); ++k) CHECK(std::abs(rg.values(k)) <= bound);

  // the bundled synthetic data set carries two outlying cells in accident
  // year 7; the rest sits inside the nominal support
  const auto t = test::synthetic_triangle();
  const ResidualSet r = compute_residuals(t, constant_params(9, 1.2, 1.0));
  CHECK(r.count() == 45);
  int inside = 0;
  for (int k = 0; k < r.count(); ++k)
    if (std::abs(r.values(k)) <= bound) ++inside;
  CHECK(inside == 43);
}

TEST_CASE("moment bookkeeping matches a direct re-summation") {
  const auto t = test::toy_noisy();
  DfclParams p;
  p.factors = estimate_cl_factors(t);
  p.sigmas = Eigen::VectorXd::Constant(2, std::sqrt(0.523810));
  const ResidualSet r = compute_residuals(t, p);
  double m = 0.0;
  for (int k = 0; k < r.count(); ++k) m += r.values(k);
  m /= r.count();
  double s = 0.0;
  for (int k = 0; k < r.count(); ++k)
    s += (r.values(k) - m) * (r.values(k) - m);
  s = std::sqrt(s / (r.count() - 1));
  CHECK(r.mean == doctest::Approx(m).epsilon(1e-14));
  CHECK(r.sd == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("residual count is I(I+1)/2") {
  const auto t = test::real_triangle();
  const ResidualSet r = compute_residuals(t, classical_fit(t));
  CHECK(r.count() == residual_cell_count(t.size()));
  CHECK(r.count() == 45);
}

TEST_CASE("zero sigma rejected") {
  const auto t = test::toy_constant_ratio();
  DfclParams p = constant_params(2, 2.0, 0.0);
  CHECK_THROWS_AS(compute_residuals(t, p), std::invalid_argument);
}

TEST_CASE("zero residual set is a bootstrap fixed point") {
  const auto t = test::toy_constant_ratio();
  DfclParams p;
  p.factors = estimate_cl_factors(t);
  p.sigmas = Eigen::VectorXd::Constant(2, 0.7);
  const ResidualSet r = compute_residuals(t, p);
  const BootstrapDraw d = resample_conditional(t, p, r, 7);
  CHECK(d.factors(0) == doctest::Approx(p.factors(0)).epsilon(1e-14));
  CHECK(d.factors(1) == doctest::Approx(p.factors(1)).epsilon(1e-14));
  CHECK(d.variances(0) == doctest::Approx(0.0).scale(1.0));
  // unconditional coincides when residual spread is zero
  const BootstrapDraw u = resample_unconditional(t, p, r, 7);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; i + j < 3; ++j)
      CHECK(u.triangle(i, j) == doctest::Approx(d.triangle(i, j)).epsilon(1e-14));
}

TEST_CASE("draws are deterministic under a fixed seed") {
  const auto t = test::synthetic_triangle();
  const DfclParams p = classical_fit(t);
  const ResidualSet r = compute_residuals(t, p);
  const BootstrapDraw a = resample_conditional(t, p, r, 42);
  const BootstrapDraw b = resample_conditional(t, p, r, 42);
  for (int i = 0; i <= 9; ++i)
    for (int j = 0; i + j <= 9; ++j) CHECK(a.triangle(i, j) == b.triangle(i, j));
  CHECK(a.factors == b.factors);
}

TEST_CASE("conditional and unconditional draws differ when residuals spread") {
  const auto t = test::synthetic_triangle();
  const DfclParams p = classical_fit(t);
  const ResidualSet r = compute_residuals(t, p);
  const BootstrapDraw c = resample_conditional(t, p, r, 5);
  const BootstrapDraw u = resample_unconditional(t, p, r, 5);
  bool differ = false;
  for (int i = 0; i < 10 && !differ; ++i)
    for (int j = 1; i + j <= 9; ++j)
      if (c.triangle(i, j) != u.triangle(i, j)) {
        differ = true;
        break;
      }
  CHECK(differ);
}

TEST_CASE("conditional regressors are the observed predecessors") {
  // every simulated cell must reproduce the update formula exactly when the
  // drawn residual is recovered from it
  const auto t = test::toy_noisy();
  DfclParams p;
  p.factors = estimate_cl_factors(t);
  p.sigmas = Eigen::VectorXd::Constant(2, 0.72);
  const ResidualSet r = compute_residuals(t, p);
  const BootstrapDraw d = resample_conditional(t, p, r, 11);
  for (int i = 0; i < 3; ++i) {
    for (int j = 1; i + j <= 2; ++j) {
      const double implied = (d.triangle(i, j) - p.factors(j - 1) * t(i, j - 1)) /
                             (p.sigmas(j - 1) * std::sqrt(t(i, j - 1)));
      bool found = false;
      for (int k = 0; k < r.count(); ++k)
        if (std::abs(r.values(k) - implied) < 1e-9) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("refit uses the exact bootstrap formulas with observed denominators") {
  const auto t = test::synthetic_triangle();
  const DfclParams p = classical_fit(t);
  const ResidualSet r = compute_residuals(t, p);
  const BootstrapDraw d = resample_conditional(t, p, r, 314);
  const int I = t.size();
  for (int j = 0; j < I; ++j) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i + j + 1 <= I; ++i) {
      num += d.triangle(i, j + 1);
      den += t(i, j);
    }
    CHECK(d.factors(j) == doctest::Approx(num / den).epsilon(1e-13));
  }
  for (int j = 0; j < I - 1; ++j) {
    double acc = 0.0;
    for (int i = 0; i + j + 1 <= I; ++i) {
      const double dev = d.triangle(i, j + 1) / t(i, j) - d.factors(j);
      acc += t(i, j) * dev * dev;
    }
    CHECK(d.variances(j) == doctest::Approx(acc / (I - j - 1)).epsilon(1e-12));
  }
}

TEST_CASE("positivity repair throws once exhausted") {
  const auto t = test::toy_constant_ratio();
  DfclParams p = constant_params(2, 2.0, 50.0);
  ResidualSet r;
  r.values = Eigen::VectorXd::Constant(4, -10.0);  // every draw forces negatives
  r.mean = -10.0;
  r.sd = 0.0;
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(
      resample_triangle(t, p, r, ResamplingScheme::Conditional, rng),
      PositivityRepairError);
}

TEST_CASE("hand-built draws give the brute-force sample variance") {
  const auto t = triangle_from_rows({{100, 150}, {100}}, TriangleLayout::Cumulative);
  std::vector<BootstrapDraw> draws(3);
  for (int k = 0; k < 3; ++k) {
    draws[static_cast<std::size_t>(k)].factors = Eigen::VectorXd::Constant(1, 1.0 + 0.1 * k);
  }
  const ParamError pe = freq_param_error(draws, t);
  // year 1: C = 100, products {1.0, 1.1, 1.2}, divisor-2 variance 0.01
  CHECK(pe.per_year(1) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(std::sqrt(pe.per_year(1)) == doctest::Approx(10.0).epsilon(1e-12));
  // year 0 has an empty product: zero variance
  CHECK(pe.per_year(0) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(freq_param_error({draws[0]}, t), std::invalid_argument);
}

TEST_CASE("identical draws give zero estimation error") {
  const auto t = test::toy_constant_ratio();
  DfclParams p;
  p.factors = estimate_cl_factors(t);
  p.sigmas = Eigen::VectorXd::Constant(2, 0.7);
  const ResidualSet r = compute_residuals(t, p);  // all zero
  const auto draws = bootstrap_draws(t, p, r, ResamplingScheme::Conditional, 8, 3);
  const ParamError pe = freq_param_error(draws, t);
  CHECK(pe.total == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("bootstrap estimation error reproduces the reference magnitude") {
  const auto t = test::real_triangle(10000.0);
  const DfclParams p = classical_fit(t);
  const ResidualSet r = compute_residuals(t, p);
  const auto draws =
      bootstrap_draws(t, p, r, ResamplingScheme::Conditional, 1000, 2024);
  const ParamError pe = freq_param_error(draws, t);
  const double total = std::sqrt(pe.total);
  CHECK(total > 157680.0 * 0.85);
  CHECK(total < 157680.0 * 1.15);
  const double year9 = std::sqrt(pe.per_year(9));
  CHECK(year9 > 108547.0 * 0.8);
  CHECK(year9 < 108547.0 * 1.2);
}
