#include "dfcl/synthetic.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dfcl/bootstrap.hpp"

namespace dfcl {

ClaimsTriangle generate(const GeneratorSpec& spec) {
  const int I = spec.size;
  if (I < 1) throw std::invalid_argument("generator needs size >= 1");
  if (spec.factors.size() != I || spec.sigmas.size() != I)
    throw std::invalid_argument("generator parameter vectors must have length I");
  if (!(spec.first_col_lo > 0.0) || spec.first_col_hi < spec.first_col_lo)
    throw std::invalid_argument("first-column support must be positive");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> first(spec.first_col_lo,
                                               spec.first_col_hi);
  const double root3 = std::sqrt(3.0);
  std::uniform_real_distribution<double> uni(-root3, root3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto eps = [&] {
    return spec.law == ResidualLaw::UniformSqrt3 ? uni(rng) : gauss(rng);
  };

  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(
      I + 1, I + 1, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i <= I; ++i) m(i, 0) = first(rng);
  for (int i = 0; i < I; ++i) {
    for (int j = 1; i + j <= I; ++j) {
      const double prev = m(i, j - 1);
      double v = 0.0;
      bool ok = false;
      for (int attempt = 0; attempt <= spec.max_redraws; ++attempt) {
        v = spec.factors(j - 1) * prev +
            spec.sigmas(j - 1) * std::sqrt(prev) * eps();
        if (v > 0.0) {
          ok = true;
          break;
        }
      }
      if (!ok)
        throw PositivityRepairError(
            "generated cell (" + std::to_string(i) + "," + std::to_string(j) +
            ") stayed non-positive; sigma too large relative to f*C");
      m(i, j) = v;
    }
  }
  return ClaimsTriangle(std::move(m));
}

}  // namespace dfcl
