#ifndef DFCL_BOOTSTRAP_HPP
#define DFCL_BOOTSTRAP_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dfcl/chainladder.hpp"
#include "dfcl/triangle.hpp"

namespace dfcl {

/// Thrown when a simulated cell stays non-positive after the per-cell redraw
/// budget is exhausted.
class PositivityRepairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Standardised one-step deviations of the observed triangle under a
/// parameter point:
///   e_{i,j} = (C_{i,j} - f_{j-1} C_{i,j-1}) / (sigma_{j-1} sqrt(C_{i,j-1}))
/// for i+j <= I, j > 0, pooled row-major into one empirical distribution.
struct ResidualSet {
  Eigen::VectorXd values;  // n = I(I+1)/2 entries
  double mean = 0.0;       // mu*
  double sd = 0.0;         // s*, divisor n-1

  int count() const { return static_cast<int>(values.size()); }
};

ResidualSet compute_residuals(const ClaimsTriangle& t, const DfclParams& p);

enum class ResamplingScheme { Conditional, Unconditional };

/// One synthetic triangle D_I^* plus its refit parameters.
struct BootstrapDraw {
  Eigen::MatrixXd triangle;   // observed mask only; NaN elsewhere
  Eigen::VectorXd factors;    // f*_j
  Eigen::VectorXd variances;  // sigma2*_j
  DfclParams source;          // parameters the draw was generated under
};

/// Residual-resampling bootstrap. Column 0 is copied from the observed
/// triangle. Conditional resampling regresses every simulated cell on its
/// OBSERVED predecessor,
///   C*_{i,j} = f_{j-1} C_{i,j-1} + sigma_{j-1} sqrt(C_{i,j-1}) e*,
/// the unconditional variant propagates the simulated predecessor C*_{i,j-1}
/// instead. A non-positive cell is redrawn up to `max_redraws` times, then
/// the draw fails with PositivityRepairError.
///
/// Refit follows the bootstrap refit formulas (observed denominators):
///   f*_j      = sum_i C*_{i,j+1} / sum_i C_{i,j}
///   sigma2*_j = 1/(I-j-1) sum_i C_{i,j} (C*_{i,j+1}/C_{i,j} - f*_j)^2,
/// with the Mack tail rule applied for the last column.
BootstrapDraw resample(const ClaimsTriangle& t, const DfclParams& p,
                       const ResidualSet& r, ResamplingScheme scheme,
                       std::mt19937_64& rng, int max_redraws = 100);

BootstrapDraw resample_conditional(const ClaimsTriangle& t, const DfclParams& p,
                                   const ResidualSet& r, std::uint64_t seed);

BootstrapDraw resample_unconditional(const ClaimsTriangle& t,
                                     const DfclParams& p, const ResidualSet& r,
                                     std::uint64_t seed);

/// Simulates only the synthetic triangle (no refit); shared by the ABC layer
/// which does not need bootstrap parameter estimates.
Eigen::MatrixXd resample_triangle(const ClaimsTriangle& t, const DfclParams& p,
                                  const ResidualSet& r, ResamplingScheme scheme,
                                  std::mt19937_64& rng, int max_redraws = 100);

/// Generates `count` draws with per-draw generators derived from `seed`;
/// draws are independent and generated in parallel.
std::vector<BootstrapDraw> bootstrap_draws(const ClaimsTriangle& t,
                                           const DfclParams& p,
                                           const ResidualSet& r,
                                           ResamplingScheme scheme, int count,
                                           std::uint64_t seed);

/// Parameter estimation error C^2_{i,I-i} Delta_{I-i} from bootstrap samples:
/// per year the sample variance over draws of prod_{j=I-i}^{J-1} f*_j scaled
/// by C^2_{i,I-i}; the total is the sample variance of the whole-portfolio
/// predictor sum_i C_{i,I-i} prod_j f*_j, which keeps the covariance induced
/// by shared factors.
struct ParamError {
  Eigen::VectorXd per_year;  // variance scale
  double total = 0.0;
};

ParamError freq_param_error(const std::vector<BootstrapDraw>& draws,
                            const ClaimsTriangle& t);

}  // namespace dfcl

#endif
