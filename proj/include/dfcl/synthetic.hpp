#ifndef DFCL_SYNTHETIC_HPP
#define DFCL_SYNTHETIC_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "dfcl/triangle.hpp"

namespace dfcl {

/// Mean-zero, unit-variance residual laws for simulation.
enum class ResidualLaw { UniformSqrt3, Gaussian };

/// Synthetic triangle generator: C_{i,0} ~ U[first_col_lo, first_col_hi],
/// then the forward recursion
///   C_{i,j+1} = f_j C_{i,j} + sigma_j sqrt(C_{i,j}) eps
/// with i.i.d. residuals from `law`; only cells with i+j <= I are kept.
/// Non-positive cells are redrawn, as in the bootstrap.
struct GeneratorSpec {
  Eigen::VectorXd factors;
  Eigen::VectorXd sigmas;
  int size = 9;  // I == J
  double first_col_lo = 130.0;
  double first_col_hi = 530.0;
  ResidualLaw law = ResidualLaw::UniformSqrt3;
  std::uint64_t seed = 0;
  int max_redraws = 100;
};

ClaimsTriangle generate(const GeneratorSpec& spec);

}  // namespace dfcl

#endif
