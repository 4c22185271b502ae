#ifndef DFCL_CHAINLADDER_HPP
#define DFCL_CHAINLADDER_HPP

#include <Eigen/Dense>

#include "dfcl/triangle.hpp"

namespace dfcl {

/// One parameter point of the time-series model: development factors f_j and
/// standard deviations sigma_j, j = 0..J-1, all strictly positive.
struct DfclParams {
  Eigen::VectorXd factors;
  Eigen::VectorXd sigmas;

  void validate() const;
};

/// Column-wise development factor estimates
///   f_j = sum_{i<=I-j-1} C_{i,j+1} / sum_{i<=I-j-1} C_{i,j}.
Eigen::VectorXd estimate_cl_factors(const ClaimsTriangle& t);

/// Single-column variance estimate (the j < I-1 formula, no tail rule):
///   1/(I-j-1) sum_i C_{i,j} (C_{i,j+1}/C_{i,j} - f_j)^2.
double column_variance(const ClaimsTriangle& t, const Eigen::VectorXd& factors,
                       int j);

/// Variance parameter estimates
///   sigma2_j = 1/(I-j-1) sum_i C_{i,j} (C_{i,j+1}/C_{i,j} - f_j)^2
/// for j < I-1, and the Mack tail rule for the last column:
///   sigma2_{J-1} = min{ sigma2_{J-2}^2 / sigma2_{J-3},
///                       sigma2_{J-3}, sigma2_{J-2} }.
/// Requires J >= 3; a smaller triangle has no defined tail estimator.
Eigen::VectorXd estimate_cl_variances(const ClaimsTriangle& t,
                                      const Eigen::VectorXd& factors);

/// Factors plus sigma = sqrt(variances) in one call.
DfclParams classical_fit(const ClaimsTriangle& t);

struct ClPrediction {
  Eigen::MatrixXd completed;   // full (I+1)x(J+1) matrix
  Eigen::VectorXd reserves;    // per accident year: C^_{i,J} - C_{i,I-i}
  double total_reserve = 0.0;
};

/// Completes the triangle by the recursion C^_{i,j} = C^_{i,j-1} f_{j-1},
/// anchored at the observed anti-diagonal.
ClPrediction predict(const ClaimsTriangle& t, const Eigen::VectorXd& factors);

/// Per-accident-year conditional process variance C_{i,I-i} Gamma_{I-i},
/// estimated with plug-in parameters:
///   (C^_{i,J})^2 sum_{j=I-i}^{J-1} (sigma2_j / f_j^2) / C^_{i,j}.
/// The total adds per-year variances (accident years are independent).
struct ProcessVariance {
  Eigen::VectorXd per_year;  // variance scale
  double total = 0.0;
};

ProcessVariance freq_process_variance(const ClaimsTriangle& t,
                                      const Eigen::VectorXd& factors,
                                      const Eigen::VectorXd& variances);

}  // namespace dfcl

#endif
