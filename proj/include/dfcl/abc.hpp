#ifndef DFCL_ABC_HPP
#define DFCL_ABC_HPP

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "dfcl/bootstrap.hpp"
#include "dfcl/triangle.hpp"

namespace dfcl {

/// Summary vector of length n+2: the observed-mask claims with j >= 1 in
/// fixed row-major order (C_{0,1..J}, C_{1,1..J-1}, ..., C_{I-1,1}) followed
/// by a residual-moment pair. Observed data always carries (0, 1); synthetic
/// data carries the empirical residual moments (mu*, s*) of the generating
/// parameter point.
struct SummaryStats {
  Eigen::VectorXd v;
  int claims_len = 0;  // n

  double moment_mean() const { return v(claims_len); }
  double moment_sd() const { return v(claims_len + 1); }
};

/// Claims part of the summary vector for any matrix carrying the observed
/// mask (a triangle or a bootstrap draw).
Eigen::VectorXd summary_claims_part(const Eigen::MatrixXd& values, int size);

SummaryStats summarize_observed(const ClaimsTriangle& t);
SummaryStats summarize_synthetic(const Eigen::MatrixXd& draw, int size,
                                 double residual_mean, double residual_sd);

enum class DistanceMetric { ScaledEuclidean, Mahalanobis, CityBlock };

DistanceMetric parse_metric(const std::string& name);
std::string metric_name(DistanceMetric m);

/// How the (mu~, s~) covariance block is estimated: closed forms under a
/// standard-normal residual assumption, or by resampling the observed
/// residual set (preferable when residuals are skewed).
enum class MomentBlockMode { Parametric, Empirical };

/// Weight matrix for the Mahalanobis / scaled-Euclidean metrics, estimated
/// once from the observed triangle under the classical fit. Block structure:
/// a diagonal claims block Var(C*_{i,j}) = sigma2_{j-1} C_{i,j-1}, zero
/// cross-terms, and a dense 2x2 residual-moment block.
struct DistanceConfig {
  DistanceMetric metric = DistanceMetric::ScaledEuclidean;
  Eigen::VectorXd claims_var;      // n diagonal entries
  Eigen::Matrix2d moment_cov;      // (mu~, s~) block
  Eigen::VectorXd claims_var_inv;  // precomputed reciprocals
  Eigen::Matrix2d moment_cov_inv;
};

/// Parametric moment block for n residuals:
///   Var(mu~)      = 1/n
///   Var(s~)       = 2n (1 + 5/n^2) / (n-1)^2
///   Cov(mu~, s~)  = (1 - 2/n) / (2 (n-1)^2)
Eigen::Matrix2d parametric_moment_block(int n);

/// Monte Carlo moment block: resample n residuals from `r` with replacement
/// `sims` times and take the sample covariance of (mu~, s~).
Eigen::Matrix2d empirical_moment_block(const ResidualSet& r, int sims,
                                       std::uint64_t seed);

DistanceConfig make_distance_config(const ClaimsTriangle& t, DistanceMetric m,
                                    MomentBlockMode mode = MomentBlockMode::Parametric,
                                    int moment_sims = 20000,
                                    std::uint64_t moment_seed = 1);

/// Same, but with explicitly supplied weight parameters instead of the
/// classical fit; needed for triangles too small for the variance tail rule.
DistanceConfig make_distance_config(const ClaimsTriangle& t,
                                    const DfclParams& weight_params,
                                    DistanceMetric m,
                                    MomentBlockMode mode = MomentBlockMode::Parametric,
                                    int moment_sims = 20000,
                                    std::uint64_t moment_seed = 1);

/// rho(a, b): Mahalanobis quadratic form (a-b)' W^{-1} (a-b) exploiting the
/// block-diagonal structure; scaled Euclidean keeps only the diagonal of W;
/// city block is the unweighted L1 distance.
double distance(const SummaryStats& a, const SummaryStats& b,
                const DistanceConfig& cfg);

/// Hard decision: 1 iff d <= eps.
inline bool hard_decision(double d, double eps) { return d <= eps; }

/// eps_t = max{anchor - slope * t, eps_min} while annealing (t <= burn-in);
/// frozen at eps_min afterwards.
struct ToleranceSchedule {
  double anchor = 20000.0;
  double slope = 10.0;
  double eps_min = 1e-5;

  double at(long t) const {
    return std::max(anchor - slope * static_cast<double>(t), eps_min);
  }
  double at(long t, long burn_in) const { return t <= burn_in ? at(t) : eps_min; }
};

}  // namespace dfcl

#endif
