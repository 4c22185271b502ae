#ifndef DFCL_INFERENCE_HPP
#define DFCL_INFERENCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfcl/bootstrap.hpp"
#include "dfcl/chainladder.hpp"
#include "dfcl/mcmc_abc.hpp"
#include "dfcl/triangle.hpp"

namespace dfcl {

/// Mode of a sample via histogram with Freedman-Diaconis bin width; falls
/// back to the median when the IQR vanishes.
double histogram_mode(const Eigen::VectorXd& x);

struct PointEstimates {
  DfclParams mmse;              // coordinate-wise posterior means
  DfclParams map;               // coordinate-wise marginal histogram modes
  Eigen::VectorXd mmse_sigma2;  // posterior means of sigma_j^2
};

PointEstimates point_estimates(const PosteriorChain& chain);

/// Per-coordinate posterior summary: mean, sd, 5%/50%/95% quantiles, mode.
struct PosteriorSummary {
  std::vector<std::string> names;
  Eigen::MatrixXd stats;  // one row per coordinate; columns as above
};

PosteriorSummary posterior_summary(const PosteriorChain& chain);

/// One simulated completion of the triangle.
struct PredictiveSample {
  Eigen::MatrixXd completed;
  Eigen::VectorXd ultimates;  // C_{i,J} per accident year
  double total_ultimate = 0.0;
};

enum class PredictiveResiduals { Empirical, Gaussian };

/// Simulates the unobserved cells forward through the time-series recursion
/// under fixed parameters, resampling residuals recomputed under those
/// parameters (or standard normals when `mode` says so).
std::vector<PredictiveSample> predictive_conditional(
    const DfclParams& params, const ClaimsTriangle& t, int n_samples,
    std::uint64_t seed, PredictiveResiduals mode = PredictiveResiduals::Empirical,
    int max_redraws = 100);

/// Full predictive distribution: one forward simulation per (thinned)
/// post-burn-in posterior draw, integrating parameter uncertainty out.
std::vector<PredictiveSample> predictive_full(
    const PosteriorChain& chain, const ClaimsTriangle& t, int thin,
    std::uint64_t seed, PredictiveResiduals mode = PredictiveResiduals::Empirical,
    int max_redraws = 100);

/// Empirical-Bayes variant: development factors fixed at `factors`, the
/// deviation parameters run through the posterior draws.
std::vector<PredictiveSample> predictive_rao_blackwell(
    const PosteriorChain& chain, const ClaimsTriangle& t,
    const Eigen::VectorXd& factors, int thin, std::uint64_t seed,
    PredictiveResiduals mode = PredictiveResiduals::Empirical,
    int max_redraws = 100);

/// Value-at-risk of the centered ultimates: the smallest sample point x with
/// empirical P[C_{i,J} - mean > x] <= 1 - level. The centering mean is the
/// empirical predictive mean.
struct VarReport {
  Eigen::VectorXd per_year;
  double total = 0.0;
  double level = 0.0;
};

VarReport var_risk(const std::vector<PredictiveSample>& samples, double level);

/// Conditional MSEP split into process variance and estimation error, both
/// reported on the square-root scale, plus the coefficient of variation
/// against the route's reserve.
struct MsepReport {
  std::string route;                // "freq" | "bayes" | "cred"
  Eigen::VectorXd process_sqrt;     // (C_{i,I-i} Gamma_{I-i})^{1/2}
  Eigen::VectorXd estimation_sqrt;  // (C^2_{i,I-i} Delta_{I-i})^{1/2}
  Eigen::VectorXd msep_sqrt;
  Eigen::VectorXd vco;
  Eigen::VectorXd reserves;
  double process_sqrt_total = 0.0;
  double estimation_sqrt_total = 0.0;
  double msep_sqrt_total = 0.0;
  double vco_total = 0.0;
};

/// Frequentist route: plug-in process variance plus bootstrap estimation
/// error; totals add per-year process variances and use the portfolio-level
/// bootstrap variance.
MsepReport freq_msep(const ClaimsTriangle& t, const Eigen::VectorXd& factors,
                     const Eigen::VectorXd& variances,
                     const std::vector<BootstrapDraw>& draws);

/// Bayes route from posterior moments: the average process variance uses the
/// factorised posterior-moment product, the estimation error the variance of
/// the factor product. Totals aggregate process terms per year and simulate
/// the portfolio predictor across posterior draws for the estimation part.
MsepReport bayes_msep(const PosteriorChain& chain, const ClaimsTriangle& t);

/// Credibility route: closed-form approximations for diffuse priors. The
/// estimation-error total keeps the cross-year covariance induced by shared
/// development factors (closed-form product expansion).
MsepReport cred_msep(const ClaimsTriangle& t, const Eigen::VectorXd& factors,
                     const Eigen::VectorXd& variances);

}  // namespace dfcl

#endif
