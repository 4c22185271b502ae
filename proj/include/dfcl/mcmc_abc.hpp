#ifndef DFCL_MCMC_ABC_HPP
#define DFCL_MCMC_ABC_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dfcl/abc.hpp"
#include "dfcl/chainladder.hpp"
#include "dfcl/triangle.hpp"

namespace dfcl {

/// Gamma(shape, scale) prior on each development factor F_j together with an
/// inverse-gamma(shape, scale) prior on each squared deviation parameter
/// Xi^2_j. Prior means are shape*scale and scale/(shape-1) respectively.
struct GammaPrior {
  double shape = 1.0;
  double scale = 1.0;
};

struct InvGammaPrior {
  double shape = 1.0;
  double scale = 1.0;
};

struct PriorSpec {
  std::vector<GammaPrior> factor;     // F_j, j = 0..J-1
  std::vector<InvGammaPrior> variance;  // Xi^2_j

  int dim() const { return static_cast<int>(factor.size()); }
  void validate() const;

  /// Log densities up to additive constants (they cancel in the
  /// Metropolis-Hastings ratio). The sigma density is the inverse-gamma
  /// density on sigma^2 with the |d sigma^2 / d sigma| = 2 sigma Jacobian.
  double log_factor_density(int j, double f) const;
  double log_sigma_density(int j, double sigma) const;

  double draw_factor(int j, std::mt19937_64& rng) const;
  double draw_sigma(int j, std::mt19937_64& rng) const;

  /// Diffuse priors centred on the classical estimates: F_j with mean
  /// f_j^(CL) and shape `factor_shape`, Xi^2_j with mean sigma2_j^(CL) and
  /// shape `variance_shape`.
  static PriorSpec centered_on(const DfclParams& fit, double factor_shape = 1.0,
                               double variance_shape = 2.0);
};

/// Single-coordinate Gamma proposal: theta* ~ Gamma(gamma_j, theta_j/gamma_j)
/// so the proposal mean is the current value and cv^2 = 1/gamma_j. Shapes
/// adapt during burn-in toward an average acceptance probability inside
/// [accept_low, accept_high], never below gamma_min.
struct ProposalConfig {
  double gamma_init = 1.0;
  double gamma_min = 1.0;
  int window = 100;           // adaptation window length (iterations)
  double shrink = 0.9;
  double grow = 1.1;
  double accept_low = 0.3;
  double accept_high = 0.5;
  // Burn-in tuning can be switched off entirely; useful when the tolerance
  // is loose enough that acceptance sits above the band for any shape, where
  // the grow rule would compound without bound.
  bool adapt_enabled = true;
};

/// Shape update rule applied at the end of an adaptation window:
/// shrink when the averaged acceptance probability is below the band (only
/// while above gamma_min), grow when above it, floor at gamma_min.
double adapt_proposal(double mean_accept, double gamma,
                      const ProposalConfig& cfg);

struct ChainConfig {
  long iterations = 200000;  // T
  long burn_in = 50000;      // T_b
  int sims_per_eval = 1;     // L synthetic data sets per likelihood estimate
  std::uint64_t seed = 0;
  // Initial state: a prior draw by default; optionally a fixed point.
  bool init_from_prior = true;
  DfclParams init;
  // Stuck-chain guards: consecutive rejections of one coordinate.
  long stuck_warn = 10000;
  long stuck_abort = 50000;
};

/// Chain output. Column layout of `samples`: f_0..f_{J-1}, sigma_0..sigma_{J-1}.
struct PosteriorChain {
  Eigen::MatrixXd samples;              // T x 2J
  long burn_in = 0;
  Eigen::VectorXd eps_trace;            // tolerance per iteration
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> accepts;
  Eigen::VectorXd mean_accept_prob;     // per coordinate, post burn-in
  Eigen::VectorXd final_gamma;          // proposal shapes after tuning
  std::uint64_t seed = 0;
  bool stuck_warning = false;

  int dim() const { return static_cast<int>(samples.cols()) / 2; }
  long kept() const { return samples.rows() - burn_in; }
  /// Post-burn-in block.
  Eigen::MatrixXd draws() const {
    return samples.bottomRows(samples.rows() - burn_in);
  }
  Eigen::VectorXd coordinate(int c) const {
    return samples.col(c).tail(samples.rows() - burn_in);
  }
};

/// Metropolis-Hastings ABC sampler for the intractable posterior of
/// (F, Xi) given the triangle. Each iteration updates the 2J coordinates in
/// turn: a Gamma proposal, L conditional-bootstrap synthetic triangles
/// generated under the proposed parameter point (residuals recomputed under
/// that point), hard-decision weighting of the summary-statistic distance
/// against the annealed tolerance, and the prior-times-kernel acceptance
/// ratio. Proposal shapes adapt during burn-in once the tolerance has
/// reached its floor; afterwards shapes and tolerance stay frozen.
PosteriorChain mcmc_abc_run(const ClaimsTriangle& t, const PriorSpec& priors,
                            const ProposalConfig& proposal,
                            const DistanceConfig& dist,
                            const ToleranceSchedule& sched,
                            const ChainConfig& chain);

/// Accept/reject sampler against the same ABC target: draw from the prior,
/// simulate one synthetic triangle, keep the draw iff the distance passes
/// the hard decision. Serves as an independent cross-check for the Markov
/// chain sampler on small triangles.
struct RejectionAbcResult {
  Eigen::MatrixXd accepted;  // one row per accepted draw, 2J columns
  long proposals = 0;

  double acceptance_rate() const {
    return proposals ? static_cast<double>(accepted.rows()) / proposals : 0.0;
  }
};

RejectionAbcResult rejection_abc(const ClaimsTriangle& t,
                                 const PriorSpec& priors,
                                 const DistanceConfig& dist, double eps,
                                 long n_draws, std::uint64_t seed);

/// Reference distances for tolerance calibration: distance of synthetic
/// data generated at the classical fit, repeated `n` times. Quantiles of
/// this sample give workable tolerances for a given triangle and metric.
Eigen::VectorXd reference_distances(const ClaimsTriangle& t,
                                    const DistanceConfig& dist, int n,
                                    std::uint64_t seed);

/// Empirical quantile (nearest-rank) helper.
double quantile(Eigen::VectorXd sorted_or_not, double level);

}  // namespace dfcl

#endif
