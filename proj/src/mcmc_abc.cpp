#include "dfcl/mcmc_abc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dfcl {

void PriorSpec::validate() const {
  if (factor.empty() || factor.size() != variance.size())
    throw std::invalid_argument("prior spec needs equal non-empty factor and "
                                "variance prior lists");
  for (const auto& p : factor)
    if (!(p.shape > 0.0) || !(p.scale > 0.0))
      throw std::invalid_argument("factor prior hyperparameters must be positive");
  for (const auto& p : variance)
    if (!(p.shape > 0.0) || !(p.scale > 0.0))
      throw std::invalid_argument("variance prior hyperparameters must be positive");
}

double PriorSpec::log_factor_density(int j, double f) const {
  if (f <= 0.0) return -std::numeric_limits<double>::infinity();
  const auto& p = factor[static_cast<std::size_t>(j)];
  return (p.shape - 1.0) * std::log(f) - f / p.scale;
}

double PriorSpec::log_sigma_density(int j, double sigma) const {
  if (sigma <= 0.0) return -std::numeric_limits<double>::infinity();
  const auto& p = variance[static_cast<std::size_t>(j)];
  // inverse-gamma density on sigma^2, transformed with d(sigma^2)/d(sigma)
  return -(2.0 * p.shape + 1.0) * std::log(sigma) - p.scale / (sigma * sigma);
}

double PriorSpec::draw_factor(int j, std::mt19937_64& rng) const {
  const auto& p = factor[static_cast<std::size_t>(j)];
  std::gamma_distribution<double> g(p.shape, p.scale);
  double v = 0.0;
  do { v = g(rng); } while (!(v > 0.0));
  return v;
}

double PriorSpec::draw_sigma(int j, std::mt19937_64& rng) const {
  const auto& p = variance[static_cast<std::size_t>(j)];
  // Xi^2 ~ IG(a, b)  <=>  1/Xi^2 ~ Gamma(a, 1/b)
  std::gamma_distribution<double> g(p.shape, 1.0 / p.scale);
  double v = 0.0;
  do { v = g(rng); } while (!(v > 0.0));
  return std::sqrt(1.0 / v);
}

PriorSpec PriorSpec::centered_on(const DfclParams& fit, double factor_shape,
                                 double variance_shape) {
  if (variance_shape <= 1.0)
    throw std::invalid_argument("variance prior shape must exceed 1 so the "
                                "prior mean exists");
  PriorSpec spec;
  const int J = static_cast<int>(fit.factors.size());
  spec.factor.resize(static_cast<std::size_t>(J));
  spec.variance.resize(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    spec.factor[static_cast<std::size_t>(j)] =
        {factor_shape, fit.factors(j) / factor_shape};
    const double s2 = fit.sigmas(j) * fit.sigmas(j);
    spec.variance[static_cast<std::size_t>(j)] =
        {variance_shape, s2 * (variance_shape - 1.0)};
  }
  return spec;
}

double adapt_proposal(double mean_accept, double gamma,
                      const ProposalConfig& cfg) {
  double next = gamma;
  if (mean_accept < cfg.accept_low && gamma > cfg.gamma_min)
    next = cfg.shrink * gamma;
  else if (mean_accept > cfg.accept_high)
    next = cfg.grow * gamma;
  return std::max(next, cfg.gamma_min);
}

namespace {

// log of Gamma(shape, scale) density at x, dropping the lgamma(shape) term
// shared by both directions of the Metropolis-Hastings ratio.
double log_gamma_kernel(double x, double shape, double scale) {
  return (shape - 1.0) * std::log(x) - x / scale - shape * std::log(scale);
}

double log_prior_coordinate(const PriorSpec& priors, int J, int c, double v) {
  return c < J ? priors.log_factor_density(c, v)
               : priors.log_sigma_density(c - J, v);
}

}  // namespace

PosteriorChain mcmc_abc_run(const ClaimsTriangle& t, const PriorSpec& priors,
                            const ProposalConfig& proposal,
                            const DistanceConfig& dist,
                            const ToleranceSchedule& sched,
                            const ChainConfig& chain) {
  priors.validate();
  const int J = t.size();
  if (priors.dim() != J)
    throw std::invalid_argument("prior spec dimension does not match triangle");
  const int D = 2 * J;
  if (chain.iterations <= chain.burn_in || chain.burn_in < 0)
    throw std::invalid_argument("need iterations > burn_in >= 0");
  if (chain.sims_per_eval < 1)
    throw std::invalid_argument("need at least one synthetic data set per "
                                "evaluation");

  std::mt19937_64 rng(chain.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::VectorXd theta(D);
  if (chain.init_from_prior) {
    for (int j = 0; j < J; ++j) theta(j) = priors.draw_factor(j, rng);
    for (int j = 0; j < J; ++j) theta(J + j) = priors.draw_sigma(j, rng);
  } else {
    chain.init.validate();
    if (chain.init.factors.size() != J)
      throw std::invalid_argument("initial state has wrong dimension");
    theta.head(J) = chain.init.factors;
    theta.tail(J) = chain.init.sigmas;
  }

  const SummaryStats obs = summarize_observed(t);

  PosteriorChain out;
  out.seed = chain.seed;
  out.burn_in = chain.burn_in;
  out.samples.resize(chain.iterations, D);
  out.eps_trace.resize(chain.iterations);
  out.accepts.resize(chain.iterations, D);
  out.final_gamma = Eigen::VectorXd::Constant(D, proposal.gamma_init);
  out.mean_accept_prob = Eigen::VectorXd::Zero(D);

  Eigen::VectorXd gamma = Eigen::VectorXd::Constant(
      D, std::max(proposal.gamma_init, proposal.gamma_min));
  Eigen::VectorXd window_accept = Eigen::VectorXd::Zero(D);
  Eigen::VectorXd consec_reject = Eigen::VectorXd::Zero(D);

  DfclParams cand;
  cand.factors.resize(J);
  cand.sigmas.resize(J);

  for (long it = 1; it <= chain.iterations; ++it) {
    const double eps = sched.at(it, chain.burn_in);

    for (int c = 0; c < D; ++c) {
      const double cur = theta(c);
      std::gamma_distribution<double> prop(gamma(c), cur / gamma(c));
      const double star = prop(rng);

      double accept_prob = 0.0;
      if (star > 0.0 && std::isfinite(star)) {
        cand.factors = theta.head(J);
        cand.sigmas = theta.tail(J);
        (c < J ? cand.factors(c) : cand.sigmas(c - J)) = star;

        // ABC likelihood estimate: mean of hard decisions over L synthetic
        // triangles bootstrapped under the proposed parameter point.
        double g = 0.0;
        const ResidualSet res = compute_residuals(t, cand);
        for (int l = 0; l < chain.sims_per_eval; ++l) {
          try {
            const Eigen::MatrixXd draw = resample_triangle(
                t, cand, res, ResamplingScheme::Conditional, rng);
            const SummaryStats syn =
                summarize_synthetic(draw, J, res.mean, res.sd);
            if (hard_decision(distance(obs, syn, dist), eps)) g += 1.0;
          } catch (const PositivityRepairError&) {
            // an unattainable synthetic data set contributes weight zero
          }
        }
        g /= chain.sims_per_eval;

        if (g > 0.0) {
          const double log_ratio =
              log_prior_coordinate(priors, J, c, star) -
              log_prior_coordinate(priors, J, c, cur) +
              log_gamma_kernel(cur, gamma(c), star / gamma(c)) -
              log_gamma_kernel(star, gamma(c), cur / gamma(c));
          accept_prob = std::min(1.0, std::exp(log_ratio) * g);
        }
      }

      const bool accepted = unif(rng) < accept_prob;
      if (accepted) {
        theta(c) = star;
        consec_reject(c) = 0;
      } else if (++consec_reject(c) >= static_cast<double>(chain.stuck_abort)) {
        throw std::runtime_error(
            "chain stuck: coordinate " + std::to_string(c) + " rejected " +
            std::to_string(chain.stuck_abort) +
            " consecutive proposals (iteration " + std::to_string(it) +
            ", tolerance " + std::to_string(eps) + ")");
      } else if (consec_reject(c) == static_cast<double>(chain.stuck_warn)) {
        out.stuck_warning = true;
      }

      out.accepts(it - 1, c) = accepted ? 1 : 0;
      window_accept(c) += accept_prob;
      if (it > chain.burn_in) out.mean_accept_prob(c) += accept_prob;
    }

    // Proposal tuning on non-overlapping windows, only while burning in and
    // after the tolerance has annealed down to its floor.
    if (it % proposal.window == 0) {
      if (proposal.adapt_enabled && it >= proposal.window &&
          it <= chain.burn_in && eps == sched.eps_min) {
        for (int c = 0; c < D; ++c)
          gamma(c) = adapt_proposal(window_accept(c) / proposal.window,
                                    gamma(c), proposal);
      }
      window_accept.setZero();
    }

    out.samples.row(it - 1) = theta;
    out.eps_trace(it - 1) = eps;
  }

  out.final_gamma = gamma;
  out.mean_accept_prob /= static_cast<double>(chain.iterations - chain.burn_in);
  return out;
}

RejectionAbcResult rejection_abc(const ClaimsTriangle& t,
                                 const PriorSpec& priors,
                                 const DistanceConfig& dist, double eps,
                                 long n_draws, std::uint64_t seed) {
  priors.validate();
  const int J = t.size();
  if (priors.dim() != J)
    throw std::invalid_argument("prior spec dimension does not match triangle");
  if (!(eps > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (n_draws < 1) throw std::invalid_argument("need at least one draw");

  std::mt19937_64 rng(seed);
  const SummaryStats obs = summarize_observed(t);

  std::vector<Eigen::VectorXd> kept;
  DfclParams cand;
  cand.factors.resize(J);
  cand.sigmas.resize(J);
  for (long k = 0; k < n_draws; ++k) {
    for (int j = 0; j < J; ++j) cand.factors(j) = priors.draw_factor(j, rng);
    for (int j = 0; j < J; ++j) cand.sigmas(j) = priors.draw_sigma(j, rng);
    try {
      const ResidualSet res = compute_residuals(t, cand);
      const Eigen::MatrixXd draw =
          resample_triangle(t, cand, res, ResamplingScheme::Conditional, rng);
      const SummaryStats syn = summarize_synthetic(draw, J, res.mean, res.sd);
      if (hard_decision(distance(obs, syn, dist), eps)) {
        Eigen::VectorXd row(2 * J);
        row.head(J) = cand.factors;
        row.tail(J) = cand.sigmas;
        kept.push_back(std::move(row));
      }
    } catch (const PositivityRepairError&) {
      // rejected
    }
  }
  if (kept.empty())
    throw std::runtime_error("rejection ABC accepted no draws out of " +
                             std::to_string(n_draws) +
                             "; tolerance too tight");

  RejectionAbcResult out;
  out.proposals = n_draws;
  out.accepted.resize(static_cast<Eigen::Index>(kept.size()), 2 * J);
  for (std::size_t r = 0; r < kept.size(); ++r)
    out.accepted.row(static_cast<Eigen::Index>(r)) = kept[r];
  return out;
}

Eigen::VectorXd reference_distances(const ClaimsTriangle& t,
                                    const DistanceConfig& dist, int n,
                                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one distance sample");
  std::mt19937_64 rng(seed);
  const DfclParams fit = classical_fit(t);
  const ResidualSet res = compute_residuals(t, fit);
  const SummaryStats obs = summarize_observed(t);
  Eigen::VectorXd d(n);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXd draw =
        resample_triangle(t, fit, res, ResamplingScheme::Conditional, rng);
    d(k) = distance(obs, summarize_synthetic(draw, t.size(), res.mean, res.sd),
                    dist);
  }
  return d;
}

double quantile(Eigen::VectorXd v, double level) {
  if (v.size() == 0) throw std::invalid_argument("empty sample");
  if (!(level > 0.0) || level > 1.0)
    throw std::invalid_argument("quantile level must be in (0, 1]");
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  const auto k = static_cast<Eigen::Index>(std::ceil(level * n));
  return v(std::max<Eigen::Index>(k, 1) - 1);
}

}  // namespace dfcl
