#include "dfcl/abc.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "dfcl/chainladder.hpp"

namespace dfcl {

Eigen::VectorXd summary_claims_part(const Eigen::MatrixXd& values, int size) {
  const int I = size;
  Eigen::VectorXd out(residual_cell_count(I));
  int k = 0;
  for (int i = 0; i < I; ++i)
    for (int j = 1; i + j <= I; ++j) out(k++) = values(i, j);
  return out;
}

SummaryStats summarize_observed(const ClaimsTriangle& t) {
  SummaryStats s;
  const Eigen::VectorXd claims = summary_claims_part(t.values(), t.size());
  s.claims_len = static_cast<int>(claims.size());
  s.v.resize(s.claims_len + 2);
  s.v.head(s.claims_len) = claims;
  s.v(s.claims_len) = 0.0;
  s.v(s.claims_len + 1) = 1.0;
  return s;
}

SummaryStats summarize_synthetic(const Eigen::MatrixXd& draw, int size,
                                 double residual_mean, double residual_sd) {
  if (draw.rows() != size + 1 || draw.cols() != size + 1)
    throw std::invalid_argument("synthetic triangle shape mismatch");
  SummaryStats s;
  const Eigen::VectorXd claims = summary_claims_part(draw, size);
  s.claims_len = static_cast<int>(claims.size());
  s.v.resize(s.claims_len + 2);
  s.v.head(s.claims_len) = claims;
  s.v(s.claims_len) = residual_mean;
  s.v(s.claims_len + 1) = residual_sd;
  return s;
}

DistanceMetric parse_metric(const std::string& name) {
  if (name == "scaled-euclidean") return DistanceMetric::ScaledEuclidean;
  if (name == "mahalanobis") return DistanceMetric::Mahalanobis;
  if (name == "cityblock") return DistanceMetric::CityBlock;
  throw std::invalid_argument("unknown distance metric: " + name);
}

std::string metric_name(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::ScaledEuclidean: return "scaled-euclidean";
    case DistanceMetric::Mahalanobis: return "mahalanobis";
    case DistanceMetric::CityBlock: return "cityblock";
  }
  return "?";
}

Eigen::Matrix2d parametric_moment_block(int n) {
  if (n < 2) throw std::invalid_argument("moment block needs n >= 2");
  const double dn = n;
  Eigen::Matrix2d m;
  const double denom = (dn - 1.0) * (dn - 1.0);
  m(0, 0) = 1.0 / dn;
  m(1, 1) = 2.0 * dn * (1.0 + 5.0 / (dn * dn)) / denom;
  m(0, 1) = m(1, 0) = (1.0 - 2.0 / dn) / (2.0 * denom);
  return m;
}

Eigen::Matrix2d empirical_moment_block(const ResidualSet& r, int sims,
                                       std::uint64_t seed) {
  const int n = r.count();
  if (n < 2) throw std::invalid_argument("moment block needs n >= 2");
  if (sims < 2) throw std::invalid_argument("need at least 2 simulations");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);

  Eigen::VectorXd mu(sims), sd(sims);
  Eigen::VectorXd draw(n);
  for (int s = 0; s < sims; ++s) {
    for (int k = 0; k < n; ++k) draw(k) = r.values(pick(rng));
    const double m = draw.mean();
    mu(s) = m;
    sd(s) = std::sqrt((draw.array() - m).square().sum() / (n - 1));
  }
  const double mm = mu.mean(), sm = sd.mean();
  Eigen::Matrix2d out;
  out(0, 0) = (mu.array() - mm).square().sum() / (sims - 1);
  out(1, 1) = (sd.array() - sm).square().sum() / (sims - 1);
  out(0, 1) = out(1, 0) =
      ((mu.array() - mm) * (sd.array() - sm)).sum() / (sims - 1);
  return out;
}

DistanceConfig make_distance_config(const ClaimsTriangle& t,
                                    const DfclParams& weight_params,
                                    DistanceMetric m, MomentBlockMode mode,
                                    int moment_sims, std::uint64_t moment_seed) {
  weight_params.validate();
  const int I = t.size();
  if (weight_params.sigmas.size() != I)
    throw std::invalid_argument("weight parameters have wrong length");

  DistanceConfig cfg;
  cfg.metric = m;
  cfg.claims_var.resize(residual_cell_count(I));
  int k = 0;
  for (int i = 0; i < I; ++i)
    for (int j = 1; i + j <= I; ++j)
      cfg.claims_var(k++) = weight_params.sigmas(j - 1) *
                            weight_params.sigmas(j - 1) * t(i, j - 1);

  const int n = static_cast<int>(cfg.claims_var.size());
  cfg.moment_cov =
      mode == MomentBlockMode::Parametric
          ? parametric_moment_block(n)
          : empirical_moment_block(compute_residuals(t, weight_params),
                                   moment_sims, moment_seed);

  cfg.claims_var_inv = cfg.claims_var.cwiseInverse();
  if (cfg.moment_cov.determinant() <= 0.0)
    throw std::invalid_argument("moment covariance block is singular");
  cfg.moment_cov_inv = cfg.moment_cov.inverse();
  return cfg;
}

DistanceConfig make_distance_config(const ClaimsTriangle& t, DistanceMetric m,
                                    MomentBlockMode mode, int moment_sims,
                                    std::uint64_t moment_seed) {
  return make_distance_config(t, classical_fit(t), m, mode, moment_sims,
                              moment_seed);
}

double distance(const SummaryStats& a, const SummaryStats& b,
                const DistanceConfig& cfg) {
  if (a.v.size() != b.v.size())
    throw std::invalid_argument("summary vectors differ in length");
  const Eigen::VectorXd diff = a.v - b.v;
  const int n = a.claims_len;

  switch (cfg.metric) {
    case DistanceMetric::CityBlock:
      return diff.cwiseAbs().sum();
    case DistanceMetric::ScaledEuclidean: {
      double d = diff.head(n).cwiseProduct(cfg.claims_var_inv.head(n))
                     .dot(diff.head(n));
      d += diff(n) * diff(n) / cfg.moment_cov(0, 0);
      d += diff(n + 1) * diff(n + 1) / cfg.moment_cov(1, 1);
      return d;
    }
    case DistanceMetric::Mahalanobis: {
      double d = diff.head(n).cwiseProduct(cfg.claims_var_inv.head(n))
                     .dot(diff.head(n));
      const Eigen::Vector2d dm(diff(n), diff(n + 1));
      d += dm.dot(cfg.moment_cov_inv * dm);
      return d;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace dfcl
