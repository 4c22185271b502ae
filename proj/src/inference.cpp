#include "dfcl/inference.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dfcl {

namespace {

double sample_quantile_sorted(const Eigen::VectorXd& sorted, double level) {
  const auto n = static_cast<double>(sorted.size());
  const auto k = std::max<Eigen::Index>(
      static_cast<Eigen::Index>(std::ceil(level * n)), 1);
  return sorted(k - 1);
}

}  // namespace

double histogram_mode(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  if (n == 0) throw std::invalid_argument("empty sample");
  Eigen::VectorXd s = x;
  std::sort(s.begin(), s.end());
  const double q25 = sample_quantile_sorted(s, 0.25);
  const double q75 = sample_quantile_sorted(s, 0.75);
  const double iqr = q75 - q25;
  if (iqr <= 0.0) return sample_quantile_sorted(s, 0.5);

  const double h = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  const double lo = s(0), hi = s(n - 1);
  const int bins = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
  std::vector<int> count(static_cast<std::size_t>(bins), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    int b = static_cast<int>((s(i) - lo) / h);
    b = std::clamp(b, 0, bins - 1);
    ++count[static_cast<std::size_t>(b)];
  }
  const auto best =
      std::max_element(count.begin(), count.end()) - count.begin();
  return lo + (static_cast<double>(best) + 0.5) * h;
}

PointEstimates point_estimates(const PosteriorChain& chain) {
  if (chain.kept() < 1) throw std::invalid_argument("empty chain");
  const int J = chain.dim();
  PointEstimates est;
  est.mmse.factors.resize(J);
  est.mmse.sigmas.resize(J);
  est.map.factors.resize(J);
  est.map.sigmas.resize(J);
  est.mmse_sigma2.resize(J);
  for (int j = 0; j < J; ++j) {
    const Eigen::VectorXd f = chain.coordinate(j);
    const Eigen::VectorXd s = chain.coordinate(J + j);
    est.mmse.factors(j) = f.mean();
    est.mmse.sigmas(j) = s.mean();
    est.mmse_sigma2(j) = s.array().square().mean();
    est.map.factors(j) = histogram_mode(f);
    est.map.sigmas(j) = histogram_mode(s);
  }
  return est;
}

PosteriorSummary posterior_summary(const PosteriorChain& chain) {
  if (chain.kept() < 1) throw std::invalid_argument("empty chain");
  const int J = chain.dim();
  PosteriorSummary sum;
  sum.stats.resize(2 * J, 6);
  for (int c = 0; c < 2 * J; ++c) {
    const std::string name = c < J ? "f_" + std::to_string(c)
                                   : "sigma_" + std::to_string(c - J);
    sum.names.push_back(name);
    Eigen::VectorXd v = chain.coordinate(c);
    const double m = v.mean();
    const double sd = v.size() > 1
                          ? std::sqrt((v.array() - m).square().sum() /
                                      static_cast<double>(v.size() - 1))
                          : 0.0;
    const double mode = histogram_mode(v);
    std::sort(v.begin(), v.end());
    sum.stats(c, 0) = m;
    sum.stats(c, 1) = sd;
    sum.stats(c, 2) = sample_quantile_sorted(v, 0.05);
    sum.stats(c, 3) = sample_quantile_sorted(v, 0.5);
    sum.stats(c, 4) = sample_quantile_sorted(v, 0.95);
    sum.stats(c, 5) = mode;
  }
  return sum;
}

namespace {

PredictiveSample simulate_completion(const ClaimsTriangle& t,
                                     const DfclParams& p,
                                     const ResidualSet& res,
                                     PredictiveResiduals mode,
                                     std::mt19937_64& rng, int max_redraws) {
  const int I = t.size();
  std::uniform_int_distribution<int> pick(0, res.count() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto eps = [&] {
    return mode == PredictiveResiduals::Empirical ? res.values(pick(rng))
                                                  : gauss(rng);
  };

  PredictiveSample out;
  out.completed = t.values();
  for (int i = 1; i <= I; ++i) {
    for (int j = I - i + 1; j <= I; ++j) {
      const double prev = out.completed(i, j - 1);
      double v = 0.0;
      bool ok = false;
      for (int attempt = 0; attempt <= max_redraws; ++attempt) {
        v = p.factors(j - 1) * prev + p.sigmas(j - 1) * std::sqrt(prev) * eps();
        if (v > 0.0) {
          ok = true;
          break;
        }
      }
      if (!ok)
        throw PositivityRepairError("predictive cell (" + std::to_string(i) +
                                    "," + std::to_string(j) +
                                    ") stayed non-positive");
      out.completed(i, j) = v;
    }
  }
  out.ultimates = out.completed.col(I);
  out.total_ultimate = out.ultimates.sum();
  return out;
}

}  // namespace

std::vector<PredictiveSample> predictive_conditional(const DfclParams& params,
                                                     const ClaimsTriangle& t,
                                                     int n_samples,
                                                     std::uint64_t seed,
                                                     PredictiveResiduals mode,
                                                     int max_redraws) {
  params.validate();
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(seed);
  const ResidualSet res = compute_residuals(t, params);
  std::vector<PredictiveSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k)
    out.push_back(simulate_completion(t, params, res, mode, rng, max_redraws));
  return out;
}

std::vector<PredictiveSample> predictive_full(const PosteriorChain& chain,
                                              const ClaimsTriangle& t, int thin,
                                              std::uint64_t seed,
                                              PredictiveResiduals mode,
                                              int max_redraws) {
  if (thin < 1) throw std::invalid_argument("thinning step must be >= 1");
  if (chain.kept() < 1) throw std::invalid_argument("empty chain");
  const int J = chain.dim();
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd draws = chain.draws();
  std::vector<PredictiveSample> out;
  DfclParams p;
  for (Eigen::Index r = 0; r < draws.rows(); r += thin) {
    p.factors = draws.row(r).head(J).transpose();
    p.sigmas = draws.row(r).tail(J).transpose();
    const ResidualSet res = compute_residuals(t, p);
    out.push_back(simulate_completion(t, p, res, mode, rng, max_redraws));
  }
  return out;
}

std::vector<PredictiveSample> predictive_rao_blackwell(
    const PosteriorChain& chain, const ClaimsTriangle& t,
    const Eigen::VectorXd& factors, int thin, std::uint64_t seed,
    PredictiveResiduals mode, int max_redraws) {
  if (thin < 1) throw std::invalid_argument("thinning step must be >= 1");
  if (chain.kept() < 1) throw std::invalid_argument("empty chain");
  const int J = chain.dim();
  if (factors.size() != J)
    throw std::invalid_argument("factor vector has wrong length");
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd draws = chain.draws();
  std::vector<PredictiveSample> out;
  DfclParams p;
  p.factors = factors;
  for (Eigen::Index r = 0; r < draws.rows(); r += thin) {
    p.sigmas = draws.row(r).tail(J).transpose();
    const ResidualSet res = compute_residuals(t, p);
    out.push_back(simulate_completion(t, p, res, mode, rng, max_redraws));
  }
  return out;
}

VarReport var_risk(const std::vector<PredictiveSample>& samples, double level) {
  if (samples.empty()) throw std::invalid_argument("no predictive samples");
  if (!(level > 0.0) || !(level < 1.0))
    throw std::invalid_argument("VaR level must lie in (0, 1)");
  const auto n = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index years = samples.front().ultimates.size();

  // smallest sample point whose exceedance probability is <= 1 - level
  auto var_of = [&](Eigen::VectorXd v) {
    const double m = v.mean();
    v.array() -= m;
    std::sort(v.begin(), v.end());
    const auto k = std::max<Eigen::Index>(
        static_cast<Eigen::Index>(
            std::ceil(level * static_cast<double>(n))), 1);
    return v(k - 1);
  };

  VarReport out;
  out.level = level;
  out.per_year.resize(years);
  Eigen::VectorXd totals(n), tmp(n);
  for (Eigen::Index i = 0; i < years; ++i) {
    for (Eigen::Index s = 0; s < n; ++s)
      tmp(s) = samples[static_cast<std::size_t>(s)].ultimates(i);
    out.per_year(i) = var_of(tmp);
  }
  for (Eigen::Index s = 0; s < n; ++s)
    totals(s) = samples[static_cast<std::size_t>(s)].total_ultimate;
  out.total = var_of(totals);
  return out;
}

namespace {

void finalize_report(MsepReport& rep, const Eigen::VectorXd& process_var,
                     double process_var_total,
                     const Eigen::VectorXd& estimation_var,
                     double estimation_var_total) {
  const Eigen::Index years = process_var.size();
  rep.process_sqrt = process_var.cwiseSqrt();
  rep.estimation_sqrt = estimation_var.cwiseSqrt();
  rep.msep_sqrt = (process_var + estimation_var).cwiseSqrt();
  rep.process_sqrt_total = std::sqrt(process_var_total);
  rep.estimation_sqrt_total = std::sqrt(estimation_var_total);
  rep.msep_sqrt_total = std::sqrt(process_var_total + estimation_var_total);
  rep.vco.resize(years);
  for (Eigen::Index i = 0; i < years; ++i)
    rep.vco(i) = rep.reserves(i) > 0.0 ? rep.msep_sqrt(i) / rep.reserves(i) : 0.0;
  const double total_res = rep.reserves.sum();
  rep.vco_total = total_res > 0.0 ? rep.msep_sqrt_total / total_res : 0.0;
}

}  // namespace

MsepReport freq_msep(const ClaimsTriangle& t, const Eigen::VectorXd& factors,
                     const Eigen::VectorXd& variances,
                     const std::vector<BootstrapDraw>& draws) {
  MsepReport rep;
  rep.route = "freq";
  const ProcessVariance pv = freq_process_variance(t, factors, variances);
  const ParamError pe = freq_param_error(draws, t);
  rep.reserves = predict(t, factors).reserves;
  finalize_report(rep, pv.per_year, pv.total, pe.per_year, pe.total);
  return rep;
}

MsepReport bayes_msep(const PosteriorChain& chain, const ClaimsTriangle& t) {
  if (chain.kept() < 2) throw std::invalid_argument("chain too short");
  const int J = chain.dim();
  const int I = t.size();
  if (J != I) throw std::invalid_argument("chain dimension does not match triangle");

  Eigen::VectorXd ef(J), ef2(J), es2(J);
  for (int j = 0; j < J; ++j) {
    const Eigen::VectorXd f = chain.coordinate(j);
    const Eigen::VectorXd s = chain.coordinate(J + j);
    ef(j) = f.mean();
    ef2(j) = f.array().square().mean();
    es2(j) = s.array().square().mean();
  }

  const Eigen::VectorXd diag = anti_diagonal(t);
  Eigen::VectorXd process_var(I + 1), estimation_var(I + 1);
  for (int i = 0; i <= I; ++i) {
    const int lo = I - i;
    // average process variance: factorised posterior moments
    double gamma = 0.0;
    for (int j = lo; j < J; ++j) {
      double term = es2(j);
      for (int m = lo; m < j; ++m) term *= ef(m);
      for (int nn = j + 1; nn < J; ++nn) term *= ef2(nn);
      gamma += term;
    }
    process_var(i) = diag(i) * gamma;
    // estimation error: variance of the factor product
    double p2 = 1.0, p1 = 1.0;
    for (int j = lo; j < J; ++j) {
      p2 *= ef2(j);
      p1 *= ef(j) * ef(j);
    }
    estimation_var(i) = diag(i) * diag(i) * (p2 - p1);
  }

  // portfolio estimation error via the joint posterior draws
  const Eigen::MatrixXd draws = chain.draws();
  Eigen::VectorXd portfolio(draws.rows());
  for (Eigen::Index r = 0; r < draws.rows(); ++r) {
    double total = 0.0;
    for (int i = 0; i <= I; ++i) {
      double pr = 1.0;
      for (int j = I - i; j < J; ++j) pr *= draws(r, j);
      total += diag(i) * pr;
    }
    portfolio(r) = total;
  }
  const double pm = portfolio.mean();
  const double estimation_total =
      (portfolio.array() - pm).square().sum() /
      static_cast<double>(portfolio.size() - 1);

  MsepReport rep;
  rep.route = "bayes";
  const PointEstimates est = point_estimates(chain);
  rep.reserves = predict(t, est.mmse.factors).reserves;
  finalize_report(rep, process_var, process_var.sum(), estimation_var,
                  estimation_total);
  return rep;
}

MsepReport cred_msep(const ClaimsTriangle& t, const Eigen::VectorXd& factors,
                     const Eigen::VectorXd& variances) {
  const int I = t.size();
  const int J = I;
  if (factors.size() != J || variances.size() != J)
    throw std::invalid_argument("parameter vectors have wrong length");
  const Eigen::VectorXd diag = anti_diagonal(t);

  // column sums S_j = sum_{i=0}^{I-j-1} C_{i,j}
  Eigen::VectorXd S(J);
  for (int j = 0; j < J; ++j) {
    double acc = 0.0;
    for (int i = 0; i + j + 1 <= I; ++i) acc += t(i, j);
    S(j) = acc;
  }
  // second-moment factors f_j^2 + sigma2_j / S_j
  Eigen::VectorXd m2(J);
  for (int j = 0; j < J; ++j)
    m2(j) = factors(j) * factors(j) + variances(j) / S(j);

  Eigen::VectorXd process_var(I + 1), estimation_var(I + 1);
  for (int i = 0; i <= I; ++i) {
    const int lo = I - i;
    double gamma = 0.0;
    for (int j = lo; j < J; ++j) {
      double term = variances(j);
      for (int m = lo; m < j; ++m) term *= factors(m);
      for (int nn = j + 1; nn < J; ++nn) term *= m2(nn);
      gamma += term;
    }
    process_var(i) = diag(i) * gamma;
    double p2 = 1.0, p1 = 1.0;
    for (int j = lo; j < J; ++j) {
      p2 *= m2(j);
      p1 *= factors(j) * factors(j);
    }
    estimation_var(i) = diag(i) * diag(i) * (p2 - p1);
  }

  // portfolio estimation error with cross-year covariance:
  // Cov(P_i, P_k) for I-k <= I-i is prod of first moments over the horizon
  // only year k spans, times (prod m2 - prod f^2) over the shared horizon.
  double estimation_total = 0.0;
  for (int i = 0; i <= I; ++i) {
    for (int k = 0; k <= I; ++k) {
      const int lo_shared = std::max(I - i, I - k);
      const int lo_long = std::min(I - i, I - k);
      double pref = 1.0;
      for (int j = lo_long; j < lo_shared; ++j) pref *= factors(j);
      double a = 1.0, b = 1.0;
      for (int j = lo_shared; j < J; ++j) {
        a *= m2(j);
        b *= factors(j) * factors(j);
      }
      estimation_total += diag(i) * diag(k) * pref * (a - b);
    }
  }

  MsepReport rep;
  rep.route = "cred";
  rep.reserves = predict(t, factors).reserves;
  finalize_report(rep, process_var, process_var.sum(), estimation_var,
                  estimation_total);
  return rep;
}

}  // namespace dfcl
