#include "dfcl/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dfcl {

Eigen::VectorXd acf(const Eigen::VectorXd& x, int max_lag) {
  const Eigen::Index T = x.size();
  if (max_lag < 0) throw std::invalid_argument("negative lag");
  if (T <= max_lag)
    throw std::invalid_argument("sequence shorter than max lag + 1");
  const double m = x.mean();
  const Eigen::VectorXd c = x.array() - m;
  const double r0 = c.squaredNorm() / static_cast<double>(T);
  if (r0 <= 0.0)
    throw std::invalid_argument("constant sequence has no autocorrelation");

  Eigen::VectorXd r(max_lag + 1);
  for (int tau = 0; tau <= max_lag; ++tau) {
    const Eigen::Index len = T - tau;
    const double acc = c.head(len).dot(c.tail(len));
    r(tau) = acc / static_cast<double>(len) / r0;
  }
  return r;
}

double welch_psd_at_zero(const Eigen::VectorXd& x) {
  constexpr int kBlocks = 20;
  const Eigen::Index T = x.size();
  if (T < kBlocks)
    throw std::invalid_argument("need at least " + std::to_string(kBlocks) +
                                " samples, got " + std::to_string(T));
  const Eigen::Index N = T / kBlocks;
  if (N < 3)
    throw std::invalid_argument(
        "blocks of length " + std::to_string(N) +
        " are too short for a Hanning window; need >= 60 samples");

  Eigen::VectorXd w(N);
  for (Eigen::Index t = 0; t < N; ++t)
    w(t) = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(t) /
                                 static_cast<double>(N - 1)));
  const double wss = w.squaredNorm();

  // Remove the overall mean once; per-block demeaning would cancel the very
  // zero-frequency component being estimated.
  const Eigen::VectorXd c = x.array() - x.mean();

  double acc = 0.0;
  for (int l = 0; l < kBlocks; ++l) {
    const double s = w.dot(c.segment(l * N, N));  // DFT at frequency zero
    acc += s * s / wss;
  }
  return acc / kBlocks;
}

double geweke_z(const Eigen::VectorXd& x, const GewekeOptions& opt) {
  const Eigen::Index T = x.size();
  if (!(opt.ratio1 > 0.0) || !(opt.ratio2 > 0.0) ||
      opt.ratio1 + opt.ratio2 >= 1.0)
    throw std::invalid_argument("window ratios must be positive with sum < 1");
  const Eigen::Index T1 = static_cast<Eigen::Index>(opt.ratio1 * T);
  const Eigen::Index T2 = static_cast<Eigen::Index>(opt.ratio2 * T);
  if (T1 < 20 || T2 < 20)
    throw std::invalid_argument("Geweke windows too short (need >= 20 samples)");

  const Eigen::VectorXd head = x.head(T1);
  const Eigen::VectorXd tail = x.tail(T2);
  const double diff = head.mean() - tail.mean();
  if (diff == 0.0) return 0.0;

  const double denom = welch_psd_at_zero(head) / static_cast<double>(T1) +
                       welch_psd_at_zero(tail) / static_cast<double>(T2);
  return diff / (opt.literal_denominator ? denom : std::sqrt(denom));
}

double gelman_rubin(const std::vector<Eigen::VectorXd>& chains,
                    const GelmanRubinOptions& opt) {
  const int K = static_cast<int>(chains.size());
  if (K < 2) throw std::invalid_argument("need at least 2 chains");
  if (opt.five_chain_var_formula && K != 5)
    throw std::invalid_argument("the five-chain variance formula needs 5 chains");
  const Eigen::Index n = chains.front().size();
  for (const auto& c : chains)
    if (c.size() != n) throw std::invalid_argument("chains differ in length");
  if (n < 2) throw std::invalid_argument("chains too short");

  Eigen::VectorXd mu(K), s2(K);
  for (int k = 0; k < K; ++k) {
    mu(k) = chains[static_cast<std::size_t>(k)].mean();
    s2(k) = (chains[static_cast<std::size_t>(k)].array() - mu(k)).square().sum() /
            static_cast<double>(n - 1);
  }
  const double grand = mu.mean();
  const double var_means = (mu.array() - grand).square().sum() / (K - 1);
  const double B = static_cast<double>(n) * var_means;
  const double W = s2.mean();
  if (W <= 0.0) throw std::invalid_argument("all chains constant (W = 0)");

  const double dn = static_cast<double>(n);
  const double sigma2 = (dn - 1.0) / dn * W + B / dn;
  const double V = sigma2 + B / (static_cast<double>(K) * dn);

  auto cov = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return ((a.array() - a.mean()) * (b.array() - b.mean())).sum() / (K - 1);
  };
  const Eigen::VectorXd mu2 = mu.array().square();
  const double var_s2 = cov(s2, s2);

  double var_V;
  if (opt.five_chain_var_formula) {
    // Hard-coded five-chain expression; its first covariance pairs s2 with
    // the chain mean (not its square).
    const double Ttilde = 5.0 * dn;
    var_V = 0.2 * std::pow((dn - 1.0) / dn, 2) * var_s2 +
            std::pow(6.0 / (std::sqrt(2.0) * Ttilde), 2) * B * B +
            12.0 * (dn - 1.0) / (25.0 * dn) * cov(s2, mu) -
            24.0 * (dn - 1.0) / (25.0 * dn) * grand * cov(s2, mu);
  } else {
    const double dK = static_cast<double>(K);
    var_V = std::pow((dn - 1.0) / dn, 2) / dK * var_s2 +
            std::pow((dK + 1.0) / (dK * dn), 2) * 2.0 / (dK - 1.0) * B * B +
            2.0 * (dK + 1.0) * (dn - 1.0) / (dK * dn * dn) * (dn / dK) *
                (cov(s2, mu2) - 2.0 * grand * cov(s2, mu));
  }

  const double df = 2.0 * V * V / var_V;
  return std::sqrt(V * df / (W * (df - 2.0)));
}

}  // namespace dfcl
