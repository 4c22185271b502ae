#include "dfcl/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace dfcl {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ResidualSet compute_residuals(const ClaimsTriangle& t, const DfclParams& p) {
  const int I = t.size();
  p.validate();
  if (p.factors.size() != I)
    throw std::invalid_argument("parameter vectors have wrong length");

  ResidualSet r;
  r.values.resize(residual_cell_count(I));
  int k = 0;
  for (int i = 0; i < I; ++i) {
    for (int j = 1; i + j <= I; ++j) {
      const double prev = t(i, j - 1);
      r.values(k++) = (t(i, j) - p.factors(j - 1) * prev) /
                      (p.sigmas(j - 1) * std::sqrt(prev));
    }
  }
  r.mean = r.values.mean();
  const int n = r.count();
  r.sd = n > 1 ? std::sqrt((r.values.array() - r.mean).square().sum() / (n - 1))
               : 0.0;
  return r;
}

Eigen::MatrixXd resample_triangle(const ClaimsTriangle& t, const DfclParams& p,
                                  const ResidualSet& r, ResamplingScheme scheme,
                                  std::mt19937_64& rng, int max_redraws) {
  const int I = t.size();
  if (r.count() == 0) throw std::invalid_argument("empty residual set");
  std::uniform_int_distribution<int> pick(0, r.count() - 1);

  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(I + 1, I + 1, kNaN);
  for (int i = 0; i <= I; ++i) d(i, 0) = t(i, 0);
  for (int i = 0; i < I; ++i) {
    for (int j = 1; i + j <= I; ++j) {
      const double prev =
          scheme == ResamplingScheme::Conditional ? t(i, j - 1) : d(i, j - 1);
      double v = 0.0;
      bool ok = false;
      for (int attempt = 0; attempt <= max_redraws; ++attempt) {
        const double e = r.values(pick(rng));
        v = p.factors(j - 1) * prev + p.sigmas(j - 1) * std::sqrt(prev) * e;
        if (v > 0.0) {
          ok = true;
          break;
        }
      }
      if (!ok)
        throw PositivityRepairError(
            "cell (" + std::to_string(i) + "," + std::to_string(j) +
            ") stayed non-positive after " + std::to_string(max_redraws + 1) +
            " residual draws");
      d(i, j) = v;
    }
  }
  return d;
}

namespace {

// Bootstrap refit with observed denominators; Mack tail rule for the last
// variance when the triangle is large enough.
void refit(const ClaimsTriangle& t, const Eigen::MatrixXd& d,
           Eigen::VectorXd& factors, Eigen::VectorXd& variances) {
  const int I = t.size();
  factors.resize(I);
  variances = Eigen::VectorXd::Zero(I);
  for (int j = 0; j < I; ++j) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i + j + 1 <= I; ++i) {
      num += d(i, j + 1);
      den += t(i, j);
    }
    factors(j) = num / den;
  }
  for (int j = 0; j < I - 1; ++j) {
    const int terms = I - j;
    double acc = 0.0;
    for (int i = 0; i < terms; ++i) {
      const double dev = d(i, j + 1) / t(i, j) - factors(j);
      acc += t(i, j) * dev * dev;
    }
    variances(j) = acc / (terms - 1);
  }
  if (I >= 3 && variances(I - 3) > 0.0)
    variances(I - 1) = std::min({variances(I - 2) * variances(I - 2) /
                                     variances(I - 3),
                                 variances(I - 3), variances(I - 2)});
}

}  // namespace

BootstrapDraw resample(const ClaimsTriangle& t, const DfclParams& p,
                       const ResidualSet& r, ResamplingScheme scheme,
                       std::mt19937_64& rng, int max_redraws) {
  BootstrapDraw draw;
  draw.triangle = resample_triangle(t, p, r, scheme, rng, max_redraws);
  draw.source = p;
  refit(t, draw.triangle, draw.factors, draw.variances);
  return draw;
}

BootstrapDraw resample_conditional(const ClaimsTriangle& t, const DfclParams& p,
                                   const ResidualSet& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return resample(t, p, r, ResamplingScheme::Conditional, rng);
}

BootstrapDraw resample_unconditional(const ClaimsTriangle& t,
                                     const DfclParams& p, const ResidualSet& r,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return resample(t, p, r, ResamplingScheme::Unconditional, rng);
}

std::vector<BootstrapDraw> bootstrap_draws(const ClaimsTriangle& t,
                                           const DfclParams& p,
                                           const ResidualSet& r,
                                           ResamplingScheme scheme, int count,
                                           std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("negative draw count");
  std::vector<BootstrapDraw> draws(static_cast<std::size_t>(count));
  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  std::vector<std::future<void>> futs;
  std::atomic<int> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&] {
      for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL *
                                       static_cast<std::uint64_t>(k + 1));
        draws[static_cast<std::size_t>(k)] = resample(t, p, r, scheme, rng);
      }
    }));
  }
  for (auto& f : futs) f.get();
  return draws;
}

ParamError freq_param_error(const std::vector<BootstrapDraw>& draws,
                            const ClaimsTriangle& t) {
  const int T = static_cast<int>(draws.size());
  if (T < 2)
    throw std::invalid_argument("need at least 2 bootstrap draws, got " +
                                std::to_string(T));
  const int I = t.size();
  const Eigen::VectorXd diag = anti_diagonal(t);

  // products prod_{j=I-i}^{J-1} f*_j per draw and year
  Eigen::MatrixXd prod(T, I + 1);
  Eigen::VectorXd portfolio(T);
  for (int s = 0; s < T; ++s) {
    const auto& f = draws[static_cast<std::size_t>(s)].factors;
    double total = 0.0;
    for (int i = 0; i <= I; ++i) {
      double pr = 1.0;
      for (int j = I - i; j < I; ++j) pr *= f(j);
      prod(s, i) = pr;
      total += diag(i) * pr;
    }
    portfolio(s) = total;
  }

  ParamError pe;
  pe.per_year.resize(I + 1);
  for (int i = 0; i <= I; ++i) {
    const double m = prod.col(i).mean();
    const double var = (prod.col(i).array() - m).square().sum() / (T - 1);
    pe.per_year(i) = diag(i) * diag(i) * var;
  }
  const double pm = portfolio.mean();
  pe.total = (portfolio.array() - pm).square().sum() / (T - 1);
  return pe;
}

}  // namespace dfcl
