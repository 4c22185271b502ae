#ifndef DFCL_DIAGNOSTICS_HPP
#define DFCL_DIAGNOSTICS_HPP

#include <vector>

#include <Eigen/Dense>

namespace dfcl {

/// Autocorrelation estimate at lags 0..max_lag,
///   r(tau) = 1/(T-tau) sum_{t} (x_t - m)(x_{t+tau} - m) / r0,
/// normalised by the lag-0 value so r(0) == 1 exactly. Throws for a
/// constant sequence.
Eigen::VectorXd acf(const Eigen::VectorXd& x, int max_lag);

/// Welch spectral density at frequency zero: 20 non-overlapping blocks,
/// each demeaned and Hanning-windowed, periodogram |DFT(0)|^2 normalised by
/// the window's sum of squares, averaged across blocks. White noise of
/// variance v gives approximately v.
double welch_psd_at_zero(const Eigen::VectorXd& x);

struct GewekeOptions {
  double ratio1 = 0.1;  // leading window T1 / T
  double ratio2 = 0.5;  // trailing window T2 / T
  // The literal form divides the mean difference by the sum of the two
  // variance terms; the default divides by its square root (a standard
  // error), giving an asymptotically N(0,1) statistic.
  bool literal_denominator = false;
};

/// Geweke convergence statistic comparing the means of a leading and a
/// trailing window, standardised with Welch spectral density estimates:
///   Z = (m1 - m2) / sqrt(SD1(0)/T1 + SD2(0)/T2).
double geweke_z(const Eigen::VectorXd& x, const GewekeOptions& opt = {});

struct GelmanRubinOptions {
  // Use the hard-coded five-chain variance expression instead of the
  // general one (requires exactly 5 chains).
  bool five_chain_var_formula = false;
};

/// Multi-chain potential scale reduction sqrt(R^) with the Student-t
/// degrees-of-freedom correction:
///   sqrt(R^) = sqrt( V^ df / (W (df - 2)) ).
/// Chains must have equal length; throws when all chains are constant.
double gelman_rubin(const std::vector<Eigen::VectorXd>& chains,
                    const GelmanRubinOptions& opt = {});

}  // namespace dfcl

#endif
