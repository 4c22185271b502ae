#include "dfcl/chainladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dfcl {

void DfclParams::validate() const {
  if (factors.size() != sigmas.size())
    throw std::invalid_argument("factors and sigmas must have equal length");
  for (Eigen::Index j = 0; j < factors.size(); ++j) {
    if (!(factors(j) > 0.0) || !std::isfinite(factors(j)))
      throw std::invalid_argument("factor " + std::to_string(j) +
                                  " not strictly positive");
    if (!(sigmas(j) > 0.0) || !std::isfinite(sigmas(j)))
      throw std::invalid_argument("sigma " + std::to_string(j) +
                                  " not strictly positive");
  }
}

Eigen::VectorXd estimate_cl_factors(const ClaimsTriangle& t) {
  const int I = t.size();
  if (I < 1) throw std::invalid_argument("degenerate triangle: need I >= 1");
  Eigen::VectorXd f(I);
  for (int j = 0; j < I; ++j) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i + j + 1 <= I; ++i) {
      num += t(i, j + 1);
      den += t(i, j);
    }
    f(j) = num / den;
  }
  return f;
}

double column_variance(const ClaimsTriangle& t, const Eigen::VectorXd& factors,
                       int j) {
  const int I = t.size();
  if (j < 0 || j >= I - 1)
    throw std::invalid_argument("column variance defined for 0 <= j < I-1");
  const int terms = I - j;  // rows i = 0..I-j-1
  double acc = 0.0;
  for (int i = 0; i < terms; ++i) {
    const double ratio = t(i, j + 1) / t(i, j);
    const double dev = ratio - factors(j);
    acc += t(i, j) * dev * dev;
  }
  return acc / (terms - 1);
}

Eigen::VectorXd estimate_cl_variances(const ClaimsTriangle& t,
                                      const Eigen::VectorXd& factors) {
  const int I = t.size();
  const int J = I;
  if (J < 3)
    throw std::invalid_argument(
        "variance tail rule needs J >= 3, got J = " + std::to_string(J));
  if (factors.size() != J)
    throw std::invalid_argument("factor vector has wrong length");

  Eigen::VectorXd s2 = Eigen::VectorXd::Zero(J);
  for (int j = 0; j < J - 1; ++j) s2(j) = column_variance(t, factors, j);
  if (s2(J - 3) <= 0.0)
    throw std::invalid_argument(
        "sigma2_{J-3} is zero; tail rule would divide by zero");
  s2(J - 1) =
      std::min({s2(J - 2) * s2(J - 2) / s2(J - 3), s2(J - 3), s2(J - 2)});
  return s2;
}

DfclParams classical_fit(const ClaimsTriangle& t) {
  DfclParams p;
  p.factors = estimate_cl_factors(t);
  p.sigmas = estimate_cl_variances(t, p.factors).cwiseSqrt();
  return p;
}

ClPrediction predict(const ClaimsTriangle& t, const Eigen::VectorXd& factors) {
  const int I = t.size();
  if (factors.size() != I)
    throw std::invalid_argument("factor vector has wrong length");
  ClPrediction out;
  out.completed = t.values();
  for (int i = 0; i <= I; ++i)
    for (int j = I - i + 1; j <= I; ++j)
      out.completed(i, j) = out.completed(i, j - 1) * factors(j - 1);
  out.reserves.resize(I + 1);
  for (int i = 0; i <= I; ++i) out.reserves(i) = out.completed(i, I) - t(i, I - i);
  out.total_reserve = out.reserves.sum();
  return out;
}

ProcessVariance freq_process_variance(const ClaimsTriangle& t,
                                      const Eigen::VectorXd& factors,
                                      const Eigen::VectorXd& variances) {
  const int I = t.size();
  const ClPrediction pred = predict(t, factors);
  ProcessVariance pv;
  pv.per_year = Eigen::VectorXd::Zero(I + 1);
  for (int i = 0; i <= I; ++i) {
    double acc = 0.0;
    for (int j = I - i; j < I; ++j)
      acc += (variances(j) / (factors(j) * factors(j))) / pred.completed(i, j);
    const double ult = pred.completed(i, I);
    pv.per_year(i) = ult * ult * acc;
  }
  pv.total = pv.per_year.sum();
  return pv;
}

}  // namespace dfcl
