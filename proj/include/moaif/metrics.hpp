#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "moaif/common.hpp"

namespace moaif {

/// Mean and covariance of one front plan's cumulative cost.
struct FrontPoint {
  Vector mean;
  Matrix cov;
};

/// Smallest eps >= 0 such that no point of the true front dominates
/// plan_mean - eps * 1 (the infimum at the strict-dominance boundary):
/// max(0, max over mu* of min_i(plan_mean_i - mu*_i)).
inline double pareto_regret(const std::vector<Vector>& true_front, const Vector& plan_mean) {
  if (true_front.empty()) throw Error("pareto_regret: empty true front");
  double eps = 0.0;
  for (const auto& mu : true_front) {
    require_dim(mu.size(), plan_mean.size(), "pareto_regret");
    eps = std::max(eps, (plan_mean - mu).minCoeff());
  }
  return eps;
}

inline std::vector<double> cumulative(const std::vector<double>& per_instance) {
  std::vector<double> out;
  out.reserve(per_instance.size());
  double s = 0.0;
  for (double r : per_instance) out.push_back(s += r);
  return out;
}

/// 2-Wasserstein distance between N(p.mean, p.cov) and N(q.mean, q.cov).
inline double w2_gaussian(const FrontPoint& p, const FrontPoint& q) {
  require_dim(p.mean.size(), q.mean.size(), "w2_gaussian");
  require_dim(p.cov.rows(), p.mean.size(), "w2_gaussian covariance");
  require_dim(q.cov.rows(), q.mean.size(), "w2_gaussian covariance");
  if (!is_symmetric(p.cov) || !is_symmetric(q.cov)) throw NumericError("w2_gaussian: covariance is not symmetric");
  const double dm = (p.mean - q.mean).squaredNorm();
  if (p.cov == q.cov) return std::sqrt(dm);
  const Matrix rq = psd_sqrt(q.cov);
  const Matrix cross = psd_sqrt(rq * p.cov * rq);
  const double w2 = dm + (p.cov + q.cov - 2.0 * cross).trace();
  return std::sqrt(std::max(0.0, w2));
}

/// Chamfer-style sum of W2 distances: mean distance from each true point to
/// its nearest estimate plus mean distance from each estimate to its nearest
/// true point.
inline double pareto_bias(const std::vector<FrontPoint>& true_front, const std::vector<FrontPoint>& est_front) {
  if (true_front.empty() || est_front.empty()) throw Error("pareto_bias: empty front");
  std::vector<double> row_min(true_front.size(), std::numeric_limits<double>::infinity());
  std::vector<double> col_min(est_front.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < true_front.size(); ++i)
    for (std::size_t j = 0; j < est_front.size(); ++j) {
      const double d = w2_gaussian(true_front[i], est_front[j]);
      row_min[i] = std::min(row_min[i], d);
      col_min[j] = std::min(col_min[j], d);
    }
  double a = 0.0, b = 0.0;
  for (double d : row_min) a += d;
  for (double d : col_min) b += d;
  return a / static_cast<double>(true_front.size()) + b / static_cast<double>(est_front.size());
}

}  // namespace moaif
