#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "moaif/belief.hpp"
#include "moaif/common.hpp"

namespace moaif {

struct PreferenceDist {
  Vector mean;
  Matrix cov;

  void validate() const {
    require_dim(cov.rows(), mean.size(), "preference covariance");
    require_dim(cov.cols(), mean.size(), "preference covariance");
    if (!is_symmetric(cov) || Eigen::LLT<Matrix>(cov).info() != Eigen::Success)
      throw NumericError("preference covariance must be symmetric positive definite");
  }

  /// Stand-in for a zero-variance preference: eps * I with eps = 1e-6 scale^2.
  static PreferenceDist no_variance(const Vector& mean, double scale = 1.0) {
    const auto n = mean.size();
    return {mean, 1e-6 * scale * scale * Matrix::Identity(n, n)};
  }
};

/// One Pareto-optimal plan as seen by the selector: its transition edges and
/// the certainty-equivalent predicted cumulative cost N(mean, cov).
struct Candidate {
  std::vector<int> edges;
  Vector mean;
  Matrix cov;
};

struct EfeBreakdown {
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  double total = 0.0;
};

/// -E_q[log p_pr(C)] for q = N(mu, sigma) and p_pr = N(mu_pr, Sigma_pr):
/// (N/2) log 2pi + (1/2) log|Sigma_pr| + (1/2)[tr(Sigma_pr^-1 sigma) + d^T Sigma_pr^-1 d].
inline double efe_term1(const Vector& mu, const Matrix& sigma, const PreferenceDist& pref) {
  const auto n = pref.mean.size();
  require_dim(mu.size(), n, "efe_term1 mean");
  require_dim(sigma.rows(), n, "efe_term1 covariance");
  Eigen::LLT<Matrix> llt(pref.cov);
  if (llt.info() != Eigen::Success) throw NumericError("efe_term1: preference covariance is singular");
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const Vector d = mu - pref.mean;
  const double quad = d.dot(llt.solve(d));
  const double trace = llt.solve(sigma).trace();
  return 0.5 * static_cast<double>(n) * log_two_pi() + 0.5 * logdet + 0.5 * (trace + quad);
}

/// Entropy of the convolved prior parameter distribution.
inline double efe_term2(const VecMoments& m) { return mvn_entropy(m); }

/// Expected entropy of the convolved single-observation posterior, estimated
/// with `samples` replicates.
///
/// Each replicate draws c_k ~ N(E[mu_k], E[Sigma_k]) for every step k, applies
/// the one-sample conjugate update to that step's belief, sums the posterior
/// vec(theta) covariances and takes the Gaussian entropy. Each step draws N
/// normals in index order. The posterior covariance of vec(theta) does not
/// depend on the posterior location, so only Lambda is updated here; the
/// result equals composing posterior_update, param_moments and mvn_entropy.
class Term3Estimator {
 public:
  Term3Estimator(const CostBelief& b, const std::vector<int>& edges) : n_(b.dim()), d_(vec_dim(b.dim())) {
    if (edges.empty()) throw Error("efe_term3: empty plan");
    for (int e : edges) {
      const NiwParams& p = b.params(e);
      if (!CostBelief::has_moments(p)) throw Error("efe_term3: belief moments undefined for edge " + std::to_string(e));
      Step s;
      s.Lambda = p.Lambda;
      s.factor = Eigen::LLT<Matrix>(p.expected_cov()).matrixL();
      const double kappa = p.kappa + 1.0;
      const double np = p.nu + 1.0 - static_cast<double>(n_);
      s.shrink = p.kappa / kappa;
      s.mu_scale = 1.0 / (kappa * (np - 1.0));
      s.sig_scale = 1.0 / (np * (np - 1.0) * (np - 1.0) * (np - 3.0));
      s.np1 = np - 1.0;
      steps_.push_back(std::move(s));
    }
    pairs_ = upper_pairs(n_);
    z_.resize(n_);
    dev_.resize(n_);
    psi_.resize(n_, n_);
    acc_.resize(d_, d_);
    llt_ = Eigen::LLT<Matrix>(d_);
  }

  /// Entropy of one replicate.
  double replicate(Rng& rng) {
    acc_.setZero();
    const auto np = static_cast<Eigen::Index>(pairs_.size());
    for (const Step& s : steps_) {
      for (Eigen::Index i = 0; i < n_; ++i) z_[i] = rng.normal();
      dev_.noalias() = s.factor * z_;  // c - lambda
      psi_ = s.Lambda;
      psi_.noalias() += s.shrink * dev_ * dev_.transpose();
      acc_.topLeftCorner(n_, n_) += s.mu_scale * psi_;
      for (Eigen::Index a = 0; a < np; ++a) {
        const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
        for (Eigen::Index c = 0; c < np; ++c) {
          const auto [k, l] = pairs_[static_cast<std::size_t>(c)];
          acc_(n_ + a, n_ + c) +=
              s.sig_scale * (2.0 * psi_(i, j) * psi_(k, l) + s.np1 * (psi_(i, k) * psi_(j, l) + psi_(i, l) * psi_(k, j)));
        }
      }
    }
    llt_.compute(acc_);
    if (llt_.info() != Eigen::Success) throw NumericError("efe_term3: posterior covariance is not positive definite");
    const double logdet = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
    return 0.5 * logdet + 0.5 * static_cast<double>(d_) * (1.0 + log_two_pi());
  }

  double estimate(int samples, Rng& rng) {
    if (samples < 1) throw Error("efe_term3: need at least one sample");
    double sum = 0.0;
    for (int r = 0; r < samples; ++r) sum += replicate(rng);
    return sum / samples;
  }

 private:
  struct Step {
    Matrix Lambda;
    Matrix factor;
    double shrink, mu_scale, sig_scale, np1;
  };

  Eigen::Index n_, d_;
  std::vector<Step> steps_;
  std::vector<std::pair<int, int>> pairs_;
  Vector z_, dev_;
  Matrix psi_, acc_;
  Eigen::LLT<Matrix> llt_;
};

inline double efe_term3(const CostBelief& b, const std::vector<int>& edges, int samples, Rng& rng) {
  Term3Estimator est(b, edges);
  return est.estimate(samples, rng);
}

inline EfeBreakdown efe(const Candidate& c, const CostBelief& b, const PreferenceDist& pref, int samples, Rng& rng) {
  EfeBreakdown r;
  r.term1 = efe_term1(c.mean, c.cov, pref);
  r.term2 = efe_term2(convolved_moments(b, c.edges));
  r.term3 = efe_term3(b, c.edges, samples, rng);
  r.total = r.term1 - r.term2 + r.term3;
  return r;
}

struct AifSelection {
  int index = 0;
  std::vector<EfeBreakdown> scores;
};

/// Argmin of EFE over the candidates (lowest index on ties). Candidate i
/// uses its own stream seeded by derive_seed(seed, i).
inline AifSelection select_aif(const std::vector<Candidate>& front, const CostBelief& b, const PreferenceDist& pref,
                               int samples, std::uint64_t seed) {
  if (front.empty()) throw Error("select_aif: empty front");
  pref.validate();
  AifSelection out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < front.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    out.scores.push_back(efe(front[i], b, pref, samples, rng));
    if (out.scores.back().total < best) {
      best = out.scores.back().total;
      out.index = static_cast<int>(i);
    }
  }
  return out;
}

inline int select_uniform(std::size_t front_size, Rng& rng) {
  if (front_size == 0) throw Error("select_uniform: empty front");
  return static_cast<int>(rng.index(front_size));
}

/// argmin w^T mu with w normalised to sum 1.
inline int select_weights(const std::vector<Vector>& means, const Vector& w) {
  if (means.empty()) throw Error("select_weights: empty front");
  if ((w.array() < 0).any() || !(w.sum() > 0)) throw Error("select_weights: weights must be non-negative and not all zero");
  const Vector wn = w / w.sum();
  int best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < means.size(); ++i) {
    require_dim(means[i].size(), w.size(), "select_weights");
    const double v = wn.dot(means[i]);
    if (v < best_v) {
      best_v = v;
      best = static_cast<int>(i);
    }
  }
  return best;
}

/// TOPSIS closeness coefficients for cost objectives, after min-max
/// normalisation (a zero-range objective normalises to 0.5 everywhere).
inline std::vector<double> topsis_closeness(const std::vector<Vector>& means) {
  if (means.empty()) throw Error("select_topsis: empty front");
  const auto n = means.front().size();
  Vector lo = means.front(), hi = means.front();
  for (const auto& m : means) {
    require_dim(m.size(), n, "select_topsis");
    lo = lo.cwiseMin(m);
    hi = hi.cwiseMax(m);
  }
  std::vector<Vector> z;
  for (const auto& m : means) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = hi[i] > lo[i] ? (m[i] - lo[i]) / (hi[i] - lo[i]) : 0.5;
    z.push_back(v);
  }
  Vector ideal = z.front(), anti = z.front();
  for (const auto& v : z) {
    ideal = ideal.cwiseMin(v);
    anti = anti.cwiseMax(v);
  }
  std::vector<double> c;
  for (const auto& v : z) {
    const double dp = (v - ideal).norm(), dm = (v - anti).norm();
    c.push_back(dp + dm > 0 ? dm / (dp + dm) : 0.5);
  }
  return c;
}

inline int select_topsis(const std::vector<Vector>& means) {
  const auto c = topsis_closeness(means);
  int best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] > c[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

}  // namespace moaif
