#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "moaif/common.hpp"
#include "moaif/model.hpp"

namespace moaif {

/// Normal-Inverse-Wishart hyperparameters: Sigma ~ IW(Lambda, nu),
/// mu | Sigma ~ N(lambda, Sigma / kappa).
struct NiwParams {
  Vector lambda;
  double kappa = 1.0;
  Matrix Lambda;
  double nu = 0.0;

  Eigen::Index dim() const { return lambda.size(); }

  /// kappa may be 0 (flat location prior); it becomes positive after the
  /// first observation. Moments of the location need kappa > 0.
  void validate() const {
    const auto n = dim();
    require_dim(Lambda.rows(), n, "NIW scale matrix");
    require_dim(Lambda.cols(), n, "NIW scale matrix");
    if (!(kappa >= 0.0)) throw Error("NIW: kappa must be non-negative");
    if (!(nu > static_cast<double>(n) + 1.0)) throw Error("NIW: nu must exceed N + 1");
    if (!is_symmetric(Lambda)) throw NumericError("NIW: scale matrix is not symmetric");
    if (Eigen::LLT<Matrix>(Lambda).info() != Eigen::Success) throw NumericError("NIW: scale matrix is not positive definite");
  }

  Vector expected_mean() const { return lambda; }
  Matrix expected_cov() const { return Lambda / (nu - static_cast<double>(dim()) - 1.0); }
};

/// kappa0 = 1, Lambda0 = scale * I, nu0 = N + 4.
inline NiwParams default_prior(const Vector& lambda0, double scale = 1.0) {
  const auto n = lambda0.size();
  return {lambda0, 1.0, scale * Matrix::Identity(n, n), static_cast<double>(n) + 4.0};
}

inline NiwParams posterior_update(const NiwParams& prior, const std::vector<Vector>& data) {
  const auto n = prior.dim();
  if (data.empty()) return prior;
  const double l = static_cast<double>(data.size());
  Vector mean = Vector::Zero(n);
  for (const auto& c : data) {
    require_dim(c.size(), n, "posterior_update sample");
    mean += c;
  }
  mean /= l;
  Matrix scatter = Matrix::Zero(n, n);
  for (const auto& c : data) scatter.noalias() += (c - mean) * (c - mean).transpose();
  const Vector d = mean - prior.lambda;
  NiwParams post;
  post.kappa = prior.kappa + l;
  post.lambda = (prior.kappa * prior.lambda + l * mean) / post.kappa;
  post.Lambda = prior.Lambda + (prior.kappa * l / post.kappa) * d * d.transpose() + scatter;
  post.nu = prior.nu + l;
  return post;
}

/// Single-observation update (same result as posterior_update with l = 1).
inline NiwParams posterior_update(const NiwParams& prior, const Vector& c) {
  require_dim(c.size(), prior.dim(), "posterior_update sample");
  NiwParams post;
  post.kappa = prior.kappa + 1.0;
  const Vector d = c - prior.lambda;
  post.lambda = (prior.kappa * prior.lambda + c) / post.kappa;
  post.Lambda = prior.Lambda + (prior.kappa / post.kappa) * d * d.transpose();
  post.nu = prior.nu + 1.0;
  return post;
}

/// Mean and covariance of vec(theta) = (mu_1..mu_N, Sigma_11, Sigma_12, ..,
/// Sigma_1N, Sigma_22, .., Sigma_NN).
struct VecMoments {
  Vector mean;
  Matrix cov;

  VecMoments& operator+=(const VecMoments& o) {
    mean += o.mean;
    cov += o.cov;
    return *this;
  }
};

/// Index pairs (i, j), i <= j, of the covariance block of vec(theta).
inline std::vector<std::pair<int, int>> upper_pairs(Eigen::Index n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.emplace_back(i, j);
  return out;
}

inline Vector vec_theta(const Vector& mu, const Matrix& sigma) {
  const auto n = mu.size();
  Vector v(vec_dim(n));
  v.head(n) = mu;
  Eigen::Index k = n;
  for (auto [i, j] : upper_pairs(n)) v[k++] = sigma(i, j);
  return v;
}

/// Closed-form NIW moments of vec(theta).
///
/// With p = N and Psi = Lambda: E[mu] = lambda, E[Sigma] = Psi / (nu - p - 1),
/// Cov(mu) = E[Sigma] / kappa, Cov(mu, Sigma) = 0 because E[mu | Sigma] is
/// constant, and
///   Cov(S_ij, S_kl) = (2 psi_ij psi_kl + (nu-p-1)(psi_ik psi_jl + psi_il psi_kj))
///                     / ((nu-p)(nu-p-1)^2 (nu-p-3)).
inline VecMoments param_moments(const NiwParams& p) {
  const auto n = p.dim();
  const double np = p.nu - static_cast<double>(n);
  if (!(np > 3.0)) throw Error("param_moments: nu must exceed N + 3");
  if (!(p.kappa > 0.0)) throw Error("param_moments: kappa must be positive");
  const Matrix& psi = p.Lambda;
  const auto d = vec_dim(n);
  VecMoments m{Vector(d), Matrix::Zero(d, d)};
  const Matrix es = psi / (np - 1.0);
  m.mean = vec_theta(p.lambda, es);
  m.cov.topLeftCorner(n, n) = es / p.kappa;
  const auto pairs = upper_pairs(n);
  const double denom = np * (np - 1.0) * (np - 1.0) * (np - 3.0);
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      auto [i, j] = pairs[a];
      auto [k, l] = pairs[b];
      m.cov(n + static_cast<Eigen::Index>(a), n + static_cast<Eigen::Index>(b)) =
          (2.0 * psi(i, j) * psi(k, l) + (np - 1.0) * (psi(i, k) * psi(j, l) + psi(i, l) * psi(k, j))) / denom;
    }
  return m;
}

/// Differential entropy of a Gaussian with the given moments.
inline double mvn_entropy(const VecMoments& m) {
  Eigen::LLT<Matrix> llt(m.cov);
  if (llt.info() != Eigen::Success) throw NumericError("mvn_entropy: covariance is not positive definite");
  const double d = static_cast<double>(m.cov.rows());
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return 0.5 * logdet + 0.5 * d * (1.0 + log_two_pi());
}

/// Draw (mu, Sigma) from a NIW. Sigma is the inverse of a Bartlett-sampled
/// Wishart(Lambda^-1, nu); A's diagonal is filled first, then the strictly
/// lower part row by row, then mu's noise in index order.
inline std::pair<Vector, Matrix> sample_niw(const NiwParams& p, Rng& rng) {
  const auto n = p.dim();
  const Matrix L = Eigen::LLT<Matrix>(p.Lambda.inverse()).matrixL();
  Matrix A = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) A(i, i) = std::sqrt(rng.chi_squared(p.nu - static_cast<double>(i)));
  for (Eigen::Index i = 1; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) A(i, j) = rng.normal();
  const Matrix LA = L * A;
  const Matrix W = LA * LA.transpose();
  Matrix sigma = W.inverse();
  sigma = 0.5 * (sigma + sigma.transpose());
  const Matrix F = Eigen::LLT<Matrix>(sigma / p.kappa).matrixL();
  Vector mu = p.lambda + F * rng.standard_normal(n);
  return {mu, sigma};
}

/// Per-edge NIW beliefs with visit counts and the global step counter.
class CostBelief {
 public:
  CostBelief() = default;
  CostBelief(int num_edges, const NiwParams& prior) : prior_(prior) {
    prior.validate();
    params_.assign(static_cast<std::size_t>(num_edges), prior);
    counts_.assign(static_cast<std::size_t>(num_edges), 0);
    if (has_moments(prior)) prior_moments_ = param_moments(prior);
    moments_.assign(static_cast<std::size_t>(num_edges), prior_moments_);
  }

  int num_edges() const { return static_cast<int>(params_.size()); }
  Eigen::Index dim() const { return prior_.dim(); }
  const NiwParams& prior() const { return prior_; }
  const NiwParams& params(int e) const { return params_.at(static_cast<std::size_t>(e)); }
  long count(int e) const { return counts_.at(static_cast<std::size_t>(e)); }
  long global_steps() const { return global_steps_; }

  /// Cached closed-form moments; only valid once kappa > 0.
  const VecMoments& moments(int e) const {
    const auto& p = params(e);
    if (!has_moments(p)) throw Error("belief: moments of edge " + std::to_string(e) + " need kappa > 0 and nu > N + 3");
    return moments_[static_cast<std::size_t>(e)];
  }

  void observe(int e, const Vector& c) {
    auto& p = params_.at(static_cast<std::size_t>(e));
    p = posterior_update(p, c);
    ++counts_[static_cast<std::size_t>(e)];
    ++global_steps_;
    if (has_moments(p)) moments_[static_cast<std::size_t>(e)] = param_moments(p);
  }

  static bool has_moments(const NiwParams& p) {
    return p.kappa > 0.0 && p.nu - static_cast<double>(p.dim()) > 3.0;
  }

  nlohmann::json to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t e = 0; e < params_.size(); ++e) {
      auto je = params_json(params_[e]);
      je["n"] = counts_[e];
      edges.push_back(std::move(je));
    }
    return {{"schema", "moaif.belief/1"}, {"prior", params_json(prior_)}, {"global_steps", global_steps_}, {"edges", edges}};
  }

  static CostBelief from_json(const nlohmann::json& j) {
    try {
      if (j.value("schema", "") != "moaif.belief/1") throw Error("belief json: unsupported schema");
      const auto& je = j.at("edges");
      CostBelief b(static_cast<int>(je.size()), params_from_json(j.at("prior")));
      for (std::size_t e = 0; e < je.size(); ++e) {
        b.params_[e] = params_from_json(je[e]);
        b.params_[e].validate();
        b.counts_[e] = je[e].at("n").get<long>();
        if (has_moments(b.params_[e])) b.moments_[e] = param_moments(b.params_[e]);
      }
      b.global_steps_ = j.at("global_steps").get<long>();
      return b;
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("belief json: ") + e.what());
    }
  }

 private:
  static nlohmann::json params_json(const NiwParams& p) {
    return {{"lambda", vector_to_json(p.lambda)}, {"kappa", p.kappa}, {"Lambda", matrix_to_json(p.Lambda)}, {"nu", p.nu}};
  }
  static NiwParams params_from_json(const nlohmann::json& j) {
    return {vector_from_json(j.at("lambda")), j.at("kappa").get<double>(), matrix_from_json(j.at("Lambda")), j.at("nu").get<double>()};
  }

  NiwParams prior_;
  VecMoments prior_moments_;
  std::vector<NiwParams> params_;
  std::vector<VecMoments> moments_;
  std::vector<long> counts_;
  long global_steps_ = 0;
};

/// Sum of per-edge vec(theta) moments along a sequence of edges.
inline VecMoments convolved_moments(const CostBelief& b, const std::vector<int>& edges) {
  const auto d = vec_dim(b.dim());
  VecMoments m{Vector::Zero(d), Matrix::Zero(d, d)};
  for (int e : edges) {
    if (e < 0 || e >= b.num_edges()) throw Error("convolved_moments: no belief for edge " + std::to_string(e));
    m += b.moments(e);
  }
  return m;
}

/// Certainty-equivalent predicted cumulative cost: sum of E[mu] and E[Sigma].
inline std::pair<Vector, Matrix> predicted_cost(const CostBelief& b, const std::vector<int>& edges) {
  const auto n = b.dim();
  Vector mu = Vector::Zero(n);
  Matrix sigma = Matrix::Zero(n, n);
  for (int e : edges) {
    mu += b.params(e).expected_mean();
    sigma += b.params(e).expected_cov();
  }
  return {mu, sigma};
}

/// M draws of sum_k vec(theta_k), one independent NIW draw per edge.
inline Matrix summed_niw_samples(const CostBelief& b, const std::vector<int>& edges, int draws, Rng& rng) {
  const auto n = b.dim();
  Matrix out = Matrix::Zero(vec_dim(n), draws);
  for (int m = 0; m < draws; ++m)
    for (int e : edges) {
      auto [mu, sigma] = sample_niw(b.params(e), rng);
      out.col(m) += vec_theta(mu, sigma);
    }
  return out;
}

struct QqCoordinate {
  std::vector<double> theoretical;
  std::vector<double> sample;
  double max_dev = 0.0;          // over all quantiles
  double central_max_dev = 0.0;  // over the central 98%
};

struct QqReport {
  int draws = 0;
  bool jittered = false;
  Vector whitened_mean;
  Matrix whitened_cov;
  std::vector<QqCoordinate> coords;

  double max_central_dev() const {
    double m = 0.0;
    for (const auto& c : coords) m = std::max(m, c.central_max_dev);
    return m;
  }
};

/// Normality check of the convolved parameter distribution: sample each
/// edge's NIW, sum, whiten with the empirical Cholesky factor, and compare
/// each coordinate's order statistics with standard normal quantiles.
inline QqReport normality_diagnostic(const CostBelief& b, const std::vector<int>& edges, int draws, Rng& rng) {
  if (edges.empty()) throw Error("normality_diagnostic: empty plan");
  if (draws < 10) throw Error("normality_diagnostic: too few draws");
  Matrix x = summed_niw_samples(b, edges, draws, rng);
  const Vector mean = x.rowwise().mean();
  x.colwise() -= mean;
  Matrix cov = x * x.transpose() / static_cast<double>(draws - 1);
  QqReport r;
  r.draws = draws;
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    r.jittered = true;
    llt.compute(cov + 1e-12 * Matrix::Identity(cov.rows(), cov.cols()));
    if (llt.info() != Eigen::Success) throw NumericError("normality_diagnostic: singular empirical covariance");
  }
  Matrix z = llt.matrixL().solve(x);
  r.whitened_mean = z.rowwise().mean();
  Matrix zc = z.colwise() - r.whitened_mean;
  r.whitened_cov = zc * zc.transpose() / static_cast<double>(draws - 1);

  boost::math::normal_distribution<double> std_normal;
  std::vector<double> theo(static_cast<std::size_t>(draws));
  for (int i = 0; i < draws; ++i)
    theo[static_cast<std::size_t>(i)] = boost::math::quantile(std_normal, (i + 0.5) / draws);
  const int lo = draws / 100, hi = draws - draws / 100;
  for (Eigen::Index c = 0; c < z.rows(); ++c) {
    QqCoordinate q;
    q.theoretical = theo;
    q.sample.resize(static_cast<std::size_t>(draws));
    for (int i = 0; i < draws; ++i) q.sample[static_cast<std::size_t>(i)] = z(c, i);
    std::sort(q.sample.begin(), q.sample.end());
    for (int i = 0; i < draws; ++i) {
      double dev = std::abs(q.sample[static_cast<std::size_t>(i)] - theo[static_cast<std::size_t>(i)]);
      q.max_dev = std::max(q.max_dev, dev);
      if (i >= lo && i < hi) q.central_max_dev = std::max(q.central_max_dev, dev);
    }
    r.coords.push_back(std::move(q));
  }
  return r;
}

}  // namespace moaif
