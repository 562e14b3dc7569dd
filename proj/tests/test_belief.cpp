#include <gtest/gtest.h>

#include <algorithm>

#include "moaif/belief.hpp"

using namespace moaif;

namespace {

Matrix random_spd(Rng& rng, Eigen::Index n, double scale = 1.0) {
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  return scale * (a * a.transpose() + 0.5 * Matrix::Identity(n, n));
}

NiwParams random_niw(Rng& rng, Eigen::Index n) {
  return {rng.standard_normal(n), 0.5 + 2.0 * rng.uniform(), random_spd(rng, n), static_cast<double>(n) + 4.0 + 3.0 * rng.uniform()};
}

std::vector<Vector> observations(Rng& rng, Eigen::Index n, int l) {
  std::vector<Vector> d;
  const Matrix f = Eigen::LLT<Matrix>(random_spd(rng, n)).matrixL();
  const Vector mu = 3.0 * rng.standard_normal(n);
  for (int k = 0; k < l; ++k) d.push_back(mu + f * rng.standard_normal(n));
  return d;
}

double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

void expect_params_near(const NiwParams& a, const NiwParams& b, double tol) {
  EXPECT_LE(rel_err(a.lambda, b.lambda), tol);
  EXPECT_LE(std::abs(a.kappa - b.kappa), tol * b.kappa);
  EXPECT_LE(rel_err(a.Lambda, b.Lambda), tol);
  EXPECT_LE(std::abs(a.nu - b.nu), tol * b.nu);
}

// Empirical mean and covariance of vec(theta) over NIW draws.
VecMoments sampled_moments(const NiwParams& p, int draws, Rng& rng) {
  const auto d = vec_dim(p.dim());
  Matrix x(d, draws);
  for (int k = 0; k < draws; ++k) {
    auto [mu, sigma] = sample_niw(p, rng);
    x.col(k) = vec_theta(mu, sigma);
  }
  const Vector mean = x.rowwise().mean();
  const Matrix c = x.colwise() - mean;
  return {mean, c * c.transpose() / (draws - 1.0)};
}

}  // namespace

TEST(Posterior, EmptyDataIsIdentity) {
  Rng rng(1);
  NiwParams p = random_niw(rng, 2);
  NiwParams q = posterior_update(p, std::vector<Vector>{});
  EXPECT_EQ(q.lambda, p.lambda);
  EXPECT_EQ(q.kappa, p.kappa);
  EXPECT_EQ(q.Lambda, p.Lambda);
  EXPECT_EQ(q.nu, p.nu);
}

TEST(Posterior, ObservationAtPriorMean) {
  NiwParams p{Vector{{1.0, -2.0}}, 1.0, Matrix{{2.0, 0.3}, {0.3, 1.0}}, 6.0};
  for (const NiwParams& q : {posterior_update(p, p.lambda), posterior_update(p, std::vector<Vector>{p.lambda})}) {
    EXPECT_EQ(q.lambda, p.lambda);
    EXPECT_EQ(q.kappa, 2.0);
    EXPECT_EQ(q.Lambda, p.Lambda);
    EXPECT_EQ(q.nu, 7.0);
  }
}

TEST(Posterior, BatchEqualsSequential) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    NiwParams p = random_niw(rng, 2);
    const auto data = observations(rng, 2, 1 + static_cast<int>(rng.index(50)));
    NiwParams seq = p;
    for (const auto& c : data) seq = posterior_update(seq, c);
    expect_params_near(posterior_update(p, data), seq, 1e-9);
  }
}

TEST(Posterior, OrderInvariant) {
  Rng rng(3);
  NiwParams p = random_niw(rng, 3);
  auto data = observations(rng, 3, 40);
  const NiwParams a = posterior_update(p, data);
  std::reverse(data.begin(), data.end());
  std::swap(data[3], data[17]);
  expect_params_near(posterior_update(p, data), a, 1e-9);
}

TEST(Posterior, ConcentratesOnSampleMoments) {
  Rng rng(4);
  const auto data = observations(rng, 2, 10000);
  Vector mean = Vector::Zero(2);
  for (const auto& c : data) mean += c;
  mean /= data.size();
  Matrix cov = Matrix::Zero(2, 2);
  for (const auto& c : data) cov += (c - mean) * (c - mean).transpose();
  cov /= data.size() - 1.0;
  NiwParams post = posterior_update(default_prior(Vector::Zero(2)), data);
  EXPECT_LE(rel_err(post.expected_mean(), mean), 0.01);
  EXPECT_LE(rel_err(post.expected_cov(), cov), 0.01);
}

TEST(Posterior, DimensionMismatch) {
  NiwParams p = default_prior(Vector::Zero(2));
  EXPECT_THROW(posterior_update(p, Vector::Zero(3)), DimensionError);
  EXPECT_THROW(posterior_update(p, std::vector<Vector>{Vector::Zero(3)}), DimensionError);
}

TEST(ParamMoments, ScalarExample) {
  NiwParams p{Vector{{2.0}}, 4.0, Matrix{{6.0}}, 5.0};
  const VecMoments m = param_moments(p);
  EXPECT_DOUBLE_EQ(m.mean[0], 2.0);
  EXPECT_DOUBLE_EQ(m.mean[1], 2.0);
  EXPECT_DOUBLE_EQ(m.cov(0, 0), 0.5);
  EXPECT_EQ(m.cov(0, 1), 0.0);
  // sigma^2 ~ inverse-gamma(nu/2, Lambda/2) = IG(2.5, 3): var = 9 / (1.5^2 * 0.5) = 8.
  EXPECT_NEAR(m.cov(1, 1), 8.0, 1e-12);
}

TEST(ParamMoments, ScalarExampleMatchesSampling) {
  NiwParams p{Vector{{2.0}}, 4.0, Matrix{{6.0}}, 5.0};
  Rng rng(5);
  const int draws = 1000000;
  double s_mu = 0, s_mu2 = 0, s_sig = 0;
  for (int k = 0; k < draws; ++k) {
    auto [mu, sigma] = sample_niw(p, rng);
    s_mu += mu[0];
    s_mu2 += mu[0] * mu[0];
    s_sig += sigma(0, 0);
  }
  const double e_mu = s_mu / draws, var_mu = s_mu2 / draws - e_mu * e_mu, e_sig = s_sig / draws;
  // SE of the mean of mu is sqrt(0.5 / draws); sigma^2's variance is 8.
  EXPECT_NEAR(e_mu, 2.0, 3.0 * std::sqrt(0.5 / draws));
  EXPECT_NEAR(e_sig, 2.0, 3.0 * std::sqrt(8.0 / draws));
  EXPECT_NEAR(var_mu, 0.5, 0.01);
}

TEST(ParamMoments, BivariateMatchesSampling) {
  NiwParams p{Vector{{1.0, 3.0}}, 2.0, Matrix{{4.0, 1.0}, {1.0, 2.0}}, 12.0};
  Rng rng(6);
  const VecMoments m = param_moments(p);
  const VecMoments s = sampled_moments(p, 400000, rng);
  for (Eigen::Index i = 0; i < m.mean.size(); ++i) EXPECT_NEAR(s.mean[i], m.mean[i], 3.0 * std::sqrt(m.cov(i, i) / 400000));
  // Second moments: 3% relative agreement on the covariance matrix.
  EXPECT_LT((s.cov - m.cov).norm() / m.cov.norm(), 0.03);
  // mu and Sigma entries are uncorrelated.
  EXPECT_LT(s.cov.topRightCorner(2, 3).cwiseAbs().maxCoeff(), 0.02);
}

TEST(ParamMoments, DiagonalScaleGivesDiagonalMean) {
  NiwParams p{Vector::Zero(3), 1.0, Vector{{1.0, 2.0, 3.0}}.asDiagonal(), 9.0};
  const VecMoments m = param_moments(p);
  // vec order: mu(3), S11 S12 S13 S22 S23 S33.
  EXPECT_EQ(m.mean[4], 0.0);
  EXPECT_EQ(m.mean[5], 0.0);
  EXPECT_EQ(m.mean[7], 0.0);
}

TEST(ParamMoments, VarianceShrinksWithDegreesOfFreedom) {
  const Matrix base{{2.0, 0.5}, {0.5, 1.0}};
  double prev = std::numeric_limits<double>::infinity(), last_ratio = 0.0;
  for (double nu : {8.0, 16.0, 64.0, 256.0, 1024.0}) {
    NiwParams p{Vector::Zero(2), nu, base * nu, nu};
    const double v = param_moments(p).cov.trace();
    EXPECT_LT(v, prev);
    last_ratio = v / prev;
    prev = v;
  }
  // Large nu: the total variance decays like 1 / nu.
  EXPECT_NEAR(last_ratio, 0.25, 0.01);
}

TEST(ParamMoments, NeedsEnoughDegreesOfFreedom) {
  NiwParams p{Vector::Zero(2), 1.0, Matrix::Identity(2, 2), 5.0};
  EXPECT_THROW(param_moments(p), Error);
}

TEST(Entropy, KnownValues) {
  VecMoments id{Vector::Zero(5), Matrix::Identity(5, 5)};
  EXPECT_NEAR(mvn_entropy(id), 7.0947, 1e-4);
  VecMoments four{Vector::Zero(5), 4.0 * Matrix::Identity(5, 5)};
  EXPECT_NEAR(mvn_entropy(four), mvn_entropy(id) + 2.5 * std::log(4.0), 1e-12);
  EXPECT_THROW(mvn_entropy(VecMoments{Vector::Zero(2), Matrix::Zero(2, 2)}), NumericError);
}

TEST(Entropy, MatchesEigenvalueRoute) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix c = random_spd(rng, 5);
    Eigen::SelfAdjointEigenSolver<Matrix> es(c);
    const double expected = 0.5 * es.eigenvalues().array().log().sum() + 2.5 * (1.0 + std::log(2.0 * M_PI));
    EXPECT_NEAR(mvn_entropy({Vector::Zero(5), c}), expected, 1e-10);
  }
}

TEST(Convolved, LinearityExamples) {
  Rng rng(9);
  CostBelief b(3, default_prior(Vector::Zero(2)));
  for (int k = 0; k < 5; ++k) b.observe(1, rng.standard_normal(2));
  const VecMoments one = convolved_moments(b, {1});
  EXPECT_EQ(one.mean, param_moments(b.params(1)).mean);
  EXPECT_EQ(one.cov, param_moments(b.params(1)).cov);
  const VecMoments two = convolved_moments(b, {1, 1});
  EXPECT_EQ(two.mean, 2.0 * one.mean);
  EXPECT_EQ(two.cov, 2.0 * one.cov);
  EXPECT_THROW(convolved_moments(b, {3}), Error);
}

TEST(Convolved, MatchesSummedDraws) {
  Rng rng(10);
  const int edges = 20, draws = 100000;
  CostBelief b(edges, default_prior(Vector{{0.5, 0.0}}));
  for (int e = 0; e < edges; ++e) {
    const auto data = observations(rng, 2, 10);
    for (const auto& c : data) b.observe(e, c);
  }
  std::vector<int> plan(edges);
  for (int e = 0; e < edges; ++e) plan[e] = e;
  const VecMoments m = convolved_moments(b, plan);
  const Matrix x = summed_niw_samples(b, plan, draws, rng);
  const Vector mean = x.rowwise().mean();
  const Matrix c = x.colwise() - mean;
  for (Eigen::Index i = 0; i < m.mean.size(); ++i) {
    const double var = c.row(i).squaredNorm() / (draws - 1.0);
    const double m4 = c.row(i).array().pow(4).mean();
    EXPECT_NEAR(mean[i], m.mean[i], 3.0 * std::sqrt(m.cov(i, i) / draws)) << "mean " << i;
    EXPECT_NEAR(var, m.cov(i, i), 3.0 * std::sqrt((m4 - var * var) / draws)) << "var " << i;
  }
}

TEST(Normality, WhitenedSamplesAreStandard) {
  Rng rng(11);
  CostBelief b(10, default_prior(Vector::Zero(2)));
  for (int e = 0; e < 10; ++e)
    for (const auto& c : observations(rng, 2, 10)) b.observe(e, c);
  std::vector<int> plan{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const QqReport r = normality_diagnostic(b, plan, 5000, rng);
  EXPECT_FALSE(r.jittered);
  ASSERT_EQ(r.coords.size(), 5u);
  EXPECT_LT(r.whitened_mean.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((r.whitened_cov - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(normality_diagnostic(b, {}, 5000, rng), Error);
}

TEST(Normality, LongerPlansAndMoreDataLookMoreNormal) {
  // Averaged over replicate reports so the comparison is not one noisy draw.
  auto dev = [](int length, int l, std::uint64_t seed) {
    Rng rng(seed);
    CostBelief b(length, default_prior(Vector::Zero(2)));
    for (int e = 0; e < length; ++e)
      for (const auto& c : observations(rng, 2, l)) b.observe(e, c);
    std::vector<int> plan(length);
    for (int e = 0; e < length; ++e) plan[e] = e;
    double s = 0.0;
    for (int r = 0; r < 3; ++r) s += normality_diagnostic(b, plan, 5000, rng).max_central_dev();
    return s / 3.0;
  };
  EXPECT_LT(dev(40, 10, 12), dev(10, 10, 12));
  EXPECT_LT(dev(20, 100, 13), dev(20, 10, 13));
}

TEST(CostBelief, CountsAndJsonRoundTrip) {
  NiwParams prior = default_prior(Vector{{0.5, 0.0}}, 2.0);
  prior.kappa = 0.0;
  CostBelief b(4, prior);
  EXPECT_FALSE(CostBelief::has_moments(b.params(0)));
  EXPECT_THROW(b.moments(0), Error);
  Rng rng(14);
  b.observe(2, rng.standard_normal(2));
  b.observe(2, rng.standard_normal(2));
  b.observe(0, rng.standard_normal(2));
  EXPECT_EQ(b.count(2), 2);
  EXPECT_EQ(b.count(1), 0);
  EXPECT_EQ(b.global_steps(), 3);
  long total = 0;
  for (int e = 0; e < b.num_edges(); ++e) total += b.count(e);
  EXPECT_EQ(total, b.global_steps());
  EXPECT_TRUE(CostBelief::has_moments(b.params(2)));

  const CostBelief r = CostBelief::from_json(nlohmann::json::parse(b.to_json().dump()));
  EXPECT_EQ(r.global_steps(), 3);
  for (int e = 0; e < 4; ++e) {
    EXPECT_EQ(r.count(e), b.count(e));
    EXPECT_EQ(r.params(e).lambda, b.params(e).lambda);
    EXPECT_EQ(r.params(e).Lambda, b.params(e).Lambda);
  }
  EXPECT_EQ(r.moments(2).cov, b.moments(2).cov);
  EXPECT_THROW(CostBelief::from_json(nlohmann::json{{"schema", "x"}}), Error);
}
