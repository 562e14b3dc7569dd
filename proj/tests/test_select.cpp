#include <gtest/gtest.h>

#include "moaif/select.hpp"

using namespace moaif;

namespace {

// A belief whose edges all carry the same data, so their per-edge moments agree.
CostBelief shared_belief(int edges, int l, std::uint64_t seed) {
  CostBelief b(edges, default_prior(Vector{{1.0, 1.0}}));
  Rng rng(seed);
  std::vector<Vector> data;
  for (int k = 0; k < l; ++k) data.push_back(Vector{{2.0, 1.0}} + 0.3 * rng.standard_normal(2));
  for (int e = 0; e < edges; ++e)
    for (const auto& c : data) b.observe(e, c);
  return b;
}

// Single replicate of term3 built only from the public belief operations.
double naive_term3_replicate(const CostBelief& b, const std::vector<int>& edges, Rng& rng) {
  const auto n = b.dim();
  VecMoments acc{Vector::Zero(vec_dim(n)), Matrix::Zero(vec_dim(n), vec_dim(n))};
  for (int e : edges) {
    const NiwParams& p = b.params(e);
    const Matrix f = Eigen::LLT<Matrix>(p.expected_cov()).matrixL();
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
    acc += param_moments(posterior_update(p, Vector(p.lambda + f * z)));
  }
  return mvn_entropy(acc);
}

Candidate candidate(std::vector<int> edges, Vector mean, const Matrix& cov) { return {std::move(edges), std::move(mean), cov}; }

}  // namespace

TEST(Term1, ZeroCovarianceAtPreferenceMean) {
  PreferenceDist pref{Vector{{3.0, -1.0}}, Matrix::Identity(2, 2)};
  EXPECT_NEAR(efe_term1(pref.mean, Matrix::Zero(2, 2), pref), std::log(2.0 * M_PI), 1e-12);
  EXPECT_NEAR(efe_term1(pref.mean, Matrix::Zero(2, 2), pref), 1.8379, 1e-4);
}

TEST(Term1, UnitCovarianceMatchesMonteCarlo) {
  PreferenceDist pref{Vector{{3.0, -1.0}}, Matrix::Identity(2, 2)};
  const double closed = efe_term1(pref.mean, Matrix::Identity(2, 2), pref);
  EXPECT_NEAR(closed, std::log(2.0 * M_PI) + 1.0, 1e-12);
  Rng rng(1);
  const int draws = 1000000;
  double s = 0, s2 = 0;
  for (int k = 0; k < draws; ++k) {
    const Vector c = pref.mean + rng.standard_normal(2);
    const double v = std::log(2.0 * M_PI) + 0.5 * (c - pref.mean).squaredNorm();
    s += v;
    s2 += v * v;
  }
  const double mean = s / draws, se = std::sqrt((s2 / draws - mean * mean) / draws);
  EXPECT_NEAR(mean, closed, 3.0 * se);
}

TEST(Term1, MonotoneAlongPreferenceEigendirections) {
  PreferenceDist pref{Vector{{90.0, 6.0}}, Matrix{{140.0, -2.0}, {-2.0, 70.0}}};
  Eigen::SelfAdjointEigenSolver<Matrix> es(pref.cov);
  const Matrix sigma{{4.0, 0.5}, {0.5, 2.0}};
  for (int k = 0; k < 2; ++k)
    for (double sign : {-1.0, 1.0}) {
      double prev = efe_term1(pref.mean, sigma, pref);
      for (int t = 1; t <= 200; ++t) {
        const double v = efe_term1(Vector(pref.mean + sign * 0.5 * t * es.eigenvectors().col(k)), sigma, pref);
        EXPECT_GT(v, prev);
        prev = v;
      }
    }
}

TEST(Term1, SingularPreferenceThrows) {
  PreferenceDist pref{Vector::Zero(2), Matrix::Zero(2, 2)};
  EXPECT_THROW(efe_term1(Vector::Zero(2), Matrix::Zero(2, 2), pref), NumericError);
  EXPECT_THROW(pref.validate(), NumericError);
}

TEST(Term2, LongerPlanHasLargerEntropy) {
  const CostBelief b = shared_belief(6, 5, 2);
  std::vector<int> plan;
  double prev = -std::numeric_limits<double>::infinity();
  for (int e = 0; e < 6; ++e) {
    plan.push_back(e);
    const double v = efe_term2(convolved_moments(b, plan));
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Term3, MatchesNaiveComposition) {
  Rng data(3);
  CostBelief b(4, default_prior(Vector{{1.0, 0.5}}));
  for (int e = 0; e < 4; ++e)
    for (int k = 0; k <= e; ++k) b.observe(e, Vector{{1.0 + e, 0.5}} + 0.2 * data.standard_normal(2));
  const std::vector<int> plan{0, 2, 2, 3, 1};
  Term3Estimator est(b, plan);
  Rng a(17), c(17);
  for (int r = 0; r < 20; ++r) {
    const double fast = est.replicate(a), slow = naive_term3_replicate(b, plan, c);
    EXPECT_NEAR(fast, slow, 1e-9 * std::max(1.0, std::abs(slow)));
  }
}

TEST(Term3, DeterministicForFixedSeed) {
  const CostBelief b = shared_belief(3, 4, 4);
  Rng a(9), c(9);
  EXPECT_EQ(efe_term3(b, {0, 1, 2}, 50, a), efe_term3(b, {0, 1, 2}, 50, c));
}

TEST(Term3, InformationGainVanishesWithMuchData) {
  const CostBelief few = shared_belief(1, 5, 5), many = shared_belief(1, 10000, 5);
  Rng rng(6);
  const double gain_few = efe_term2(convolved_moments(few, {0})) - efe_term3(few, {0}, 300, rng);
  const double gain_many = efe_term2(convolved_moments(many, {0})) - efe_term3(many, {0}, 300, rng);
  EXPECT_GT(gain_few, 0.0);
  EXPECT_GT(gain_many, 0.0);
  EXPECT_LT(gain_many, 5e-3);
  EXPECT_GT(gain_few, 100.0 * gain_many);
}

TEST(Term3, RejectsUndefinedMoments) {
  NiwParams prior = default_prior(Vector::Zero(2));
  prior.kappa = 0.0;
  CostBelief b(1, prior);
  Rng rng(1);
  EXPECT_THROW(efe_term3(b, {0}, 10, rng), Error);
  EXPECT_THROW(efe_term3(shared_belief(1, 2, 1), {}, 10, rng), Error);
}

TEST(Efe, TotalIsAssembledFromTerms) {
  const CostBelief b = shared_belief(3, 4, 7);
  PreferenceDist pref{Vector{{5.0, 3.0}}, Matrix{{4.0, 0.0}, {0.0, 2.0}}};
  const auto [mean, cov] = predicted_cost(b, {0, 1});
  Rng rng(8);
  const EfeBreakdown r = efe({{0, 1}, mean, cov}, b, pref, 20, rng);
  EXPECT_EQ(r.total, r.term1 - r.term2 + r.term3);
}

TEST(SelectAif, SingletonFront) {
  const CostBelief b = shared_belief(2, 3, 9);
  PreferenceDist pref{Vector{{100.0, -50.0}}, Matrix::Identity(2, 2)};
  const auto sel = select_aif({candidate({0}, Vector{{1.0, 1.0}}, Matrix::Identity(2, 2))}, b, pref, 10, 1);
  EXPECT_EQ(sel.index, 0);
  ASSERT_EQ(sel.scores.size(), 1u);
  EXPECT_THROW(select_aif({}, b, pref, 10, 1), Error);
}

TEST(SelectAif, EqualInformationPicksMahalanobisNearest) {
  // Both candidates traverse equivalent edges with equal predicted covariance,
  // so only term1's Mahalanobis distance separates them.
  const CostBelief b = shared_belief(2, 20, 10);
  PreferenceDist pref{Vector{{10.0, 10.0}}, Matrix{{9.0, 0.0}, {0.0, 1.0}}};
  const Matrix cov = 0.1 * Matrix::Identity(2, 2);
  // Euclidean-farther but Mahalanobis-nearer candidate sits at index 1.
  const std::vector<Candidate> front{candidate({0}, Vector{{10.0, 12.0}}, cov), candidate({1}, Vector{{14.0, 10.0}}, cov)};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sel = select_aif(front, b, pref, 200, seed);
    // Brute-force oracle: evaluate every candidate on its own stream.
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < front.size(); ++i) {
      Rng rng(derive_seed(seed, i));
      const double v = efe(front[i], b, pref, 200, rng).total;
      EXPECT_EQ(v, sel.scores[i].total);
      if (v < best_v) {
        best_v = v;
        best = static_cast<int>(i);
      }
    }
    EXPECT_EQ(sel.index, best);
    EXPECT_EQ(sel.index, 1);
  }
}

TEST(SelectAif, TinyPreferenceVarianceChoosesNearestMean) {
  const CostBelief b = shared_belief(5, 3, 11);
  const Matrix cov = Matrix::Identity(2, 2);
  const std::vector<Candidate> front{candidate({0, 1, 2}, Vector{{1.0, 9.0}}, cov), candidate({3}, Vector{{4.0, 4.0}}, cov),
                                     candidate({4, 0}, Vector{{9.0, 1.0}}, cov)};
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector target{{10.0 * rng.uniform(), 10.0 * rng.uniform()}};
    int nearest = 0;
    for (int i = 1; i < 3; ++i)
      if ((front[i].mean - target).norm() < (front[nearest].mean - target).norm()) nearest = i;
    const auto sel = select_aif(front, b, PreferenceDist::no_variance(target, 10.0), 30, derive_seed(99, trial));
    EXPECT_EQ(sel.index, nearest);
  }
}

TEST(Baselines, WeightsExampleAndNormalisation) {
  const std::vector<Vector> front{Vector{{1.0, 10.0}}, Vector{{10.0, 1.0}}};
  EXPECT_EQ(select_weights(front, Vector{{1.0, 0.0}}), 0);
  EXPECT_EQ(select_weights(front, Vector{{0.0, 3.0}}), 1);
  EXPECT_EQ(select_weights(front, Vector{{2.0, 6.0}}), select_weights(front, Vector{{0.25, 0.75}}));
  EXPECT_THROW(select_weights(front, Vector{{-1.0, 2.0}}), Error);
  EXPECT_THROW(select_weights(front, Vector{{0.0, 0.0}}), Error);
  EXPECT_THROW(select_weights({}, Vector{{1.0, 0.0}}), Error);
}

TEST(Baselines, TopsisTiesAndStrictCase) {
  EXPECT_EQ(select_topsis({Vector{{1.0, 10.0}}, Vector{{10.0, 1.0}}}), 0);
  // All three closeness coefficients are exactly 1/2 after min-max normalisation.
  const auto c = topsis_closeness({Vector{{0.0, 10.0}}, Vector{{5.0, 5.0}}, Vector{{10.0, 0.0}}});
  for (double v : c) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_EQ(select_topsis({Vector{{0.0, 10.0}}, Vector{{5.0, 5.0}}, Vector{{10.0, 0.0}}}), 0);
  // (4,4) normalises to (0.4,0.4): d+ = 0.566, d- = 0.849, closeness 0.6.
  const auto s = topsis_closeness({Vector{{0.0, 10.0}}, Vector{{4.0, 4.0}}, Vector{{10.0, 0.0}}});
  EXPECT_NEAR(s[1], 0.6, 1e-12);
  EXPECT_EQ(select_topsis({Vector{{0.0, 10.0}}, Vector{{4.0, 4.0}}, Vector{{10.0, 0.0}}}), 1);
}

TEST(Baselines, TopsisZeroRangeObjective) {
  const auto c = topsis_closeness({Vector{{1.0, 5.0}}, Vector{{3.0, 5.0}}});
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[1], 0.0);
  const auto same = topsis_closeness({Vector{{2.0, 2.0}}, Vector{{2.0, 2.0}}});
  EXPECT_DOUBLE_EQ(same[0], 0.5);
}

TEST(Baselines, UniformIsRoughlyUniform) {
  Rng rng(13);
  std::vector<int> hits(4, 0);
  const int draws = 40000;
  for (int k = 0; k < draws; ++k) ++hits[static_cast<std::size_t>(select_uniform(4, rng))];
  // Binomial sd is sqrt(40000 * 0.25 * 0.75) ~ 87.
  for (int h : hits) EXPECT_NEAR(h, draws / 4, 4 * 87);
  EXPECT_THROW(select_uniform(0, rng), Error);
}
