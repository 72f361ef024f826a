#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "slce/features.hpp"
#include "slce/slce.hpp"

using namespace slce;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::vector<int> iota_vec(int lo, int hi) {
  std::vector<int> v(static_cast<std::size_t>(hi - lo));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

// Positive weights with a few random plateaus, so ties show up.
Eigen::VectorXd random_weights(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(2, 40);
  std::uniform_real_distribution<double> logw(-8.0, 1.0);
  std::bernoulli_distribution repeat(0.2);
  Eigen::VectorXd w(size(rng));
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    w(i) = (i > 0 && repeat(rng)) ? w(i - 1) : std::pow(10.0, logw(rng));
  }
  return w;
}

}  // namespace

TEST(RankFeatures, AbsoluteValueWithIndexTieBreak) {
  const auto r = rank_features(vec({0.5, -2.0, 0.5}));
  EXPECT_EQ(r.ranked_indices, (std::vector<int>{1, 0, 2}));
  EXPECT_EQ(r.ranked_weights, (std::vector<double>{2.0, 0.5, 0.5}));
}

TEST(RankFeatures, EqualWeightsKeepIdentityOrder) {
  EXPECT_EQ(rank_features(Eigen::VectorXd::Constant(6, 0.3)).ranked_indices, iota_vec(0, 6));
}

TEST(RankFeatures, WideDynamicRange) {
  EXPECT_EQ(rank_features(vec({1e-8, 3, 1e-4})).ranked_indices, (std::vector<int>{1, 2, 0}));
}

TEST(RankFeatures, ModelOverloadUsesGates) {
  SlceModel m;
  m.b = vec({0.1, -0.9, 0.4});
  EXPECT_EQ(rank_features(m).ranked_indices, (std::vector<int>{1, 2, 0}));
}

TEST(Cutoff, LargestRatioAfterThirdWeight) {
  const auto r = cutoff(rank_features(vec({10, 9, 8, 0.01, 0.005})));
  EXPECT_EQ(r.cutoff_index, 3u);
  EXPECT_TRUE(r.cutoff_defined);
  EXPECT_NEAR(r.cutoff_ratio, 8.0 / (0.01 + 1e-12), 1e-9);
  EXPECT_EQ(r.selected, (std::vector<int>{0, 1, 2}));
}

TEST(Cutoff, PlateauChoosesFirstPosition) {
  const auto r = cutoff(rank_features(Eigen::VectorXd::Constant(5, 2.0)));
  EXPECT_EQ(r.cutoff_index, 1u);
  EXPECT_EQ(r.selected, (std::vector<int>{0}));
}

TEST(Cutoff, SelectionFollowsRankOrder) {
  const auto r = cutoff(rank_features(vec({0.001, 5, 0.002, 4})));
  EXPECT_EQ(r.cutoff_index, 2u);
  EXPECT_EQ(r.selected, (std::vector<int>{1, 3}));
}

TEST(Cutoff, UndefinedForSingleFeature) {
  const auto r = cutoff(rank_features(vec({0.7})));
  EXPECT_FALSE(r.cutoff_defined);
  EXPECT_EQ(r.cutoff_index, 1u);
  EXPECT_EQ(r.selected, (std::vector<int>{0}));
}

TEST(Cutoff, ExactZeroTailStaysFinite) {
  const auto r = cutoff(rank_features(vec({3, 2, 0, 0})));
  EXPECT_EQ(r.cutoff_index, 2u);
  EXPECT_TRUE(std::isfinite(r.cutoff_ratio));
}

TEST(Cutoff, RatioCurveMatchesDefinition) {
  const auto r = rank_features(vec({4, 2, 1, 0.5}));
  const auto curve = r.ratio_curve();
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_NEAR(curve[0], 2.0, 1e-9);
  EXPECT_NEAR(curve[2], 2.0, 1e-9);
  // All ratios tie at 2, so the earliest position wins.
  EXPECT_EQ(cutoff(r).cutoff_index, 1u);
}

TEST(TopK, FullAndSingle) {
  const auto r = rank_features(vec({0.2, -0.7, 0.1, 0.4}));
  EXPECT_EQ(top_k(r, 4), r.ranked_indices);
  EXPECT_EQ(top_k(r, 1), (std::vector<int>{1}));
  EXPECT_THROW(top_k(r, 5), std::invalid_argument);
  EXPECT_THROW(top_k(r, 0), std::invalid_argument);
}

TEST(Stability, IdenticalSetsGiveOne) {
  const std::vector<int> s{3, 1, 4, 7};
  const auto r = stability({s, s, s, s, s});
  EXPECT_DOUBLE_EQ(r.jaccard, 1.0);
  EXPECT_EQ(r.intersection_size, 4u);
  EXPECT_EQ(r.union_size, 4u);
  EXPECT_EQ(r.run_selections[0], (std::vector<int>{1, 3, 4, 7}));
}

TEST(Stability, DisjointSetsGiveZero) {
  const auto r = stability({{0, 1}, {2, 3}});
  EXPECT_DOUBLE_EQ(r.jaccard, 0.0);
  EXPECT_EQ(r.union_size, 4u);
}

TEST(Stability, PublishedRunSizesAndOverlap) {
  // Core of 876 shared features plus 21 extras (876..896) split so that no
  // extra is in every run. Run sizes 887, 884, 886, 889, 886.
  const std::vector<std::pair<int, int>> windows{{0, 11}, {11, 19}, {19, 29}, {0, 13}, {5, 15}};
  std::vector<std::vector<int>> runs;
  for (const auto& [lo, hi] : windows) {
    auto s = iota_vec(0, 876);
    for (int e = lo; e < hi; ++e) s.push_back(876 + e % 21);
    runs.push_back(s);
  }
  const auto rep = stability(runs);
  EXPECT_EQ(rep.per_run_counts, (std::vector<std::size_t>{887, 884, 886, 889, 886}));
  EXPECT_EQ(rep.intersection_size, 876u);
  EXPECT_EQ(rep.union_size, 897u);
  EXPECT_NEAR(rep.jaccard, 0.9766, 1e-4);
  EXPECT_NEAR(rep.jaccard, 876.0 / 897.0, 1e-15);
}

TEST(Stability, RejectsEmptyAndSingleRun) {
  EXPECT_THROW(stability({{1, 2}}), std::invalid_argument);
  EXPECT_THROW(stability({{1, 2}, {}}), std::invalid_argument);
}

TEST(FeatureProperty, CutoffPrefixAndScaleInvariance) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int t = 0; t < 100; ++t) {
    const auto w = random_weights(rng);
    const auto r = cutoff(rank_features(w));
    ASSERT_GE(r.cutoff_index, 1u);
    ASSERT_LE(r.cutoff_index, static_cast<std::size_t>(w.size()));
    for (std::size_t i = 1; i < r.ranked_weights.size(); ++i) {
      ASSERT_GE(r.ranked_weights[i - 1], r.ranked_weights[i]);
    }
    EXPECT_EQ(r.selected, std::vector<int>(r.ranked_indices.begin(),
                                           r.ranked_indices.begin() + static_cast<long>(r.cutoff_index)));
    for (std::size_t k = 1; k < static_cast<std::size_t>(w.size()); ++k) {
      const auto a = top_k(r, k);
      const auto b = top_k(r, k + 1);
      ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << t << " k=" << k;
    }
    const double alpha = scale(rng);
    const auto scaled = cutoff(rank_features(alpha * w), alpha * kDefaultCutoffEpsilon);
    EXPECT_EQ(scaled.cutoff_index, r.cutoff_index) << "trial " << t << " alpha " << alpha;
    EXPECT_EQ(scaled.ranked_indices, r.ranked_indices);
  }
}

TEST(FeatureProperty, RankingIsPermutationEquivariant) {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd b(15);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = n(rng);
    auto perm = iota_vec(0, 15);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::VectorXd pb(15);
    for (int i = 0; i < 15; ++i) pb(i) = b(perm[i]);
    const auto r = rank_features(b);
    const auto pr = rank_features(pb);
    for (std::size_t i = 0; i < 15; ++i) {
      EXPECT_EQ(perm[static_cast<std::size_t>(pr.ranked_indices[i])], r.ranked_indices[i]);
    }
  }
}

TEST(FeatureProperty, JaccardInvariantsAndStrictDecrease) {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> feat(0, 29), runs(2, 6), len(1, 12);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<int>> sel(static_cast<std::size_t>(runs(rng)));
    for (auto& s : sel) {
      std::set<int> u;
      const int m = len(rng);
      while (static_cast<int>(u.size()) < m) u.insert(feat(rng));
      s.assign(u.begin(), u.end());
    }
    const auto r = stability(sel);
    EXPECT_DOUBLE_EQ(r.jaccard, static_cast<double>(r.intersection_size) / r.union_size);
    EXPECT_LE(r.intersection_size, *std::min_element(r.per_run_counts.begin(), r.per_run_counts.end()));
    EXPECT_GE(r.union_size, *std::max_element(r.per_run_counts.begin(), r.per_run_counts.end()));

    // Identical copies score 1; a new element in one copy strictly lowers it.
    std::vector<std::vector<int>> same(sel.size(), sel[0]);
    EXPECT_DOUBLE_EQ(stability(same).jaccard, 1.0);
    same[1].push_back(100);
    EXPECT_LT(stability(same).jaccard, 1.0);
    auto grown = sel;
    grown[0].push_back(100 + t);
    if (r.jaccard > 0.0) {
      EXPECT_LT(stability(grown).jaccard, r.jaccard);
    } else {
      EXPECT_EQ(stability(grown).jaccard, 0.0);
    }
  }
}
