#pragma once

#include <vector>

#include <Eigen/Dense>

#include "slce/slce.hpp"

namespace slce {

inline constexpr double kDefaultCutoffEpsilon = 1e-12;

// Gate-magnitude ranking of the input features.
struct FeatureReport {
  std::vector<int> ranked_indices;     // by descending |b_j|, ties by index
  std::vector<double> ranked_weights;  // |b_j| in ranked order
  std::size_t cutoff_index = 0;        // number of retained features
  double cutoff_ratio = 0.0;
  bool cutoff_defined = false;  // false when d < 2 or no cut-off applied
  std::vector<int> selected;    // ranked_indices[0, cutoff_index)

  // Position p in 1..d-1 mapped to ranked_weights[p-1] / (ranked_weights[p] + eps).
  std::vector<double> ratio_curve(double epsilon = kDefaultCutoffEpsilon) const;
};

// Stable ranking; cutoff_index starts at d with every feature selected.
FeatureReport rank_features(const Eigen::VectorXd& gates);
FeatureReport rank_features(const SlceModel& model);

// Keeps the features before the largest consecutive weight ratio. Equal
// ratios resolve to the smallest position.
FeatureReport cutoff(FeatureReport report,
                     double epsilon = kDefaultCutoffEpsilon);

// First k ranked indices. Throws std::invalid_argument if k is 0 or > d.
std::vector<int> top_k(const FeatureReport& report, std::size_t k);

struct StabilityReport {
  std::vector<std::vector<int>> run_selections;  // each sorted ascending
  std::size_t intersection_size = 0;
  std::size_t union_size = 0;
  double jaccard = 0.0;
  std::vector<std::size_t> per_run_counts;
  std::vector<int> intersection;
};

// Intersection over union of all runs at once. Needs at least two
// non-empty selections.
StabilityReport stability(const std::vector<std::vector<int>>& selections);

}  // namespace slce
