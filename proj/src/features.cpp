#include "slce/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace slce {

FeatureReport rank_features(const Eigen::VectorXd& gates) {
  FeatureReport r;
  const auto d = static_cast<int>(gates.size());
  r.ranked_indices.resize(static_cast<std::size_t>(d));
  std::iota(r.ranked_indices.begin(), r.ranked_indices.end(), 0);
  std::stable_sort(r.ranked_indices.begin(), r.ranked_indices.end(),
                   [&](int a, int b) {
                     return std::abs(gates(a)) > std::abs(gates(b));
                   });
  r.ranked_weights.reserve(r.ranked_indices.size());
  for (int i : r.ranked_indices) r.ranked_weights.push_back(std::abs(gates(i)));
  r.cutoff_index = r.ranked_indices.size();
  r.selected = r.ranked_indices;
  return r;
}

FeatureReport rank_features(const SlceModel& model) {
  return rank_features(model.b);
}

std::vector<double> FeatureReport::ratio_curve(double epsilon) const {
  std::vector<double> ratios;
  for (std::size_t p = 1; p < ranked_weights.size(); ++p) {
    ratios.push_back(ranked_weights[p - 1] / (ranked_weights[p] + epsilon));
  }
  return ratios;
}

FeatureReport cutoff(FeatureReport report, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto d = report.ranked_weights.size();
  if (d < 2) {
    report.cutoff_index = d;
    report.cutoff_ratio = 0.0;
    report.cutoff_defined = false;
    report.selected = report.ranked_indices;
    return report;
  }
  const auto ratios = report.ratio_curve(epsilon);
  // max_element returns the first maximum, i.e. the sparsest cut.
  const auto best = std::max_element(ratios.begin(), ratios.end());
  report.cutoff_index = static_cast<std::size_t>(best - ratios.begin()) + 1;
  report.cutoff_ratio = *best;
  report.cutoff_defined = true;
  report.selected.assign(report.ranked_indices.begin(),
                         report.ranked_indices.begin() +
                             static_cast<std::ptrdiff_t>(report.cutoff_index));
  return report;
}

std::vector<int> top_k(const FeatureReport& report, std::size_t k) {
  if (k == 0 || k > report.ranked_indices.size()) {
    throw std::invalid_argument("top-k of " + std::to_string(k) +
                                " requested from " +
                                std::to_string(report.ranked_indices.size()) +
                                " features");
  }
  return {report.ranked_indices.begin(),
          report.ranked_indices.begin() + static_cast<std::ptrdiff_t>(k)};
}

StabilityReport stability(const std::vector<std::vector<int>>& selections) {
  if (selections.size() < 2) {
    throw std::invalid_argument("stability requires at least 2 runs");
  }
  StabilityReport r;
  std::set<int> all;
  for (const auto& s : selections) {
    if (s.empty()) throw std::invalid_argument("empty feature set in stability input");
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    r.per_run_counts.push_back(sorted.size());
    all.insert(sorted.begin(), sorted.end());
    r.run_selections.push_back(std::move(sorted));
  }
  std::vector<int> common = r.run_selections.front();
  for (std::size_t i = 1; i < r.run_selections.size(); ++i) {
    std::vector<int> next;
    std::set_intersection(common.begin(), common.end(),
                          r.run_selections[i].begin(),
                          r.run_selections[i].end(), std::back_inserter(next));
    common = std::move(next);
  }
  r.intersection = std::move(common);
  r.intersection_size = r.intersection.size();
  r.union_size = all.size();
  r.jaccard = static_cast<double>(r.intersection_size) /
              static_cast<double>(r.union_size);
  return r;
}

}  // namespace slce
