#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slce/classifiers.hpp"
#include "slce/dataset.hpp"
#include "slce/features.hpp"
#include "slce/slce.hpp"

namespace slce {

// Trained selector on one partition: model, ranking and cut-off.
struct Selection {
  SlceModel model;
  FeatureReport report;  // cut-off applied
};

// Builds the centroid target for `train` and runs both training steps.
Selection fit_selection(const Dataset& train, const SlceConfig& cfg);

struct EvalProtocol {
  int n_repeats = 20;
  SplitSpec split{0.5, 0, true};  // split.seed is replaced per repeat
  std::vector<std::size_t> top_k_values{10, 50};
  std::uint64_t base_seed = 0;
  bool standardize = false;  // z-score with training-partition statistics
  MlpConfig mlp;             // mlp.seed is replaced per repeat
  int jobs = 1;
};

struct AccuracyRow {
  std::string name;   // "top-10", ..., "all"
  std::size_t k = 0;  // 0 for the all-features row
  std::vector<double> per_repeat;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one repeat
};

struct AccuracyTable {
  std::vector<AccuracyRow> rows;
  std::vector<std::uint64_t> repeat_seeds;
  std::vector<std::size_t> cutoff_counts;  // per repeat
};

// For every repeat r (seed = base_seed + r): stratified split, SLCE fit on
// the training part, a classifier per top-K set and one on all features,
// test accuracy. Selected features are fed to the classifier in ascending
// index order, so K = d reproduces the all-features row exactly.
AccuracyTable evaluate_protocol(const Dataset& ds, const SlceConfig& slce_cfg,
                                const EvalProtocol& protocol);

// Eight log-spaced values from 0.04 to 0.5.
std::vector<double> default_lambda_grid();

struct TuneSpec {
  std::vector<double> lambda_grid = default_lambda_grid();
  int n_folds = 2;
  int n_repeats = 10;
  std::uint64_t base_seed = 0;
  bool standardize = false;  // statistics from the fitting fold only
  int jobs = 1;
};

struct TuneRow {
  double lambda = 0.0;
  std::vector<double> scores;  // one per (repeat, held-out fold)
  double mean_accuracy = 0.0;
  double stddev = 0.0;
  double mean_selected = 0.0;  // average cut-off size
};

struct TuneResult {
  double chosen_lambda = 0.0;
  std::vector<TuneRow> rows;
};

// Repeated stratified k-fold: fit on one fold, keep the cut-off features,
// score nearest-centroid accuracy on the held-out fold. Highest mean wins,
// ties go to the larger lambda. The encoder is fitted once per fold and
// shared across the grid since it does not depend on lambda.
TuneResult tune_lambda(const Dataset& train, const TuneSpec& spec,
                       const SlceConfig& slce_cfg);

}  // namespace slce
