#include "slce/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "slce/error.hpp"
#include "slce/parallel.hpp"

namespace slce {

namespace {

constexpr double kTieTolerance = 1e-12;

void summarize(const std::vector<double>& values, double& mean, double& sd) {
  const auto n = static_cast<double>(values.size());
  mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

std::pair<Dataset, Dataset> maybe_standardize(Dataset train, Dataset test,
                                              bool enabled) {
  if (enabled) {
    const auto z = Standardizer::fit(train.features);
    train.features = z.apply(train.features);
    test.features = z.apply(test.features);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace

Selection fit_selection(const Dataset& train, const SlceConfig& cfg) {
  const auto target = build_centroid_target(train);
  Selection s;
  s.model = fit_slce(train.features, target.targets, cfg);
  s.report = cutoff(rank_features(s.model));
  return s;
}

AccuracyTable evaluate_protocol(const Dataset& ds, const SlceConfig& slce_cfg,
                                const EvalProtocol& protocol) {
  if (protocol.n_repeats < 1) throw InputError("repeats must be at least 1");
  for (auto k : protocol.top_k_values) {
    if (k == 0 || k > static_cast<std::size_t>(ds.num_features())) {
      throw InputError("top-k value " + std::to_string(k) +
                       " outside 1.." + std::to_string(ds.num_features()));
    }
  }
  ds.validate();
  slce_cfg.validate();

  const auto repeats = static_cast<std::size_t>(protocol.n_repeats);
  const auto n_k = protocol.top_k_values.size();
  // scores[r][i]: i < n_k for top-K rows, i == n_k for all features.
  std::vector<std::vector<double>> scores(repeats);
  std::vector<std::size_t> cut_counts(repeats);

  parallel_for(repeats, protocol.jobs, [&](std::size_t r) {
    const std::uint64_t seed = protocol.base_seed + r;
    SplitSpec split = protocol.split;
    split.seed = seed;
    auto raw = slce::split(ds, split);
    const auto parts = maybe_standardize(std::move(raw.first),
                                         std::move(raw.second),
                                         protocol.standardize);
    const Dataset& train = parts.first;
    const Dataset& test = parts.second;
    SlceConfig cfg = slce_cfg;
    cfg.lce.init_seed = seed;
    const auto sel = fit_selection(train, cfg);
    cut_counts[r] = sel.report.cutoff_index;

    MlpConfig mlp = protocol.mlp;
    mlp.seed = seed;
    auto score = [&](const std::vector<int>& features) {
      const auto tr = train.select_features(features);
      const auto te = test.select_features(features);
      const auto net = train_mlp(tr, mlp);
      return accuracy(net.predict(te.features), te.labels);
    };
    std::vector<double> row;
    for (auto k : protocol.top_k_values) {
      auto picked = top_k(sel.report, k);
      std::sort(picked.begin(), picked.end());
      row.push_back(score(picked));
    }
    std::vector<int> all(static_cast<std::size_t>(ds.num_features()));
    std::iota(all.begin(), all.end(), 0);
    row.push_back(score(all));
    scores[r] = std::move(row);
  });

  AccuracyTable table;
  table.cutoff_counts = cut_counts;
  for (std::size_t r = 0; r < repeats; ++r) {
    table.repeat_seeds.push_back(protocol.base_seed + r);
  }
  for (std::size_t i = 0; i <= n_k; ++i) {
    AccuracyRow row;
    if (i < n_k) {
      row.k = protocol.top_k_values[i];
      row.name = "top-" + std::to_string(row.k);
    } else {
      row.name = "all";
    }
    for (std::size_t r = 0; r < repeats; ++r) row.per_repeat.push_back(scores[r][i]);
    summarize(row.per_repeat, row.mean, row.stddev);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<double> default_lambda_grid() {
  constexpr int kPoints = 8;
  constexpr double kLow = 0.04;
  constexpr double kHigh = 0.5;
  std::vector<double> grid;
  for (int i = 0; i < kPoints; ++i) {
    const double t = static_cast<double>(i) / (kPoints - 1);
    grid.push_back(kLow * std::pow(kHigh / kLow, t));
  }
  grid.back() = kHigh;
  return grid;
}

TuneResult tune_lambda(const Dataset& train, const TuneSpec& spec,
                       const SlceConfig& slce_cfg) {
  const auto& grid = spec.lambda_grid;
  if (grid.empty()) throw InputError("lambda grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
      throw InputError("lambda must be non-negative");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InputError("lambda grid must be strictly ascending");
    }
  }
  if (spec.n_folds < 2 || spec.n_repeats < 1) {
    throw InputError("tuning needs at least 2 folds and 1 repeat");
  }
  train.validate();

  const auto folds = static_cast<std::size_t>(spec.n_folds);
  const auto repeats = static_cast<std::size_t>(spec.n_repeats);
  // Fold assignments up front so a too-small class fails before any fitting.
  std::vector<std::vector<int>> fold_of;
  for (std::size_t r = 0; r < repeats; ++r) {
    fold_of.push_back(stratified_folds(train.labels, train.num_classes,
                                       spec.n_folds, spec.base_seed + r));
  }

  // cell = r * folds + f; f is the fold used for fitting.
  const std::size_t cells = repeats * folds;
  std::vector<std::vector<double>> acc(cells, std::vector<double>(grid.size()));
  std::vector<std::vector<std::size_t>> kept(cells,
                                             std::vector<std::size_t>(grid.size()));
  parallel_for(cells, spec.jobs, [&](std::size_t cell) {
    const std::size_t r = cell / folds;
    const int f = static_cast<int>(cell % folds);
    std::vector<int> fit_idx;
    std::vector<int> held_idx;
    for (std::size_t i = 0; i < train.labels.size(); ++i) {
      (fold_of[r][i] == f ? fit_idx : held_idx).push_back(static_cast<int>(i));
    }
    auto [fit, held] = maybe_standardize(train.select_samples(fit_idx),
                                         train.select_samples(held_idx),
                                         spec.standardize);
    const auto target = build_centroid_target(fit);
    LceConfig lce_cfg = slce_cfg.lce;
    lce_cfg.init_seed = spec.base_seed + r;
    const auto encoder = fit_lce(fit.features, target.targets, lce_cfg);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      SlceConfig cfg = slce_cfg;
      cfg.lce = lce_cfg;
      cfg.lambda = grid[g];
      const auto model = fit_gates(encoder, fit.features, target.targets, cfg);
      const auto report = cutoff(rank_features(model));
      const auto fit_sel = fit.select_features(report.selected);
      const auto held_sel = held.select_features(report.selected);
      acc[cell][g] = accuracy(nearest_centroid_predict(fit_sel, held_sel.features),
                              held_sel.labels);
      kept[cell][g] = report.cutoff_index;
    }
  });

  TuneResult result;
  double best = -1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    TuneRow row;
    row.lambda = grid[g];
    double kept_sum = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      row.scores.push_back(acc[c][g]);
      kept_sum += static_cast<double>(kept[c][g]);
    }
    summarize(row.scores, row.mean_accuracy, row.stddev);
    row.mean_selected = kept_sum / static_cast<double>(cells);
    // Means of equal score multisets can differ in the last bit when summed
    // in a different order; those count as ties.
    if (row.mean_accuracy >= best - kTieTolerance) {
      best = std::max(best, row.mean_accuracy);
      result.chosen_lambda = row.lambda;
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace slce
