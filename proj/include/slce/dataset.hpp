#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace slce {

// Labelled samples stored column-wise: features is d x n, one column per
// sample. Labels are dense in 0..num_classes-1.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;  // empty or length d
  std::vector<std::string> class_names;    // empty or length num_classes
  int num_classes = 0;

  Eigen::Index num_features() const { return features.rows(); }
  Eigen::Index num_samples() const { return features.cols(); }

  // Throws InputError if any invariant is violated.
  void validate() const;

  // Sample counts per class.
  std::vector<int> class_counts() const;

  // Columns (samples) in the given order, keeping class metadata.
  Dataset select_samples(const std::vector<int>& sample_indices) const;
  // Rows (features) in the given order.
  Dataset select_features(const std::vector<int>& feature_indices) const;
};

struct CentroidTarget {
  Eigen::MatrixXd targets;    // d x n, column i = centroid of class labels[i]
  Eigen::MatrixXd centroids;  // d x M
};

// Column i of the targets is the mean of all samples sharing label i.
CentroidTarget build_centroid_target(const Dataset& ds);

// Class means only (d x M).
Eigen::MatrixXd class_centroids(const Eigen::MatrixXd& features,
                                const std::vector<int>& labels,
                                int num_classes);

struct SplitSpec {
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
};

// Sorted index partition. Stratified mode takes round(fraction * count)
// samples of every class for training and requires at least one sample of
// each class on both sides.
SplitIndices split_indices(const Dataset& ds, const SplitSpec& spec);

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

// Stratified k-fold assignment; fold_of[i] in 0..folds-1. Every class must
// have at least `folds` samples.
std::vector<int> stratified_folds(const std::vector<int>& labels,
                                  int num_classes, int folds,
                                  std::uint64_t seed);

// Per-feature z-score, fitted on one partition and applied to others.
// Constant features get scale 1.
class Standardizer {
 public:
  static Standardizer fit(const Eigen::MatrixXd& features);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& features) const;
  Dataset apply(const Dataset& ds) const;

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& scale() const { return scale_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
};

// Selects the label column of a CSV file.
struct LabelColumn {
  enum class Kind { Last, Index, Name };
  Kind kind = Kind::Last;
  int index = -1;
  std::string name;

  // "last", a 0-based integer, or a header name.
  static LabelColumn parse(const std::string& text);
};

struct CsvOptions {
  LabelColumn label_column;
  // false: each row is a sample (label column selects a column).
  // true: each column is a sample (label column selects a row).
  bool transpose = false;
  // nullopt: a header is assumed when the first record has a non-numeric
  // feature cell.
  std::optional<bool> has_header;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);
Dataset parse_csv(const std::string& text, const CsvOptions& options);

}  // namespace slce
