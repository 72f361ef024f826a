#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "slce/dataset.hpp"

namespace slce {

struct MlpConfig {
  int hidden_units = 500;
  double learning_rate = 0.001;
  int epochs = 200;
  std::uint64_t seed = 0;
};

// One hidden ReLU layer followed by a softmax output, trained full batch.
struct MlpClassifier {
  Eigen::MatrixXd hidden_weights;  // input_dim x hidden
  Eigen::VectorXd hidden_bias;
  Eigen::MatrixXd output_weights;  // hidden x classes
  Eigen::VectorXd output_bias;
  MlpConfig config;
  bool trained = false;  // false when zero epochs were run

  // Class scores (classes x n) before the softmax.
  Eigen::MatrixXd logits(const Eigen::MatrixXd& features) const;
  std::vector<int> predict(const Eigen::MatrixXd& features) const;
};

// Minimizes mean softmax cross-entropy with Adam. Throws InputError when the
// training set holds a single class.
MlpClassifier train_mlp(const Dataset& train, const MlpConfig& cfg);

// Label of the closest training centroid (Euclidean); ties go to the
// smaller label.
std::vector<int> nearest_centroid_predict(const Dataset& train,
                                          const Eigen::MatrixXd& test_features);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

}  // namespace slce
