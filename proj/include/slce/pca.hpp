#pragma once

#include <Eigen/Dense>

namespace slce {

// Principal axes fitted on one partition. Components are ordered by
// descending explained variance; each is signed so that its largest-magnitude
// loading is positive.
struct PcaModel {
  Eigen::VectorXd mean;                // d
  Eigen::MatrixXd components;          // d x c, orthonormal columns
  Eigen::VectorXd explained_variance;  // c, sample variance along each axis
  int requested_components = 0;
  bool rank_deficient = false;  // fewer than requested components returned

  Eigen::MatrixXd project(const Eigen::MatrixXd& features) const;  // c x n
  Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& coords) const;  // d x n
};

// Throws std::invalid_argument unless 1 <= n_components <= min(d, n).
PcaModel fit_pca(const Eigen::MatrixXd& train_features, int n_components);

struct PcaEmbedding {
  PcaModel model;
  Eigen::MatrixXd train_coords;  // c x n_train
  Eigen::MatrixXd test_coords;   // c x n_test
};

// Fits on the training samples only and projects both partitions.
PcaEmbedding pca_embed(const Eigen::MatrixXd& train_features,
                       const Eigen::MatrixXd& test_features,
                       int n_components = 3);

}  // namespace slce
