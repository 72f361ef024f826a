#include "slce/pca.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

namespace slce {

Eigen::MatrixXd PcaModel::project(const Eigen::MatrixXd& features) const {
  if (features.rows() != mean.size()) {
    throw std::invalid_argument("PCA projection dimension mismatch");
  }
  return components.transpose() * (features.colwise() - mean);
}

Eigen::MatrixXd PcaModel::reconstruct(const Eigen::MatrixXd& coords) const {
  return (components * coords).colwise() + mean;
}

PcaModel fit_pca(const Eigen::MatrixXd& train_features, int n_components) {
  const auto d = train_features.rows();
  const auto n = train_features.cols();
  if (n_components < 1 || n_components > std::min(d, n)) {
    throw std::invalid_argument("n_components must lie in 1..min(d, n_train) = " +
                                std::to_string(std::min(d, n)));
  }
  PcaModel model;
  model.requested_components = n_components;
  model.mean = train_features.rowwise().mean();
  const Eigen::MatrixXd centered = train_features.colwise() - model.mean;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = (sv.size() > 0 ? sv(0) : 0.0) *
                     static_cast<double>(std::max(d, n)) *
                     std::numeric_limits<double>::epsilon();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;

  const Eigen::Index keep = std::min<Eigen::Index>(n_components, rank);
  model.rank_deficient = keep < n_components;
  model.components = svd.matrixU().leftCols(keep);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  model.explained_variance = sv.head(keep).array().square() / denom;

  for (Eigen::Index c = 0; c < keep; ++c) {
    Eigen::Index arg = 0;
    model.components.col(c).cwiseAbs().maxCoeff(&arg);
    if (model.components(arg, c) < 0.0) model.components.col(c) *= -1.0;
  }
  return model;
}

PcaEmbedding pca_embed(const Eigen::MatrixXd& train_features,
                       const Eigen::MatrixXd& test_features, int n_components) {
  PcaEmbedding out;
  out.model = fit_pca(train_features, n_components);
  out.train_coords = out.model.project(train_features);
  out.test_coords = out.model.project(test_features);
  return out;
}

}  // namespace slce
