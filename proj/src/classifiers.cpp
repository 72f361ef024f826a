#include "slce/classifiers.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "slce/error.hpp"
#include "slce/optim.hpp"

namespace slce {

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, double sd,
                         std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, sd);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

std::vector<int> column_argmax(const Eigen::MatrixXd& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    Eigen::Index best = 0;
    scores.col(j).maxCoeff(&best);
    out[static_cast<std::size_t>(j)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd MlpClassifier::logits(const Eigen::MatrixXd& features) const {
  if (features.rows() != hidden_weights.rows()) {
    throw std::invalid_argument("classifier input dimension mismatch");
  }
  const Eigen::MatrixXd hidden =
      ((hidden_weights.transpose() * features).colwise() + hidden_bias)
          .cwiseMax(0.0);
  return (output_weights.transpose() * hidden).colwise() + output_bias;
}

std::vector<int> MlpClassifier::predict(const Eigen::MatrixXd& features) const {
  return column_argmax(logits(features));
}

MlpClassifier train_mlp(const Dataset& train, const MlpConfig& cfg) {
  const std::set<int> present(train.labels.begin(), train.labels.end());
  if (present.size() < 2) {
    throw InputError("classifier training set holds a single class");
  }
  if (cfg.hidden_units < 1 || cfg.epochs < 0) {
    throw std::invalid_argument("invalid classifier configuration");
  }
  const Eigen::MatrixXd& X = train.features;
  const auto in = X.rows();
  const auto n = X.cols();
  const auto h = static_cast<Eigen::Index>(cfg.hidden_units);
  const auto m = static_cast<Eigen::Index>(train.num_classes);

  MlpClassifier net;
  net.config = cfg;
  std::mt19937_64 rng(cfg.seed);
  net.hidden_weights = gaussian(in, h, 1.0 / std::sqrt(static_cast<double>(in)), rng);
  net.hidden_bias = Eigen::VectorXd::Zero(h);
  net.output_weights = gaussian(h, m, 1.0 / std::sqrt(static_cast<double>(h)), rng);
  net.output_bias = Eigen::VectorXd::Zero(m);

  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(m, n);
  for (Eigen::Index i = 0; i < n; ++i) onehot(train.labels[i], i) = 1.0;

  AdamConfig adam_cfg;
  adam_cfg.learning_rate = cfg.learning_rate;
  auto s_w1 = AdamState::fresh(net.hidden_weights.size(), adam_cfg);
  auto s_b1 = AdamState::fresh(h, adam_cfg);
  auto s_w2 = AdamState::fresh(net.output_weights.size(), adam_cfg);
  auto s_b2 = AdamState::fresh(m, adam_cfg);
  const double inv_n = 1.0 / static_cast<double>(n);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Eigen::MatrixXd pre =
        (net.hidden_weights.transpose() * X).colwise() + net.hidden_bias;
    const Eigen::MatrixXd hidden = pre.cwiseMax(0.0);
    Eigen::MatrixXd scores =
        (net.output_weights.transpose() * hidden).colwise() + net.output_bias;
    // Column-wise softmax, shifted by the column max.
    scores.rowwise() -= scores.colwise().maxCoeff();
    Eigen::MatrixXd prob = scores.array().exp().matrix();
    prob.array().rowwise() /= prob.colwise().sum().array();

    const Eigen::MatrixXd d_scores = (prob - onehot) * inv_n;
    const Eigen::MatrixXd g_w2 = hidden * d_scores.transpose();
    const Eigen::VectorXd g_b2 = d_scores.rowwise().sum();
    const Eigen::MatrixXd d_hidden =
        ((net.output_weights * d_scores).array() * (pre.array() > 0.0).cast<double>())
            .matrix();
    const Eigen::MatrixXd g_w1 = X * d_hidden.transpose();
    const Eigen::VectorXd g_b1 = d_hidden.rowwise().sum();

    if (!g_w1.allFinite() || !g_w2.allFinite()) {
      throw NumericalError("non-finite classifier gradient at epoch " +
                           std::to_string(epoch + 1));
    }
    adam_step(s_w1, net.hidden_weights, g_w1);
    adam_step(s_b1, net.hidden_bias, g_b1);
    adam_step(s_w2, net.output_weights, g_w2);
    adam_step(s_b2, net.output_bias, g_b2);
  }
  net.trained = cfg.epochs > 0;
  return net;
}

std::vector<int> nearest_centroid_predict(const Dataset& train,
                                          const Eigen::MatrixXd& test_features) {
  if (test_features.rows() != train.features.rows()) {
    throw std::invalid_argument("test feature dimension mismatch");
  }
  const Eigen::MatrixXd centroids =
      class_centroids(train.features, train.labels, train.num_classes);
  const auto counts = train.class_counts();
  std::vector<int> out(static_cast<std::size_t>(test_features.cols()));
  for (Eigen::Index j = 0; j < test_features.cols(); ++j) {
    int best = -1;
    double best_dist = 0.0;
    for (Eigen::Index c = 0; c < centroids.cols(); ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;
      const double dist = (centroids.col(c) - test_features.col(j)).squaredNorm();
      if (best < 0 || dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(c);
      }
    }
    out[static_cast<std::size_t>(j)] = best;
  }
  return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw std::invalid_argument("prediction and label counts differ");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace slce
