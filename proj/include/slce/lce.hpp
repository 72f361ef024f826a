#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace slce {

struct LceConfig {
  int embedding_dim = 5;
  double learning_rate = 0.002;
  // Training stops once |cost_t - cost_{t-1}| <= convergence_tol.
  double convergence_tol = 1e-6;
  std::uint64_t max_iterations = 50000;
  std::uint64_t init_seed = 0;
  // Entries of A start as N(0, (init_scale / sqrt(d))^2).
  double init_scale = 1.0;
};

// Linear centroid-encoder: the rank-k map A A^T that sends each sample
// towards its class centroid.
struct LceModel {
  Eigen::MatrixXd A;  // d x k
  LceConfig config;
  // cost_trace[0] is the cost at initialization; entry t > 0 is the cost
  // after the t-th Adam update.
  std::vector<double> cost_trace;
  bool converged = false;
  std::uint64_t iterations_run = 0;

  int embedding_dim() const { return static_cast<int>(A.cols()); }
};

// 1/2 ||Ctilde - A A^T X||_F^2
double lce_cost(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& Ctilde);

// A A^T X X^T A + X X^T A A^T A - (Ctilde X^T + X Ctilde^T) A, evaluated
// without forming any d x d product.
Eigen::MatrixXd lce_gradient(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& Ctilde);

// Seeded Gaussian initialization used by fit_lce.
Eigen::MatrixXd initial_encoder(Eigen::Index d, const LceConfig& cfg);

// Full-batch Adam on lce_gradient until the cost change falls below the
// tolerance or max_iterations is reached (converged = false). Throws
// NumericalError naming the iteration if the cost stops being finite.
LceModel fit_lce(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Ctilde,
                 const LceConfig& cfg);

namespace detail {
// Shared reconstruction term 1/2 ||Ctilde - A (A^T input)||_F^2. Both the
// encoder and gated costs go through here so they agree bit for bit.
double reconstruction_cost(const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& input,
                           const Eigen::MatrixXd& Ctilde);
void check_shapes(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                  const Eigen::MatrixXd& Ctilde);
}  // namespace detail

}  // namespace slce
