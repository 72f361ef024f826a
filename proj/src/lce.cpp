#include "slce/lce.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "slce/error.hpp"
#include "slce/optim.hpp"

namespace slce {

namespace detail {

void check_shapes(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                  const Eigen::MatrixXd& Ctilde) {
  if (X.rows() != A.rows() || Ctilde.rows() != X.rows() ||
      Ctilde.cols() != X.cols()) {
    throw std::invalid_argument(
        "dimension mismatch: A is " + std::to_string(A.rows()) + "x" +
        std::to_string(A.cols()) + ", X is " + std::to_string(X.rows()) + "x" +
        std::to_string(X.cols()) + ", Ctilde is " +
        std::to_string(Ctilde.rows()) + "x" + std::to_string(Ctilde.cols()));
  }
}

double reconstruction_cost(const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& input,
                           const Eigen::MatrixXd& Ctilde) {
  const Eigen::MatrixXd code = A.transpose() * input;  // k x n
  return 0.5 * (Ctilde - A * code).squaredNorm();
}

}  // namespace detail

double lce_cost(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& Ctilde) {
  detail::check_shapes(A, X, Ctilde);
  const double c = detail::reconstruction_cost(A, X, Ctilde);
  if (!std::isfinite(c)) throw NumericalError("non-finite encoder cost");
  return c;
}

Eigen::MatrixXd lce_gradient(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& Ctilde) {
  detail::check_shapes(A, X, Ctilde);
  const Eigen::MatrixXd XtA = X.transpose() * A;       // n x k
  const Eigen::MatrixXd CtA = Ctilde.transpose() * A;  // n x k
  const Eigen::MatrixXd AtA = A.transpose() * A;       // k x k
  // A (A^T X)(X^T A) + X (X^T A)(A^T A) - Ctilde (X^T A) - X (Ctilde^T A)
  return A * (XtA.transpose() * XtA) + X * (XtA * AtA) - Ctilde * XtA -
         X * CtA;
}

Eigen::MatrixXd initial_encoder(Eigen::Index d, const LceConfig& cfg) {
  std::mt19937_64 rng(cfg.init_seed);
  std::normal_distribution<double> normal(
      0.0, cfg.init_scale / std::sqrt(static_cast<double>(d)));
  Eigen::MatrixXd A(d, cfg.embedding_dim);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = normal(rng);
  }
  return A;
}

LceModel fit_lce(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Ctilde,
                 const LceConfig& cfg) {
  if (cfg.embedding_dim < 1) {
    throw std::invalid_argument("embedding dimension must be positive");
  }
  if (cfg.embedding_dim > X.rows()) {
    throw std::invalid_argument("embedding dimension " +
                                std::to_string(cfg.embedding_dim) +
                                " exceeds feature count " +
                                std::to_string(X.rows()));
  }
  if (!(cfg.init_scale > 0.0)) {
    throw std::invalid_argument("init_scale must be positive");
  }
  if (!(cfg.convergence_tol >= 0.0)) {
    throw std::invalid_argument("convergence tolerance must be non-negative");
  }

  LceModel model;
  model.config = cfg;
  model.A = initial_encoder(X.rows(), cfg);
  detail::check_shapes(model.A, X, Ctilde);

  AdamConfig adam_cfg;
  adam_cfg.learning_rate = cfg.learning_rate;
  auto adam = AdamState::fresh(model.A.size(), adam_cfg);

  const double initial = detail::reconstruction_cost(model.A, X, Ctilde);
  if (!std::isfinite(initial)) {
    throw NumericalError("non-finite encoder cost at initialization");
  }
  model.cost_trace.push_back(initial);

  for (std::uint64_t it = 1; it <= cfg.max_iterations; ++it) {
    const Eigen::MatrixXd grad = lce_gradient(model.A, X, Ctilde);
    if (!grad.allFinite()) {
      throw NumericalError("non-finite encoder gradient at iteration " +
                           std::to_string(it));
    }
    adam_step(adam, model.A, grad);
    const double cost = detail::reconstruction_cost(model.A, X, Ctilde);
    if (!std::isfinite(cost)) {
      throw NumericalError("non-finite encoder cost at iteration " +
                           std::to_string(it));
    }
    const double previous = model.cost_trace.back();
    model.cost_trace.push_back(cost);
    model.iterations_run = it;
    if (std::abs(cost - previous) <= cfg.convergence_tol) {
      model.converged = true;
      break;
    }
  }
  return model;
}

}  // namespace slce
