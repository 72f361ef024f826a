#include "slce/slce.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "slce/error.hpp"
#include "slce/optim.hpp"

namespace slce {

void SlceConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be non-negative");
  }
  if (warmup_iterations < 0 || penalty_iterations < 0) {
    throw std::invalid_argument("iteration counts must be non-negative");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
}

namespace {

void check_gate(const Eigen::VectorXd& b, const Eigen::MatrixXd& X) {
  if (b.size() != X.rows()) {
    throw std::invalid_argument("gate length " + std::to_string(b.size()) +
                                " does not match feature count " +
                                std::to_string(X.rows()));
  }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Cost and gate gradient from one pass. AtA and AtC are loop invariants.
struct GateEvaluator {
  const Eigen::MatrixXd& A;
  const Eigen::MatrixXd& X;
  const Eigen::MatrixXd& Ctilde;
  Eigen::MatrixXd AtA;
  Eigen::MatrixXd AtC;

  GateEvaluator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                const Eigen::MatrixXd& c)
      : A(a), X(x), Ctilde(c), AtA(a.transpose() * a),
        AtC(a.transpose() * c) {}

  // Smooth-part gradient: g_j = sum_i [A A^T R]_ji X_ji with
  // R = A A^T diag(b) X - Ctilde.
  Eigen::VectorXd smooth_gradient(const Eigen::VectorXd& b) const {
    const Eigen::MatrixXd code =
        (A.array().colwise() * b.array()).matrix().transpose() * X;  // k x n
    const Eigen::MatrixXd AtR = AtA * code - AtC;                     // k x n
    return (A.array() * (X * AtR.transpose()).array()).rowwise().sum();
  }

  double smooth_cost(const Eigen::VectorXd& b) const {
    return detail::reconstruction_cost(A, b.asDiagonal() * X, Ctilde);
  }
};

}  // namespace

double slce_cost(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                 const Eigen::MatrixXd& X, const Eigen::MatrixXd& Ctilde,
                 double lambda) {
  detail::check_shapes(A, X, Ctilde);
  check_gate(b, X);
  const Eigen::MatrixXd gated = b.asDiagonal() * X;
  return detail::reconstruction_cost(A, gated, Ctilde) +
         lambda * b.lpNorm<1>();
}

Eigen::VectorXd slce_gate_gradient(const Eigen::MatrixXd& A,
                                   const Eigen::VectorXd& b,
                                   const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& Ctilde,
                                   double lambda) {
  detail::check_shapes(A, X, Ctilde);
  check_gate(b, X);
  const Eigen::MatrixXd gated = b.asDiagonal() * X;
  const Eigen::MatrixXd residual = A * (A.transpose() * gated) - Ctilde;
  const Eigen::MatrixXd back = A * (A.transpose() * residual);  // d x n
  Eigen::VectorXd g = back.cwiseProduct(X).rowwise().sum();
  if (lambda != 0.0) g += lambda * b.unaryExpr(&sign);
  return g;
}

SlceModel fit_gates(const LceModel& encoder, const Eigen::MatrixXd& X,
                    const Eigen::MatrixXd& Ctilde, const SlceConfig& cfg) {
  cfg.validate();
  detail::check_shapes(encoder.A, X, Ctilde);

  SlceModel model;
  model.encoder = encoder;
  model.lambda = cfg.lambda;
  model.warmup_iterations = cfg.warmup_iterations;
  model.penalty_iterations = cfg.penalty_iterations;
  model.learning_rate = cfg.learning_rate;
  model.seed = encoder.config.init_seed;
  model.b = Eigen::VectorXd::Ones(X.rows());

  AdamConfig adam_cfg;
  adam_cfg.learning_rate = cfg.learning_rate;
  auto adam = AdamState::fresh(model.b.size(), adam_cfg);
  const GateEvaluator eval(model.encoder.A, X, Ctilde);

  const int total = cfg.warmup_iterations + cfg.penalty_iterations;
  model.cost_trace.reserve(static_cast<std::size_t>(total));
  for (int it = 0; it < total; ++it) {
    const double lambda = it < cfg.warmup_iterations ? 0.0 : cfg.lambda;
    Eigen::VectorXd grad = eval.smooth_gradient(model.b);
    if (lambda != 0.0) grad += lambda * model.b.unaryExpr(&sign);
    if (!grad.allFinite()) {
      throw NumericalError("non-finite gate gradient at iteration " +
                           std::to_string(it + 1));
    }
    adam_step(adam, model.b, grad);
    const double cost =
        eval.smooth_cost(model.b) + lambda * model.b.lpNorm<1>();
    if (!std::isfinite(cost)) {
      throw NumericalError("non-finite gate cost at iteration " +
                           std::to_string(it + 1));
    }
    model.cost_trace.push_back(cost);
  }
  return model;
}

SlceModel fit_slce(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Ctilde,
                   const SlceConfig& cfg) {
  cfg.validate();
  return fit_gates(fit_lce(X, Ctilde, cfg.lce), X, Ctilde, cfg);
}

}  // namespace slce
