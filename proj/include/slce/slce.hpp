#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "slce/lce.hpp"

namespace slce {

struct SlceConfig {
  LceConfig lce;
  double lambda = 0.1;
  int warmup_iterations = 10;
  int penalty_iterations = 2000;
  double learning_rate = 0.002;

  void validate() const;
};

// Sparse linear centroid-encoder: a frozen encoder A plus a diagonal gate b
// applied to the input features.
struct SlceModel {
  LceModel encoder;  // step one; A is never touched afterwards
  Eigen::VectorXd b;
  double lambda = 0.0;
  int warmup_iterations = 0;
  int penalty_iterations = 0;
  double learning_rate = 0.0;
  // One entry per gate iteration: the cost after that update, including the
  // penalty active during it (zero for warm-up iterations).
  std::vector<double> cost_trace;
  std::uint64_t seed = 0;

  const Eigen::MatrixXd& A() const { return encoder.A; }
};

// 1/2 ||Ctilde - A A^T diag(b) X||_F^2 + lambda ||b||_1
double slce_cost(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                 const Eigen::MatrixXd& X, const Eigen::MatrixXd& Ctilde,
                 double lambda);

// Gradient of the smooth term with respect to b plus lambda * sign(b),
// where sign(0) = 0.
Eigen::VectorXd slce_gate_gradient(const Eigen::MatrixXd& A,
                                   const Eigen::VectorXd& b,
                                   const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& Ctilde,
                                   double lambda);

// Step two only: b starts at all-ones, warm-up iterations run with
// lambda = 0, then penalty iterations with the l1 subgradient. Fresh Adam
// state; A is copied, never updated.
SlceModel fit_gates(const LceModel& encoder, const Eigen::MatrixXd& X,
                    const Eigen::MatrixXd& Ctilde, const SlceConfig& cfg);

// Both steps: fit_lce with the gate at identity, then fit_gates.
SlceModel fit_slce(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Ctilde,
                   const SlceConfig& cfg);

}  // namespace slce
