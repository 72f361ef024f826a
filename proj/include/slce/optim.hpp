#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace slce {

struct AdamConfig {
  double learning_rate = 0.002;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment estimates for one flat parameter vector. Matrices are flattened in
// column-major order (Eigen's native layout).
struct AdamState {
  AdamConfig config;
  std::uint64_t step_count = 0;
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;

  static AdamState fresh(Eigen::Index size, const AdamConfig& config = {});
};

// One bias-corrected Adam update applied to params in place. Throws
// std::invalid_argument on a length mismatch or a non-finite gradient.
void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> params,
               const Eigen::Ref<const Eigen::VectorXd>& gradient);

// Matrix convenience overload; the flattening is column-major.
void adam_step(AdamState& state, Eigen::MatrixXd& params,
               const Eigen::MatrixXd& gradient);

using CostFunction = std::function<double(const Eigen::VectorXd&)>;

// Central differences (f(p + h e_i) - f(p - h e_i)) / 2h per coordinate.
Eigen::VectorXd finite_diff_gradient(const CostFunction& cost,
                                     const Eigen::VectorXd& params, double h);

}  // namespace slce
