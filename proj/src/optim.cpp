#include "slce/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "slce/error.hpp"

namespace slce {

AdamState AdamState::fresh(Eigen::Index size, const AdamConfig& config) {
  if (!(config.learning_rate > 0.0) || !(config.epsilon > 0.0) ||
      !(config.beta1 > 0.0 && config.beta1 < 1.0) ||
      !(config.beta2 > 0.0 && config.beta2 < 1.0)) {
    throw std::invalid_argument("invalid Adam hyperparameters");
  }
  AdamState s;
  s.config = config;
  s.first_moment = Eigen::VectorXd::Zero(size);
  s.second_moment = Eigen::VectorXd::Zero(size);
  return s;
}

void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> params,
               const Eigen::Ref<const Eigen::VectorXd>& gradient) {
  const auto n = params.size();
  if (gradient.size() != n || state.first_moment.size() != n ||
      state.second_moment.size() != n) {
    throw std::invalid_argument("Adam: parameter/gradient/moment lengths differ");
  }
  if (!gradient.allFinite()) {
    throw std::invalid_argument("Adam: non-finite gradient entry");
  }
  const auto& c = state.config;
  ++state.step_count;
  state.first_moment = c.beta1 * state.first_moment + (1.0 - c.beta1) * gradient;
  state.second_moment =
      c.beta2 * state.second_moment +
      (1.0 - c.beta2) * gradient.cwiseProduct(gradient);
  const auto t = static_cast<double>(state.step_count);
  const double m_corr = 1.0 - std::pow(c.beta1, t);
  const double v_corr = 1.0 - std::pow(c.beta2, t);
  params.array() -= c.learning_rate * (state.first_moment.array() / m_corr) /
                    ((state.second_moment.array() / v_corr).sqrt() + c.epsilon);
}

void adam_step(AdamState& state, Eigen::MatrixXd& params,
               const Eigen::MatrixXd& gradient) {
  if (gradient.rows() != params.rows() || gradient.cols() != params.cols()) {
    throw std::invalid_argument("Adam: gradient shape differs from parameters");
  }
  Eigen::Map<Eigen::VectorXd> flat(params.data(), params.size());
  Eigen::Map<const Eigen::VectorXd> g(gradient.data(), gradient.size());
  adam_step(state, flat, g);
}

Eigen::VectorXd finite_diff_gradient(const CostFunction& cost,
                                     const Eigen::VectorXd& params, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  Eigen::VectorXd probe = params;
  Eigen::VectorXd grad(params.size());
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    probe(i) = params(i) + h;
    const double up = cost(probe);
    probe(i) = params(i) - h;
    const double down = cost(probe);
    probe(i) = params(i);
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericalError("non-finite cost while differencing coordinate " +
                           std::to_string(i));
    }
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace slce
