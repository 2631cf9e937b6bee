#include "least/nn/adam.hpp"

#include <cmath>

#include "least/errors.hpp"

namespace least::nn {

AdamState AdamState::zeros(std::size_t parameter_count, AdamConfig config) {
  const auto n = static_cast<Eigen::Index>(parameter_count);
  return AdamState{config, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0};
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  const auto n = static_cast<Eigen::Index>(params.size());
  if (static_cast<Eigen::Index>(grads.size()) != n || state.first_moment.size() != n ||
      state.second_moment.size() != n) {
    throw DimensionError("adam_step: parameter, gradient and moment sizes differ");
  }
  Eigen::Map<const Eigen::VectorXd> g(grads.data(), n);
  if (!g.allFinite()) {
    throw NonFiniteError("adam_step: non-finite gradient");
  }
  const AdamConfig& c = state.config;
  state.step_count += 1;
  state.first_moment = c.beta1 * state.first_moment + (1.0 - c.beta1) * g;
  state.second_moment = c.beta2 * state.second_moment + (1.0 - c.beta2) * g.cwiseProduct(g);
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  Eigen::Map<Eigen::VectorXd> p(params.data(), n);
  p.array() -= c.learning_rate * (state.first_moment.array() / correction1) /
               ((state.second_moment.array() / correction2).sqrt() + c.epsilon);
}

}  // namespace least::nn
