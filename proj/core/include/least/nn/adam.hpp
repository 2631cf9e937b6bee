#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>

namespace least::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  std::int64_t step_count = 0;

  static AdamState zeros(std::size_t parameter_count, AdamConfig config);
};

/// One bias-corrected Adam update. Throws NonFiniteError (leaving params and
/// state untouched) when any gradient component is NaN or infinite, and
/// DimensionError on shape mismatch.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

}  // namespace least::nn
