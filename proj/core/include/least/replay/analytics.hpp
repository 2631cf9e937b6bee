#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>

#include "least/agent/td3_agent.hpp"
#include "least/nn/mlp.hpp"
#include "least/replay/replay_buffer.hpp"

namespace least::replay {

enum Quadrant : int {
  kLowQLowLoss = 0,
  kLowQHighLoss = 1,
  kHighQLowLoss = 2,
  kHighQHighLoss = 3,
};

struct QuadrantSplits {
  double q_split = 0.0;
  double loss_split = 0.0;
};

struct QuadrantStats {
  std::array<double, 4> fractions{};  // indexed by Quadrant
  double q_split = 0.0;
  double loss_split = 0.0;
};

/// "Low" means strictly below the split; values equal to it count as high.
Quadrant classify(double q, double loss, const QuadrantSplits& splits);

/// Means of the probe values, used as split points.
QuadrantSplits mean_splits(const agent::BatchProbe& probe);

/// Fractions of (q_hat, td_error_mag) pairs per quadrant. Throws
/// std::invalid_argument when the probe is empty.
QuadrantStats quadrant_fractions(const agent::BatchProbe& probe, const QuadrantSplits& splits);

/// Probes every transition in `batch` with the agent (min-critic value and
/// |TD error|) and classifies it against `splits`.
QuadrantStats quadrant_stats(const agent::TransitionBatch& batch, const agent::Td3Agent& agent,
                             const QuadrantSplits& splits);
QuadrantStats quadrant_stats(const ReplayBuffer& buffer, const agent::Td3Agent& agent,
                             const QuadrantSplits& splits);

/// Fraction of strictly positive entries. Throws std::invalid_argument on an
/// empty list.
double fau(std::span<const double> activations);

/// FAU over every hidden unit of `net` for every column of `inputs`.
double network_fau(const nn::Mlp& net, const Eigen::MatrixXd& inputs);

}  // namespace least::replay
