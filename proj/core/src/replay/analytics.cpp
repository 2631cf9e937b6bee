#include "least/replay/analytics.hpp"

#include <stdexcept>

#include "least/errors.hpp"

namespace least::replay {

Quadrant classify(double q, double loss, const QuadrantSplits& splits) {
  const bool high_q = !(q < splits.q_split);
  const bool high_loss = !(loss < splits.loss_split);
  return static_cast<Quadrant>((high_q ? 2 : 0) + (high_loss ? 1 : 0));
}

QuadrantSplits mean_splits(const agent::BatchProbe& probe) {
  if (probe.q_hat.size() == 0) throw std::invalid_argument("mean_splits of an empty probe");
  return {probe.q_hat.mean(), probe.td_error_mag.mean()};
}

QuadrantStats quadrant_fractions(const agent::BatchProbe& probe, const QuadrantSplits& splits) {
  const Eigen::Index n = probe.q_hat.size();
  if (n == 0) throw std::invalid_argument("quadrant statistics of an empty probe");
  if (probe.td_error_mag.size() != n) throw DimensionError("probe vectors differ in length");
  std::array<Eigen::Index, 4> counts{};
  for (Eigen::Index i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(classify(probe.q_hat[i], probe.td_error_mag[i], splits))] += 1;
  }
  QuadrantStats out;
  out.q_split = splits.q_split;
  out.loss_split = splits.loss_split;
  for (std::size_t k = 0; k < 4; ++k) out.fractions[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
  return out;
}

QuadrantStats quadrant_stats(const agent::TransitionBatch& batch, const agent::Td3Agent& agent,
                             const QuadrantSplits& splits) {
  return quadrant_fractions(agent.probe_batch(batch), splits);
}

QuadrantStats quadrant_stats(const ReplayBuffer& buffer, const agent::Td3Agent& agent,
                             const QuadrantSplits& splits) {
  if (buffer.empty()) throw std::invalid_argument("quadrant statistics of an empty buffer");
  return quadrant_stats(buffer.all(), agent, splits);
}

double fau(std::span<const double> activations) {
  if (activations.empty()) throw std::invalid_argument("fau of an empty activation list");
  std::size_t active = 0;
  for (double a : activations) active += a > 0.0 ? 1 : 0;
  return static_cast<double>(active) / static_cast<double>(activations.size());
}

double network_fau(const nn::Mlp& net, const Eigen::MatrixXd& inputs) {
  if (inputs.cols() == 0) throw std::invalid_argument("fau needs at least one probe input");
  std::size_t active = 0;
  std::size_t total = 0;
  for (const auto& layer : net.hidden_activations(inputs)) {
    active += static_cast<std::size_t>((layer.array() > 0.0).count());
    total += static_cast<std::size_t>(layer.size());
  }
  if (total == 0) throw std::invalid_argument("network has no hidden units");
  return static_cast<double>(active) / static_cast<double>(total);
}

}  // namespace least::replay
