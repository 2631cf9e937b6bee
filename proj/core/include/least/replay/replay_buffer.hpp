#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "least/agent/transition.hpp"

namespace least::replay {

/// Fixed-capacity ring of transitions stored column-per-sample. Once full,
/// each push overwrites the oldest entry.
class ReplayBuffer {
 public:
  ReplayBuffer(Eigen::Index capacity, int state_dim, int action_dim);

  void push(const agent::Transition& t);
  void push(const Eigen::VectorXd& state, const Eigen::VectorXd& action, double reward,
            const Eigen::VectorXd& next_state, bool terminal);

  Eigen::Index size() const { return size_; }
  Eigen::Index capacity() const { return capacity_; }
  bool empty() const { return size_ == 0; }
  std::int64_t total_pushed() const { return pushed_; }

  /// i = 0 is the oldest stored transition.
  agent::Transition at(Eigen::Index i) const;

  /// Uniform with replacement. Throws std::invalid_argument when fewer than
  /// `batch_size` transitions are stored.
  agent::TransitionBatch sample(Eigen::Index batch_size, std::mt19937_64& rng) const;

  /// Gathers the given logical indices (0 = oldest).
  agent::TransitionBatch gather(const std::vector<Eigen::Index>& indices) const;

  /// Every stored transition, oldest first.
  agent::TransitionBatch all() const;

  /// Every `stride`-th stored transition, oldest first.
  agent::TransitionBatch strided(Eigen::Index stride) const;

  /// Stored states only, oldest first.
  Eigen::MatrixXd states() const;

 private:
  Eigen::Index physical(Eigen::Index logical) const;

  Eigen::Index capacity_;
  Eigen::MatrixXd states_;
  Eigen::MatrixXd actions_;
  Eigen::VectorXd rewards_;
  Eigen::MatrixXd next_states_;
  Eigen::VectorXd terminals_;
  Eigen::Index head_ = 0;  // next write slot
  Eigen::Index size_ = 0;
  std::int64_t pushed_ = 0;
};

}  // namespace least::replay
