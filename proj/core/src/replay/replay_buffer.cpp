#include "least/replay/replay_buffer.hpp"

#include <stdexcept>
#include <string>

#include "least/errors.hpp"

namespace least::replay {

ReplayBuffer::ReplayBuffer(Eigen::Index capacity, int state_dim, int action_dim)
    : capacity_(capacity),
      states_(state_dim, capacity),
      actions_(action_dim, capacity),
      rewards_(capacity),
      next_states_(state_dim, capacity),
      terminals_(capacity) {
  if (capacity <= 0) throw std::invalid_argument("replay capacity must be positive");
  if (state_dim <= 0 || action_dim <= 0) throw std::invalid_argument("replay dimensions must be positive");
}

void ReplayBuffer::push(const agent::Transition& t) {
  push(t.state, t.action, t.reward, t.next_state, t.terminal);
}

void ReplayBuffer::push(const Eigen::VectorXd& state, const Eigen::VectorXd& action, double reward,
                        const Eigen::VectorXd& next_state, bool terminal) {
  if (state.size() != states_.rows() || next_state.size() != states_.rows() ||
      action.size() != actions_.rows()) {
    throw DimensionError("transition does not match replay buffer dimensions");
  }
  states_.col(head_) = state;
  actions_.col(head_) = action;
  rewards_[head_] = reward;
  next_states_.col(head_) = next_state;
  terminals_[head_] = terminal ? 1.0 : 0.0;
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
  ++pushed_;
}

Eigen::Index ReplayBuffer::physical(Eigen::Index logical) const {
  const Eigen::Index oldest = size_ < capacity_ ? 0 : head_;
  return (oldest + logical) % capacity_;
}

agent::Transition ReplayBuffer::at(Eigen::Index i) const {
  if (i < 0 || i >= size_) throw std::out_of_range("replay index " + std::to_string(i));
  const Eigen::Index p = physical(i);
  return {states_.col(p), actions_.col(p), rewards_[p], next_states_.col(p), terminals_[p] != 0.0};
}

agent::TransitionBatch ReplayBuffer::gather(const std::vector<Eigen::Index>& indices) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  agent::TransitionBatch b;
  b.states.resize(states_.rows(), n);
  b.actions.resize(actions_.rows(), n);
  b.rewards.resize(n);
  b.next_states.resize(states_.rows(), n);
  b.terminals.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = indices[static_cast<std::size_t>(k)];
    if (i < 0 || i >= size_) throw std::out_of_range("replay index " + std::to_string(i));
    const Eigen::Index p = physical(i);
    b.states.col(k) = states_.col(p);
    b.actions.col(k) = actions_.col(p);
    b.rewards[k] = rewards_[p];
    b.next_states.col(k) = next_states_.col(p);
    b.terminals[k] = terminals_[p];
  }
  return b;
}

agent::TransitionBatch ReplayBuffer::sample(Eigen::Index batch_size, std::mt19937_64& rng) const {
  if (batch_size <= 0) throw std::invalid_argument("batch size must be positive");
  if (size_ < batch_size) {
    throw std::invalid_argument("replay buffer holds " + std::to_string(size_) + " transitions, batch needs " +
                                std::to_string(batch_size));
  }
  std::uniform_int_distribution<Eigen::Index> pick(0, size_ - 1);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(batch_size));
  for (auto& i : idx) i = pick(rng);
  return gather(idx);
}

agent::TransitionBatch ReplayBuffer::all() const { return strided(1); }

agent::TransitionBatch ReplayBuffer::strided(Eigen::Index stride) const {
  if (stride <= 0) throw std::invalid_argument("stride must be positive");
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(size_ / stride + 1));
  for (Eigen::Index i = 0; i < size_; i += stride) idx.push_back(i);
  return gather(idx);
}

Eigen::MatrixXd ReplayBuffer::states() const {
  Eigen::MatrixXd out(states_.rows(), size_);
  for (Eigen::Index i = 0; i < size_; ++i) out.col(i) = states_.col(physical(i));
  return out;
}

}  // namespace least::replay
