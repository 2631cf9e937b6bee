#pragma once

#include <Eigen/Dense>

#include <vector>

namespace least::agent {

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  // True only when the environment reached a real terminal. Time-limit
  // truncation and controller-issued stops keep bootstrapping.
  bool terminal = false;
};

// Column-per-sample batch, the layout the networks consume directly.
struct TransitionBatch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::VectorXd rewards;
  Eigen::MatrixXd next_states;
  Eigen::VectorXd terminals;  // 1.0 for terminal, 0.0 otherwise

  Eigen::Index size() const { return rewards.size(); }

  static TransitionBatch from_transitions(const std::vector<Transition>& transitions);
};

}  // namespace least::agent
