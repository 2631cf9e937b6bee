#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "least/agent/transition.hpp"
#include "least/nn/adam.hpp"
#include "least/nn/mlp.hpp"

namespace least::agent {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Td3Config {
  std::vector<int> hidden{64, 64};
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double discount = 0.95;
  double polyak_rate = 0.005;
  double policy_noise_std = 0.2;
  double policy_noise_clip = 0.5;
  int policy_delay = 2;
};

void to_json(nlohmann::json& j, const Td3Config& c);
void from_json(const nlohmann::json& j, Td3Config& c);

// Affine map from the actor's tanh range [-1, 1] onto the environment's
// action box, plus clipping to that box.
struct ActionScale {
  Vector low;
  Vector high;

  static ActionScale symmetric(int action_dim, double bound = 1.0);

  int dim() const { return static_cast<int>(low.size()); }
  Vector center() const { return 0.5 * (high + low); }
  Vector half_range() const { return 0.5 * (high - low); }
  Matrix to_env(const Matrix& squashed) const;
  Matrix clip(const Matrix& actions) const;
};

struct StepProbe {
  double q_hat = 0.0;         // min of both critics at (s, a)
  double td_error_mag = 0.0;  // |y - q_hat|
};

struct BatchProbe {
  Vector q_hat;
  Vector td_error_mag;
};

struct CriticLosses {
  double critic1 = 0.0;
  double critic2 = 0.0;
};

struct LossAndGradient {
  double loss = 0.0;
  Vector grad;
};

// Q(s, a) and dQ/da for a batch; lets the actor objective run against any
// differentiable critic, not only an Mlp.
struct CriticEvaluation {
  Vector q;
  Matrix dq_daction;
};
using CriticFn = std::function<CriticEvaluation(const Matrix& states, const Matrix& actions)>;

Matrix critic_input(const Matrix& states, const Matrix& actions);

/// Mean squared error of `critic` against fixed targets, with its gradient.
LossAndGradient critic_loss_and_gradient(const nn::Mlp& critic, const Matrix& states,
                                         const Matrix& actions, const Vector& targets);

/// The returned function references `critic`; keep it alive.
CriticFn mlp_critic(const nn::Mlp& critic);

/// -mean Q(s, actor(s)) and its gradient with respect to the actor parameters.
LossAndGradient actor_loss_and_gradient(const nn::Mlp& actor, const ActionScale& scale,
                                        const Matrix& states, const CriticFn& critic);

struct TrainStats {
  CriticLosses critic;
  std::optional<double> actor_loss;
};

/// Deterministic actor, clipped double critics and their target copies.
class Td3Agent {
 public:
  Td3Agent(int state_dim, ActionScale scale, Td3Config config, std::mt19937_64& init_rng);

  /// actor(state) mapped into the action box.
  Vector act(const Vector& state) const;
  Matrix act_batch(const Matrix& states) const;

  /// clip(act(state) + sigma * half_range * N(0, I)). One standard normal is
  /// drawn per action component, in component order.
  Vector select_action(const Vector& state, double sigma, std::mt19937_64& rng) const;

  /// Value and TD-error probe for one fresh transition. Uses the target
  /// networks without smoothing noise and never mutates the agent.
  StepProbe probe_step(const Vector& state, const Vector& action, double reward,
                       const Vector& next_state, bool terminal) const;
  BatchProbe probe_batch(const TransitionBatch& batch) const;

  /// Clipped double-Q bootstrap targets. `smoothing` (action_dim x batch) is
  /// added to the target policy before clipping; pass nullptr for none.
  Vector bootstrap_targets(const TransitionBatch& batch, const Matrix* smoothing) const;

  /// Draws clipped smoothing noise sample by sample, component by component.
  Matrix draw_smoothing_noise(Eigen::Index batch_size, std::mt19937_64& rng) const;

  CriticLosses update_critics(const TransitionBatch& batch, std::mt19937_64& rng);
  double update_actor(const TransitionBatch& batch);
  void polyak_update();

  /// Critics every call; actor and target averaging every policy_delay calls.
  TrainStats train_step(const TransitionBatch& batch, std::mt19937_64& rng);

  const Td3Config& config() const { return config_; }
  const ActionScale& action_scale() const { return scale_; }
  int state_dim() const { return state_dim_; }
  int action_dim() const { return scale_.dim(); }
  std::int64_t critic_updates() const { return critic_updates_; }

  const nn::Mlp& actor() const { return actor_; }
  const nn::Mlp& critic1() const { return critic1_; }
  const nn::Mlp& critic2() const { return critic2_; }
  const nn::Mlp& target_actor() const { return target_actor_; }
  const nn::Mlp& target_critic1() const { return target_critic1_; }
  const nn::Mlp& target_critic2() const { return target_critic2_; }
  nn::Mlp& actor() { return actor_; }
  nn::Mlp& critic1() { return critic1_; }
  nn::Mlp& critic2() { return critic2_; }
  nn::Mlp& target_actor() { return target_actor_; }
  nn::Mlp& target_critic1() { return target_critic1_; }
  nn::Mlp& target_critic2() { return target_critic2_; }
  const nn::AdamState& actor_optimizer() const { return actor_opt_; }
  const nn::AdamState& critic1_optimizer() const { return critic1_opt_; }
  const nn::AdamState& critic2_optimizer() const { return critic2_opt_; }

  /// Copies live parameters into the targets.
  void sync_targets();

  nlohmann::json checkpoint() const;
  static Td3Agent from_checkpoint(const nlohmann::json& j);

 private:
  Td3Agent() = default;
  void check_batch(const TransitionBatch& batch) const;

  Td3Config config_;
  ActionScale scale_;
  int state_dim_ = 0;
  nn::Mlp actor_, critic1_, critic2_;
  nn::Mlp target_actor_, target_critic1_, target_critic2_;
  nn::AdamState actor_opt_, critic1_opt_, critic2_opt_;
  std::int64_t critic_updates_ = 0;
};

}  // namespace least::agent
