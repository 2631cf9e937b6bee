#include "least/agent/td3_agent.hpp"

#include <algorithm>
#include <cmath>

#include "least/errors.hpp"
#include "least/nn/snapshot.hpp"

namespace least::agent {

TransitionBatch TransitionBatch::from_transitions(const std::vector<Transition>& transitions) {
  TransitionBatch b;
  if (transitions.empty()) return b;
  const auto n = static_cast<Eigen::Index>(transitions.size());
  const auto sd = transitions.front().state.size();
  const auto ad = transitions.front().action.size();
  b.states.resize(sd, n);
  b.actions.resize(ad, n);
  b.next_states.resize(sd, n);
  b.rewards.resize(n);
  b.terminals.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Transition& t = transitions[static_cast<std::size_t>(j)];
    if (t.state.size() != sd || t.next_state.size() != sd || t.action.size() != ad) {
      throw DimensionError("transitions in a batch must share dimensions");
    }
    b.states.col(j) = t.state;
    b.actions.col(j) = t.action;
    b.next_states.col(j) = t.next_state;
    b.rewards(j) = t.reward;
    b.terminals(j) = t.terminal ? 1.0 : 0.0;
  }
  return b;
}

void to_json(nlohmann::json& j, const Td3Config& c) {
  j = {{"hidden", c.hidden},
       {"actor_lr", c.actor_lr},
       {"critic_lr", c.critic_lr},
       {"discount", c.discount},
       {"polyak_rate", c.polyak_rate},
       {"policy_noise_std", c.policy_noise_std},
       {"policy_noise_clip", c.policy_noise_clip},
       {"policy_delay", c.policy_delay}};
}

void from_json(const nlohmann::json& j, Td3Config& c) {
  c.hidden = j.value("hidden", c.hidden);
  c.actor_lr = j.value("actor_lr", c.actor_lr);
  c.critic_lr = j.value("critic_lr", c.critic_lr);
  c.discount = j.value("discount", c.discount);
  c.polyak_rate = j.value("polyak_rate", c.polyak_rate);
  c.policy_noise_std = j.value("policy_noise_std", c.policy_noise_std);
  c.policy_noise_clip = j.value("policy_noise_clip", c.policy_noise_clip);
  c.policy_delay = j.value("policy_delay", c.policy_delay);
}

ActionScale ActionScale::symmetric(int action_dim, double bound) {
  return {Vector::Constant(action_dim, -bound), Vector::Constant(action_dim, bound)};
}

Matrix ActionScale::to_env(const Matrix& squashed) const {
  Matrix out = squashed.array().colwise() * half_range().array();
  out.colwise() += center();
  return out;
}

Matrix ActionScale::clip(const Matrix& actions) const {
  Matrix out = actions;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j) = out.col(j).cwiseMax(low).cwiseMin(high);
  }
  return out;
}

Matrix critic_input(const Matrix& states, const Matrix& actions) {
  if (states.cols() != actions.cols()) {
    throw DimensionError("critic_input: state and action batches differ in size");
  }
  Matrix x(states.rows() + actions.rows(), states.cols());
  x.topRows(states.rows()) = states;
  x.bottomRows(actions.rows()) = actions;
  return x;
}

LossAndGradient critic_loss_and_gradient(const nn::Mlp& critic, const Matrix& states,
                                         const Matrix& actions, const Vector& targets) {
  const auto n = states.cols();
  if (targets.size() != n || n == 0) {
    throw DimensionError("critic loss needs one target per sample and a nonempty batch");
  }
  const nn::ForwardTrace trace = critic.forward_trace(critic_input(states, actions));
  const Eigen::RowVectorXd residual = trace.post.back().row(0) - targets.transpose();
  LossAndGradient out;
  out.loss = residual.squaredNorm() / static_cast<double>(n);
  const Matrix upstream = (2.0 / static_cast<double>(n)) * residual;
  out.grad = critic.backward(trace, upstream).params;
  return out;
}

CriticFn mlp_critic(const nn::Mlp& critic) {
  return [&critic](const Matrix& states, const Matrix& actions) {
    const nn::ForwardTrace trace = critic.forward_trace(critic_input(states, actions));
    CriticEvaluation eval;
    eval.q = trace.post.back().row(0).transpose();
    const Matrix ones = Matrix::Ones(1, states.cols());
    const Matrix dx = critic.backward_input(trace, ones);
    eval.dq_daction = dx.bottomRows(actions.rows());
    return eval;
  };
}

LossAndGradient actor_loss_and_gradient(const nn::Mlp& actor, const ActionScale& scale,
                                        const Matrix& states, const CriticFn& critic) {
  const auto n = states.cols();
  if (n == 0) throw DimensionError("actor loss needs a nonempty batch");
  const nn::ForwardTrace trace = actor.forward_trace(states);
  const Matrix actions = scale.to_env(trace.post.back());
  const CriticEvaluation eval = critic(states, actions);
  LossAndGradient out;
  out.loss = -eval.q.mean();
  // d(-mean Q)/d(squashed) = -(1/n) dQ/da * half_range
  const Matrix upstream =
      (-1.0 / static_cast<double>(n)) * (eval.dq_daction.array().colwise() * scale.half_range().array()).matrix();
  out.grad = actor.backward(trace, upstream).params;
  return out;
}

Td3Agent::Td3Agent(int state_dim, ActionScale scale, Td3Config config, std::mt19937_64& init_rng)
    : config_(std::move(config)), scale_(std::move(scale)), state_dim_(state_dim) {
  if (state_dim <= 0 || scale_.dim() <= 0 || scale_.high.size() != scale_.low.size()) {
    throw DimensionError("Td3Agent: invalid state or action dimensions");
  }
  if (config_.policy_delay <= 0) throw std::invalid_argument("policy_delay must be positive");
  if (!(config_.discount >= 0.0 && config_.discount < 1.0)) {
    throw std::invalid_argument("discount must lie in [0, 1)");
  }
  if (!(config_.polyak_rate >= 0.0 && config_.polyak_rate <= 1.0)) {
    throw std::invalid_argument("polyak_rate must lie in [0, 1]");
  }
  std::vector<int> actor_dims{state_dim};
  std::vector<int> critic_dims{state_dim + scale_.dim()};
  for (int h : config_.hidden) {
    actor_dims.push_back(h);
    critic_dims.push_back(h);
  }
  actor_dims.push_back(scale_.dim());
  critic_dims.push_back(1);

  actor_ = nn::Mlp::uniform_init(actor_dims, nn::OutputActivation::kTanh, init_rng);
  critic1_ = nn::Mlp::uniform_init(critic_dims, nn::OutputActivation::kNone, init_rng);
  critic2_ = nn::Mlp::uniform_init(critic_dims, nn::OutputActivation::kNone, init_rng);
  sync_targets();
  actor_opt_ = nn::AdamState::zeros(actor_.parameter_count(), {config_.actor_lr});
  critic1_opt_ = nn::AdamState::zeros(critic1_.parameter_count(), {config_.critic_lr});
  critic2_opt_ = nn::AdamState::zeros(critic2_.parameter_count(), {config_.critic_lr});
}

void Td3Agent::sync_targets() {
  target_actor_ = actor_;
  target_critic1_ = critic1_;
  target_critic2_ = critic2_;
}

Vector Td3Agent::act(const Vector& state) const {
  if (state.size() != state_dim_) throw DimensionError("state dimension mismatch");
  if (!state.allFinite()) throw NonFiniteError("non-finite state");
  return scale_.to_env(actor_.forward(state));
}

Matrix Td3Agent::act_batch(const Matrix& states) const {
  return scale_.to_env(actor_.forward_batch(states));
}

Vector Td3Agent::select_action(const Vector& state, double sigma, std::mt19937_64& rng) const {
  if (sigma < 0.0) throw std::invalid_argument("exploration sigma must be nonnegative");
  Vector a = act(state);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Vector half = scale_.half_range();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a(i) += sigma * half(i) * normal(rng);
  }
  return scale_.clip(a);
}

void Td3Agent::check_batch(const TransitionBatch& batch) const {
  const auto n = batch.size();
  if (n == 0) throw DimensionError("empty transition batch");
  if (batch.states.rows() != state_dim_ || batch.next_states.rows() != state_dim_ ||
      batch.actions.rows() != action_dim() || batch.states.cols() != n ||
      batch.next_states.cols() != n || batch.actions.cols() != n || batch.terminals.size() != n) {
    throw DimensionError("transition batch does not match agent dimensions");
  }
}

Vector Td3Agent::bootstrap_targets(const TransitionBatch& batch, const Matrix* smoothing) const {
  Matrix next_actions = scale_.to_env(target_actor_.forward_batch(batch.next_states));
  if (smoothing != nullptr) next_actions = scale_.clip(next_actions + *smoothing);
  const Matrix x = critic_input(batch.next_states, next_actions);
  const Vector q1 = target_critic1_.forward_batch(x).row(0).transpose();
  const Vector q2 = target_critic2_.forward_batch(x).row(0).transpose();
  const Vector not_done = Vector::Ones(batch.size()) - batch.terminals;
  return batch.rewards + config_.discount * not_done.cwiseProduct(q1.cwiseMin(q2));
}

Matrix Td3Agent::draw_smoothing_noise(Eigen::Index batch_size, std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Vector half = scale_.half_range();
  Matrix noise(action_dim(), batch_size);
  for (Eigen::Index j = 0; j < batch_size; ++j) {
    for (Eigen::Index i = 0; i < noise.rows(); ++i) {
      const double e = std::clamp(config_.policy_noise_std * normal(rng), -config_.policy_noise_clip,
                                  config_.policy_noise_clip);
      noise(i, j) = e * half(i);
    }
  }
  return noise;
}

StepProbe Td3Agent::probe_step(const Vector& state, const Vector& action, double reward,
                               const Vector& next_state, bool terminal) const {
  TransitionBatch b;
  b.states = state;
  b.actions = action;
  b.next_states = next_state;
  b.rewards = Vector::Constant(1, reward);
  b.terminals = Vector::Constant(1, terminal ? 1.0 : 0.0);
  const BatchProbe p = probe_batch(b);
  return {p.q_hat(0), p.td_error_mag(0)};
}

BatchProbe Td3Agent::probe_batch(const TransitionBatch& batch) const {
  check_batch(batch);
  const Matrix x = critic_input(batch.states, batch.actions);
  const Vector q1 = critic1_.forward_batch(x).row(0).transpose();
  const Vector q2 = critic2_.forward_batch(x).row(0).transpose();
  BatchProbe out;
  out.q_hat = q1.cwiseMin(q2);
  out.td_error_mag = (bootstrap_targets(batch, nullptr) - out.q_hat).cwiseAbs();
  return out;
}

CriticLosses Td3Agent::update_critics(const TransitionBatch& batch, std::mt19937_64& rng) {
  check_batch(batch);
  const Matrix noise = draw_smoothing_noise(batch.size(), rng);
  const Vector y = bootstrap_targets(batch, &noise);
  LossAndGradient g1 = critic_loss_and_gradient(critic1_, batch.states, batch.actions, y);
  LossAndGradient g2 = critic_loss_and_gradient(critic2_, batch.states, batch.actions, y);
  if (!std::isfinite(g1.loss) || !std::isfinite(g2.loss)) {
    throw NonFiniteError("critic loss is not finite");
  }
  nn::adam_step(critic1_.parameters(), {g1.grad.data(), static_cast<std::size_t>(g1.grad.size())},
                critic1_opt_);
  nn::adam_step(critic2_.parameters(), {g2.grad.data(), static_cast<std::size_t>(g2.grad.size())},
                critic2_opt_);
  return {g1.loss, g2.loss};
}

double Td3Agent::update_actor(const TransitionBatch& batch) {
  check_batch(batch);
  const LossAndGradient g =
      actor_loss_and_gradient(actor_, scale_, batch.states, mlp_critic(critic1_));
  if (!std::isfinite(g.loss)) throw NonFiniteError("actor loss is not finite");
  nn::adam_step(actor_.parameters(), {g.grad.data(), static_cast<std::size_t>(g.grad.size())},
                actor_opt_);
  return g.loss;
}

void Td3Agent::polyak_update() {
  const double rate = config_.polyak_rate;
  auto blend = [rate](const nn::Mlp& live, nn::Mlp& target) {
    target.parameter_vector() = rate * live.parameter_vector() + (1.0 - rate) * target.parameter_vector();
  };
  blend(actor_, target_actor_);
  blend(critic1_, target_critic1_);
  blend(critic2_, target_critic2_);
}

TrainStats Td3Agent::train_step(const TransitionBatch& batch, std::mt19937_64& rng) {
  TrainStats stats;
  stats.critic = update_critics(batch, rng);
  ++critic_updates_;
  if (critic_updates_ % config_.policy_delay == 0) {
    stats.actor_loss = update_actor(batch);
    polyak_update();
  }
  return stats;
}

nlohmann::json Td3Agent::checkpoint() const {
  return {{"format", "least-td3"},
          {"version", 1},
          {"state_dim", state_dim_},
          {"action_low", std::vector<double>(scale_.low.begin(), scale_.low.end())},
          {"action_high", std::vector<double>(scale_.high.begin(), scale_.high.end())},
          {"config", config_},
          {"critic_updates", critic_updates_},
          {"nets",
           {{"actor", nn::to_json(actor_)},
            {"critic1", nn::to_json(critic1_)},
            {"critic2", nn::to_json(critic2_)},
            {"target_actor", nn::to_json(target_actor_)},
            {"target_critic1", nn::to_json(target_critic1_)},
            {"target_critic2", nn::to_json(target_critic2_)}}},
          {"optimizers",
           {{"actor", nn::to_json(actor_opt_)},
            {"critic1", nn::to_json(critic1_opt_)},
            {"critic2", nn::to_json(critic2_opt_)}}}};
}

Td3Agent Td3Agent::from_checkpoint(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "least-td3") throw FormatError("not a least-td3 checkpoint");
    Td3Agent a;
    a.state_dim_ = j.at("state_dim").get<int>();
    const auto low = j.at("action_low").get<std::vector<double>>();
    const auto high = j.at("action_high").get<std::vector<double>>();
    a.scale_.low = Eigen::Map<const Vector>(low.data(), static_cast<Eigen::Index>(low.size()));
    a.scale_.high = Eigen::Map<const Vector>(high.data(), static_cast<Eigen::Index>(high.size()));
    a.config_ = j.at("config").get<Td3Config>();
    a.critic_updates_ = j.at("critic_updates").get<std::int64_t>();
    const auto& nets = j.at("nets");
    a.actor_ = nn::mlp_from_json(nets.at("actor"));
    a.critic1_ = nn::mlp_from_json(nets.at("critic1"));
    a.critic2_ = nn::mlp_from_json(nets.at("critic2"));
    a.target_actor_ = nn::mlp_from_json(nets.at("target_actor"));
    a.target_critic1_ = nn::mlp_from_json(nets.at("target_critic1"));
    a.target_critic2_ = nn::mlp_from_json(nets.at("target_critic2"));
    const auto& opt = j.at("optimizers");
    a.actor_opt_ = nn::adam_from_json(opt.at("actor"));
    a.critic1_opt_ = nn::adam_from_json(opt.at("critic1"));
    a.critic2_opt_ = nn::adam_from_json(opt.at("critic2"));
    if (!a.actor_.same_architecture(a.target_actor_) || !a.critic1_.same_architecture(a.target_critic1_) ||
        !a.critic2_.same_architecture(a.target_critic2_)) {
      throw FormatError("checkpoint target networks do not match live networks");
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed TD3 checkpoint: ") + e.what());
  }
}

}  // namespace least::agent
