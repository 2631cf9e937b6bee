#include "least/harness/training.hpp"

#include <algorithm>
#include <cmath>

#include "least/errors.hpp"
#include "least/maze/score.hpp"
#include "least/replay/analytics.hpp"
#include "least/replay/replay_buffer.hpp"
#include "least/stats.hpp"
#include "least/stop/noise_schedule.hpp"
#include "least/stop/stop_controller.hpp"

namespace least::harness {

namespace {

enum Stream : std::uint64_t { kInit = 1, kEnv, kExplore, kTrain, kEval, kProbe };

// Fixed FAU probe: uniform positions in free cells (inset by the footprint)
// with velocities uniform in the reachable box, and random actions for the
// critic input.
struct ProbeSet {
  Eigen::MatrixXd states;
  Eigen::MatrixXd critic_inputs;
};

ProbeSet make_probe_set(const maze::MazeEnv& env, int n, std::mt19937_64& rng) {
  const auto cells = env.layout().free_cells();
  const double cs = env.layout().cell_size();
  const double r = env.dynamics().collision_radius();
  const double v = env.dynamics().max_speed;
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::uniform_real_distribution<double> inside(r, cs - r);
  std::uniform_real_distribution<double> vel(-v, v);
  std::uniform_real_distribution<double> act(-1.0, 1.0);
  ProbeSet p;
  p.states.resize(maze::MazeEnv::kObservationDim, n);
  Eigen::MatrixXd actions(maze::MazeEnv::kActionDim, n);
  for (int i = 0; i < n; ++i) {
    const maze::Cell c = cells[pick(rng)];
    const double x = c.col * cs + inside(rng);
    const double y = c.row * cs + inside(rng);
    const double vx = vel(rng);
    const double vy = vel(rng);
    p.states.col(i) << x, y, vx, vy;
    for (int k = 0; k < maze::MazeEnv::kActionDim; ++k) actions(k, i) = act(rng);
  }
  p.critic_inputs = agent::critic_input(p.states, actions);
  return p;
}

struct EvalResult {
  double mean = 0.0;
  double std = 0.0;
};

EvalResult evaluate_policy(const agent::Td3Agent& agent, const maze::MazeEnv& proto, int episodes,
                           std::mt19937_64& rng) {
  maze::MazeEnv env = proto;
  std::vector<double> scores;
  scores.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    Eigen::VectorXd obs = env.reset(rng);
    maze::EpisodeTrace trace;
    trace.positions.push_back(env.state().position);
    while (true) {
      const auto res = env.step(agent.act(obs));
      trace.positions.push_back(env.state().position);
      obs = res.observation;
      if (res.done()) {
        trace.reached_goal = res.status == maze::StepStatus::kTerminal;
        break;
      }
    }
    scores.push_back(maze::normalized_score(trace, env.layout().goal_center()));
  }
  return {mean(scores), population_std(scores)};
}

}  // namespace

std::int64_t RunRecord::forced_stops() const {
  return std::count_if(episodes.begin(), episodes.end(), [](const EpisodeLogEntry& e) { return e.forced; });
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

RunRecord run_training(const ExperimentConfig& config, std::uint64_t seed, const ProgressFn& progress) {
  validate(config);
  const maze::MazeLayout layout = load_layout(config);
  maze::MazeEnv env(layout, config.dynamics);

  auto init_rng = make_stream(seed, kInit);
  auto env_rng = make_stream(seed, kEnv);
  auto explore_rng = make_stream(seed, kExplore);
  auto train_rng = make_stream(seed, kTrain);
  auto eval_rng = make_stream(seed, kEval);
  auto probe_rng = make_stream(seed, kProbe);

  agent::Td3Agent agent(maze::MazeEnv::kObservationDim, agent::ActionScale::symmetric(maze::MazeEnv::kActionDim),
                        config.agent, init_rng);
  replay::ReplayBuffer buffer(config.replay_capacity, maze::MazeEnv::kObservationDim, maze::MazeEnv::kActionDim);
  const stop::StopControllerConfig ctrl_cfg = effective_controller(config);
  stop::StopController controller(ctrl_cfg);
  stop::NoiseSchedule noise(config.noise);
  const bool least_mode = config.mode == RunMode::kLeast;
  const ProbeSet probes = make_probe_set(env, config.analytics.probe_states, probe_rng);

  RunRecord rec;
  rec.mode = config.mode;
  rec.seed = seed;
  rec.total_steps = config.total_steps;
  rec.t_start = ctrl_cfg.start_step;
  rec.layout_text = layout.to_text();

  const std::int64_t midpoint = config.total_steps / 2;
  std::uniform_real_distribution<double> warm(-1.0, 1.0);

  auto abort_run = [&](std::int64_t t, const std::string& why) -> TrainingAborted {
    nlohmann::json d;
    d["reason"] = why;
    d["seed"] = seed;
    d["global_step"] = t;
    d["config"] = config_to_json(config);
    d["controller"] = controller.dump();
    d["agent"] = agent.checkpoint();
    d["buffer_size"] = buffer.size();
    return TrainingAborted("run aborted at step " + std::to_string(t) + ": " + why, std::move(d));
  };

  Eigen::VectorXd obs;
  std::int64_t episode = 0;
  int episode_step = 0;
  if (config.total_steps > 0) {
    obs = env.reset(env_rng);
    controller.begin_episode();
  }

  for (std::int64_t t = 0; t < config.total_steps; ++t) {
    Eigen::Vector2d action;
    if (t < config.warmup_steps) {
      action << warm(explore_rng), warm(explore_rng);
    } else {
      const double sigma = least_mode ? noise.sigma() : config.noise.sigma_base;
      action = agent.select_action(obs, sigma, explore_rng);
    }
    const maze::StepResult res = env.step(action);
    const bool terminal = res.status == maze::StepStatus::kTerminal;
    buffer.push(obs, action, res.reward, res.observation, terminal);

    bool forced = false;
    if (ctrl_cfg.enabled) {
      const agent::StepProbe p = agent.probe_step(obs, action, res.reward, res.observation, terminal);
      controller.record_step(episode_step, p.q_hat, p.td_error_mag);
      controller.on_global_step(t);
      if (!res.done()) {
        const auto verdict = controller.evaluate(t, episode_step, p.q_hat, p.td_error_mag);
        forced = verdict && verdict->stop;
      }
    }

    if (t >= config.warmup_steps && buffer.size() >= config.batch_size) {
      try {
        const auto stats = agent.train_step(buffer.sample(config.batch_size, train_rng), train_rng);
        if (!std::isfinite(stats.critic.critic1) || !std::isfinite(stats.critic.critic2) ||
            (stats.actor_loss && !std::isfinite(*stats.actor_loss))) {
          throw abort_run(t, "non-finite loss");
        }
      } catch (const NonFiniteError& e) {
        throw abort_run(t, e.what());
      }
    }

    if (res.done() || forced) {
      controller.end_episode();
      if (least_mode) noise.record_episode_end(episode_step, forced);
      const Eigen::Vector2d pos = env.state().position;
      rec.episodes.push_back({episode, t + 1, episode_step, forced, terminal, pos.x(), pos.y()});
      ++episode;
      episode_step = 0;
      obs = env.reset(env_rng);
      controller.begin_episode();
    } else {
      obs = res.observation;
      ++episode_step;
    }

    const std::int64_t done_steps = t + 1;
    if (done_steps % config.eval_interval == 0) {
      const EvalResult ev = evaluate_policy(agent, env, config.eval_episodes, eval_rng);
      CurveRow row;
      row.step = done_steps;
      row.score_mean = ev.mean;
      row.score_std = ev.std;
      row.capacity = controller.capacity();
      row.beta = least_mode ? noise.stop_frequency() : 0.0;
      row.sigma = least_mode ? noise.sigma() : config.noise.sigma_base;
      const auto probe = agent.probe_batch(buffer.strided(config.analytics.quadrant_stride));
      row.quadrants = replay::quadrant_fractions(probe, replay::mean_splits(probe)).fractions;
      row.fau_actor = replay::network_fau(agent.actor(), probes.states);
      row.fau_critic = replay::network_fau(agent.critic1(), probes.critic_inputs);
      rec.curve.push_back(row);
      if (progress) progress(row);
    }
    if (done_steps == midpoint) {
      rec.midpoint = MidpointProbe{done_steps, agent.probe_batch(buffer.strided(config.analytics.midpoint_stride))};
    }
  }
  rec.clamped_actions = env.clamped_actions();
  rec.final_capacity = controller.capacity();
  rec.entropy_baseline = controller.entropy_baseline();
  return rec;
}

}  // namespace least::harness
