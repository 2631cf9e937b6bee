#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "least/maze/layout.hpp"

namespace least::maze {

struct MazeDynamics {
  double accel_gain = 0.25;  // maze units per step^2 at full action
  double speed_factor = 0.9; // velocity damping per step
  double max_speed = 0.8;    // maze units per step; must stay below one cell
  double base_radius = 0.1;
  double point_scale = 1.25;
  int max_steps = 50;

  double collision_radius() const { return base_radius * point_scale; }
};

struct MazeState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  int step_count = 0;
};

enum class StepStatus { kRunning, kTerminal, kTruncated };

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  StepStatus status = StepStatus::kRunning;
  bool done() const { return status != StepStatus::kRunning; }
};

/// Point mass in a wall maze. Observation is (x, y, vx, vy); actions are
/// accelerations in [-1, 1]^2. The point is a square footprint of half-width
/// collision_radius(); movement resolves x, then y, sliding along walls.
class MazeEnv {
 public:
  static constexpr int kObservationDim = 4;
  static constexpr int kActionDim = 2;

  explicit MazeEnv(MazeLayout layout, MazeDynamics dynamics = {});

  /// Position uniform in the start region (inset by the collision radius),
  /// zero velocity, zero steps.
  Eigen::VectorXd reset(std::mt19937_64& rng);

  /// Out-of-range actions are clamped and counted. Throws std::logic_error
  /// when the episode is already done or was never reset.
  StepResult step(const Eigen::Vector2d& action);

  Eigen::VectorXd observation() const;
  const MazeState& state() const { return state_; }
  void set_state(const MazeState& state);

  const MazeLayout& layout() const { return layout_; }
  const MazeDynamics& dynamics() const { return dynamics_; }
  bool episode_done() const { return done_; }
  std::int64_t clamped_actions() const { return clamped_actions_; }

  Box start_box() const;
  bool footprint_free(const Eigen::Vector2d& p) const;
  double distance_to_goal(const Eigen::Vector2d& p) const;

  /// -distance / maze diagonal, in [-1, 0].
  double reward_at(const Eigen::Vector2d& p) const;

 private:
  void move_axis(int axis);

  MazeLayout layout_;
  MazeDynamics dynamics_;
  MazeState state_;
  bool done_ = true;
  std::int64_t clamped_actions_ = 0;
};

}  // namespace least::maze
