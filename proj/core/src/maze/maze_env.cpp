#include "least/maze/maze_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace least::maze {

namespace {

constexpr double kSnapGap = 1e-9;

}  // namespace

MazeEnv::MazeEnv(MazeLayout layout, MazeDynamics dynamics)
    : layout_(std::move(layout)), dynamics_(dynamics) {
  const double r = dynamics_.collision_radius();
  if (!(r > 0.0) || 2.0 * r >= layout_.cell_size()) {
    throw std::invalid_argument("collision radius must be positive and narrower than a cell");
  }
  if (!(dynamics_.max_speed > 0.0) || dynamics_.max_speed >= layout_.cell_size()) {
    throw std::invalid_argument("max speed must be positive and below one cell per step");
  }
  if (dynamics_.max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
}

Box MazeEnv::start_box() const {
  const Box b = layout_.start_region();
  const double r = dynamics_.collision_radius();
  return {b.lo.array() + r, b.hi.array() - r};
}

Eigen::VectorXd MazeEnv::reset(std::mt19937_64& rng) {
  const Box b = start_box();
  std::uniform_real_distribution<double> ux(b.lo.x(), b.hi.x());
  std::uniform_real_distribution<double> uy(b.lo.y(), b.hi.y());
  const double x = ux(rng);
  const double y = uy(rng);
  state_ = MazeState{{x, y}, Eigen::Vector2d::Zero(), 0};
  done_ = false;
  return observation();
}

void MazeEnv::set_state(const MazeState& state) {
  if (!footprint_free(state.position)) throw std::invalid_argument("state position overlaps a wall");
  state_ = state;
  done_ = false;
}

Eigen::VectorXd MazeEnv::observation() const {
  Eigen::VectorXd obs(kObservationDim);
  obs << state_.position, state_.velocity;
  return obs;
}

bool MazeEnv::footprint_free(const Eigen::Vector2d& p) const {
  const double cs = layout_.cell_size();
  const double r = dynamics_.collision_radius();
  const int c0 = static_cast<int>(std::floor((p.x() - r) / cs));
  const int c1 = static_cast<int>(std::ceil((p.x() + r) / cs)) - 1;
  const int r0 = static_cast<int>(std::floor((p.y() - r) / cs));
  const int r1 = static_cast<int>(std::ceil((p.y() + r) / cs)) - 1;
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      if (layout_.is_wall(col, row)) return false;
    }
  }
  return true;
}

void MazeEnv::move_axis(int axis) {
  const double v = state_.velocity[axis];
  if (v == 0.0) return;
  Eigen::Vector2d cand = state_.position;
  cand[axis] += v;
  if (footprint_free(cand)) {
    state_.position = cand;
    return;
  }
  // Blocked: find the first wall face along the direction of travel and rest
  // against it.
  const double cs = layout_.cell_size();
  const double r = dynamics_.collision_radius();
  const int other = 1 - axis;
  const int o0 = static_cast<int>(std::floor((cand[other] - r) / cs));
  const int o1 = static_cast<int>(std::ceil((cand[other] + r) / cs)) - 1;
  const int a0 = static_cast<int>(std::floor((cand[axis] - r) / cs));
  const int a1 = static_cast<int>(std::ceil((cand[axis] + r) / cs)) - 1;
  int blocking = v > 0.0 ? a1 + 1 : a0 - 1;
  for (int a = a0; a <= a1; ++a) {
    for (int o = o0; o <= o1; ++o) {
      const bool wall = axis == 0 ? layout_.is_wall(a, o) : layout_.is_wall(o, a);
      if (!wall) continue;
      blocking = v > 0.0 ? std::min(blocking, a) : std::max(blocking, a);
    }
  }
  cand[axis] = v > 0.0 ? blocking * cs - r - kSnapGap : (blocking + 1) * cs + r + kSnapGap;
  if (footprint_free(cand)) state_.position = cand;
  state_.velocity[axis] = 0.0;
}

StepResult MazeEnv::step(const Eigen::Vector2d& action) {
  if (done_) throw std::logic_error("MazeEnv::step on a finished episode; call reset()");
  if (!action.allFinite()) throw std::invalid_argument("non-finite maze action");
  Eigen::Vector2d a = action;
  if ((a.array().abs() > 1.0).any()) {
    ++clamped_actions_;
    a = a.cwiseMax(-1.0).cwiseMin(1.0);
  }
  Eigen::Vector2d v = dynamics_.speed_factor * (state_.velocity + dynamics_.accel_gain * a);
  const double speed = v.norm();
  if (speed > dynamics_.max_speed) v *= dynamics_.max_speed / speed;
  state_.velocity = v;
  move_axis(0);
  move_axis(1);
  state_.step_count += 1;

  StepResult out;
  const double dist = distance_to_goal(state_.position);
  out.reward = reward_at(state_.position);
  if (dist <= layout_.goal_radius()) {
    out.status = StepStatus::kTerminal;
  } else if (state_.step_count >= dynamics_.max_steps) {
    out.status = StepStatus::kTruncated;
  }
  done_ = out.done();
  out.observation = observation();
  return out;
}

double MazeEnv::distance_to_goal(const Eigen::Vector2d& p) const {
  return (p - layout_.goal_center()).norm();
}

double MazeEnv::reward_at(const Eigen::Vector2d& p) const {
  return -distance_to_goal(p) / layout_.diagonal();
}

}  // namespace least::maze
