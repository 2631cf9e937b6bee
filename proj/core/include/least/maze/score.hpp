#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "least/maze/layout.hpp"

namespace least::maze {

struct EpisodeTrace {
  std::vector<Eigen::Vector2d> positions;  // positions[0] is the reset position
  bool reached_goal = false;
};

/// 100 * max(0, (d_start - d_closest) / d_start); 100 when the goal was
/// reached. Throws std::invalid_argument on an empty trace.
double normalized_score(const EpisodeTrace& trace, const Eigen::Vector2d& goal);

Eigen::Vector2d final_position(const EpisodeTrace& trace);

/// counts[row][col] of points per layout cell (row 0 = bottom). Points
/// outside the grid are ignored.
std::vector<std::vector<int>> bin_positions(const MazeLayout& layout,
                                            std::span<const Eigen::Vector2d> points);

}  // namespace least::maze
