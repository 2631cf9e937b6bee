#include "least/maze/score.hpp"

#include <algorithm>
#include <stdexcept>

namespace least::maze {

double normalized_score(const EpisodeTrace& trace, const Eigen::Vector2d& goal) {
  if (trace.positions.empty()) throw std::invalid_argument("normalized_score of an empty trajectory");
  if (trace.reached_goal) return 100.0;
  const double start = (trace.positions.front() - goal).norm();
  if (start <= 0.0) return 100.0;
  double closest = start;
  for (const auto& p : trace.positions) closest = std::min(closest, (p - goal).norm());
  return 100.0 * std::max(0.0, (start - closest) / start);
}

Eigen::Vector2d final_position(const EpisodeTrace& trace) {
  if (trace.positions.empty()) throw std::invalid_argument("final_position of an empty trajectory");
  return trace.positions.back();
}

std::vector<std::vector<int>> bin_positions(const MazeLayout& layout,
                                            std::span<const Eigen::Vector2d> points) {
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(layout.rows()),
                                       std::vector<int>(static_cast<std::size_t>(layout.cols()), 0));
  for (const auto& p : points) {
    const Cell c = layout.cell_of(p);
    if (c.col < 0 || c.row < 0 || c.col >= layout.cols() || c.row >= layout.rows()) continue;
    counts[static_cast<std::size_t>(c.row)][static_cast<std::size_t>(c.col)] += 1;
  }
  return counts;
}

}  // namespace least::maze
