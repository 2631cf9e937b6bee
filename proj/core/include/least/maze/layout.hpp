#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace least::maze {

enum class SizeClass { kSmall, kMedium, kLarge };

std::string to_string(SizeClass size_class);
SizeClass size_class_from_string(std::string_view name);

// Grid cell; row 0 is the bottom row of the maze.
struct Cell {
  int col = 0;
  int row = 0;
  bool operator==(const Cell&) const = default;
};

struct Box {
  Eigen::Vector2d lo;
  Eigen::Vector2d hi;
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

inline constexpr double kGoalRadiusCells = 0.5;

/// Wall grid parsed from the plain-text maze format (docs/formats.md):
/// `#` wall, `.` free, `S` start cell, `G` goal cell, `;` starts a comment
/// line. World coordinates put cell (col, row) at
/// [col, col+1] x [row, row+1] times the cell size.
class MazeLayout {
 public:
  /// Throws FormatError on malformed text or when no free path joins the
  /// start cells to the goal.
  static MazeLayout parse(std::string_view text, SizeClass size_class, double cell_size = 1.0);
  static MazeLayout load(const std::filesystem::path& path, SizeClass size_class);
  static MazeLayout builtin(SizeClass size_class);
  static std::string_view builtin_text(SizeClass size_class);

  std::string to_text() const;

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  double cell_size() const { return cell_size_; }
  SizeClass size_class() const { return size_class_; }

  /// Cells outside the grid count as walls.
  bool is_wall(int col, int row) const;
  bool is_wall(Cell c) const { return is_wall(c.col, c.row); }

  Cell cell_of(const Eigen::Vector2d& p) const;
  Eigen::Vector2d cell_center(Cell c) const;

  const std::vector<Cell>& start_cells() const { return start_cells_; }
  Cell goal_cell() const { return goal_cell_; }

  /// Bounding box of the start cells.
  Box start_region() const;
  Eigen::Vector2d goal_center() const { return cell_center(goal_cell_); }
  double goal_radius() const { return kGoalRadiusCells * cell_size_; }
  Box bounds() const;
  double diagonal() const;

  /// Breadth-first path length in cell moves from the nearest start cell to
  /// the goal cell, or -1 if unreachable.
  int shortest_path_cells() const;

  /// Free, non-start, non-goal cells with exactly one free 4-neighbour.
  std::vector<Cell> dead_ends() const;

  std::vector<Cell> free_cells() const;

 private:
  MazeLayout() = default;

  int cols_ = 0;
  int rows_ = 0;
  double cell_size_ = 1.0;
  SizeClass size_class_ = SizeClass::kSmall;
  std::vector<char> grid_;  // row-major, row 0 = bottom
  std::vector<Cell> start_cells_;
  Cell goal_cell_;
};

}  // namespace least::maze
