#include "least/maze/layout.hpp"

#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "least/errors.hpp"

namespace least::maze {

std::string to_string(SizeClass size_class) {
  switch (size_class) {
    case SizeClass::kSmall: return "small";
    case SizeClass::kMedium: return "medium";
    case SizeClass::kLarge: return "large";
  }
  return "unknown";
}

SizeClass size_class_from_string(std::string_view name) {
  if (name == "small") return SizeClass::kSmall;
  if (name == "medium") return SizeClass::kMedium;
  if (name == "large") return SizeClass::kLarge;
  throw FormatError("unknown maze size class '" + std::string(name) + "'");
}

MazeLayout MazeLayout::parse(std::string_view text, SizeClass size_class, double cell_size) {
  if (!(cell_size > 0.0)) throw FormatError("cell size must be positive");
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (line.empty() || line.front() == ';') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw FormatError("maze layout has no grid lines");
  const std::size_t width = lines.front().size();
  for (const auto& l : lines) {
    if (l.size() != width) throw FormatError("maze layout rows differ in width");
  }

  MazeLayout m;
  m.cols_ = static_cast<int>(width);
  m.rows_ = static_cast<int>(lines.size());
  m.cell_size_ = cell_size;
  m.size_class_ = size_class;
  m.grid_.assign(static_cast<std::size_t>(m.cols_ * m.rows_), '#');
  int goals = 0;
  for (int r = 0; r < m.rows_; ++r) {
    const std::string& l = lines[static_cast<std::size_t>(m.rows_ - 1 - r)];
    for (int c = 0; c < m.cols_; ++c) {
      const char ch = l[static_cast<std::size_t>(c)];
      if (ch != '#' && ch != '.' && ch != 'S' && ch != 'G') {
        throw FormatError(std::string("unexpected maze character '") + ch + "'");
      }
      m.grid_[static_cast<std::size_t>(r * m.cols_ + c)] = ch;
      if (ch == 'S') m.start_cells_.push_back({c, r});
      if (ch == 'G') {
        m.goal_cell_ = {c, r};
        ++goals;
      }
    }
  }
  if (m.start_cells_.empty()) throw FormatError("maze layout has no start cell 'S'");
  if (goals != 1) throw FormatError("maze layout needs exactly one goal cell 'G'");
  const Box sr = m.start_region();
  for (int r = 0; r < m.rows_; ++r) {
    for (int c = 0; c < m.cols_; ++c) {
      const Eigen::Vector2d center = m.cell_center({c, r});
      if (sr.contains(center) && m.grid_[static_cast<std::size_t>(r * m.cols_ + c)] != 'S') {
        throw FormatError("start cells must form a rectangle");
      }
    }
  }
  if (m.shortest_path_cells() < 0) throw FormatError("no free path from start to goal");
  return m;
}

MazeLayout MazeLayout::load(const std::filesystem::path& path, SizeClass size_class) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open maze layout " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), size_class);
}

MazeLayout MazeLayout::builtin(SizeClass size_class) {
  return parse(builtin_text(size_class), size_class);
}

std::string MazeLayout::to_text() const {
  std::string out;
  for (int r = rows_ - 1; r >= 0; --r) {
    out.append(grid_.begin() + r * cols_, grid_.begin() + (r + 1) * cols_);
    out.push_back('\n');
  }
  return out;
}

bool MazeLayout::is_wall(int col, int row) const {
  if (col < 0 || row < 0 || col >= cols_ || row >= rows_) return true;
  return grid_[static_cast<std::size_t>(row * cols_ + col)] == '#';
}

Cell MazeLayout::cell_of(const Eigen::Vector2d& p) const {
  return {static_cast<int>(std::floor(p.x() / cell_size_)), static_cast<int>(std::floor(p.y() / cell_size_))};
}

Eigen::Vector2d MazeLayout::cell_center(Cell c) const {
  return {(c.col + 0.5) * cell_size_, (c.row + 0.5) * cell_size_};
}

Box MazeLayout::start_region() const {
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(1e300);
  Eigen::Vector2d hi = Eigen::Vector2d::Constant(-1e300);
  for (const Cell& c : start_cells_) {
    lo = lo.cwiseMin(Eigen::Vector2d(c.col * cell_size_, c.row * cell_size_));
    hi = hi.cwiseMax(Eigen::Vector2d((c.col + 1) * cell_size_, (c.row + 1) * cell_size_));
  }
  return {lo, hi};
}

Box MazeLayout::bounds() const {
  return {Eigen::Vector2d::Zero(), Eigen::Vector2d(cols_ * cell_size_, rows_ * cell_size_)};
}

double MazeLayout::diagonal() const {
  return std::hypot(cols_ * cell_size_, rows_ * cell_size_);
}

int MazeLayout::shortest_path_cells() const {
  std::vector<int> dist(grid_.size(), -1);
  std::queue<Cell> frontier;
  for (const Cell& s : start_cells_) {
    dist[static_cast<std::size_t>(s.row * cols_ + s.col)] = 0;
    frontier.push(s);
  }
  constexpr int kDc[] = {1, -1, 0, 0};
  constexpr int kDr[] = {0, 0, 1, -1};
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    const int d = dist[static_cast<std::size_t>(c.row * cols_ + c.col)];
    if (c == goal_cell_) return d;
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.col + kDc[k], c.row + kDr[k]};
      if (is_wall(n)) continue;
      auto& nd = dist[static_cast<std::size_t>(n.row * cols_ + n.col)];
      if (nd >= 0) continue;
      nd = d + 1;
      frontier.push(n);
    }
  }
  return -1;
}

std::vector<Cell> MazeLayout::dead_ends() const {
  std::vector<Cell> out;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (grid_[static_cast<std::size_t>(r * cols_ + c)] != '.') continue;
      const int open = !is_wall(c + 1, r) + !is_wall(c - 1, r) + !is_wall(c, r + 1) + !is_wall(c, r - 1);
      if (open == 1) out.push_back({c, r});
    }
  }
  return out;
}

std::vector<Cell> MazeLayout::free_cells() const {
  std::vector<Cell> out;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (!is_wall(c, r)) out.push_back({c, r});
    }
  }
  return out;
}

}  // namespace least::maze
