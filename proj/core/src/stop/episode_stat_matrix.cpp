#include "least/stop/episode_stat_matrix.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "least/errors.hpp"
#include "least/stats.hpp"

namespace least::stop {

EpisodeStatMatrix::EpisodeStatMatrix(int capacity_episodes, int max_len)
    : capacity_(capacity_episodes), max_len_(max_len) {
  if (capacity_episodes <= 0 || max_len <= 0) {
    throw std::invalid_argument("EpisodeStatMatrix needs positive K and L");
  }
}

void EpisodeStatMatrix::begin_episode() {
  while (static_cast<int>(rows_.size()) >= capacity_) rows_.pop_front();
  rows_.push_back(Row{std::vector<double>(static_cast<std::size_t>(max_len_), 0.0), 0});
  open_ = true;
}

void EpisodeStatMatrix::end_episode() { open_ = false; }

void EpisodeStatMatrix::check_step(int step) const {
  if (step < 0 || step >= max_len_) {
    throw DimensionError("step " + std::to_string(step) + " outside [0, " + std::to_string(max_len_) + ")");
  }
}

void EpisodeStatMatrix::record(int step, double value) {
  check_step(step);
  if (!open_) throw std::logic_error("record() without an open episode row");
  Row& row = rows_.back();
  if (step > row.length) {
    throw DimensionError("step " + std::to_string(step) + " skips past the valid prefix of length " +
                         std::to_string(row.length));
  }
  row.values[static_cast<std::size_t>(step)] = value;
  row.length = std::max(row.length, step + 1);
}

void EpisodeStatMatrix::set_capacity(int capacity_episodes) {
  if (capacity_episodes <= 0) throw std::invalid_argument("capacity must be positive");
  capacity_ = capacity_episodes;
  while (static_cast<int>(rows_.size()) > capacity_) rows_.pop_front();
}

int EpisodeStatMatrix::row_length(int row) const {
  return rows_.at(static_cast<std::size_t>(row)).length;
}

bool EpisodeStatMatrix::is_valid(int row, int step) const {
  check_step(step);
  return step < row_length(row);
}

double EpisodeStatMatrix::value(int row, int step) const {
  if (!is_valid(row, step)) throw std::out_of_range("read of an invalid cell");
  return rows_[static_cast<std::size_t>(row)].values[static_cast<std::size_t>(step)];
}

std::size_t EpisodeStatMatrix::valid_count() const {
  std::size_t n = 0;
  for (const Row& r : rows_) n += static_cast<std::size_t>(r.length);
  return n;
}

std::vector<double> EpisodeStatMatrix::valid_column(int step) const {
  check_step(step);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const Row& r : rows_) {
    if (step < r.length) out.push_back(r.values[static_cast<std::size_t>(step)]);
  }
  return out;
}

std::vector<double> EpisodeStatMatrix::filled_column(int step) const {
  check_step(step);
  double fill = std::numeric_limits<double>::infinity();
  for (const Row& r : rows_) {
    if (step >= r.length) continue;
    for (int j = step; j < r.length; ++j) fill = std::min(fill, r.values[static_cast<std::size_t>(j)]);
  }
  std::vector<double> out;
  if (fill == std::numeric_limits<double>::infinity()) return out;
  out.reserve(rows_.size());
  for (const Row& r : rows_) {
    out.push_back(step < r.length ? r.values[static_cast<std::size_t>(step)] : fill);
  }
  return out;
}

std::optional<double> EpisodeStatMatrix::filled_median(int step) const {
  std::vector<double> col = filled_column(step);
  if (col.empty()) return std::nullopt;
  return median(std::move(col));
}

std::vector<double> EpisodeStatMatrix::all_valid_values() const {
  std::vector<double> out;
  out.reserve(valid_count());
  for (const Row& r : rows_) out.insert(out.end(), r.values.begin(), r.values.begin() + r.length);
  return out;
}

}  // namespace least::stop
