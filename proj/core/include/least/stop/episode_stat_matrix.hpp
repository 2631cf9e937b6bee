#pragma once

#include <deque>
#include <optional>
#include <vector>

namespace least::stop {

/// Rolling K x L store of one per-step statistic over the K most recent
/// episodes. Row order is oldest first; the newest row is the episode being
/// written. Each row holds a valid prefix [0, length): cells past the point
/// where the episode ended (or was stopped) are invalid.
class EpisodeStatMatrix {
 public:
  EpisodeStatMatrix(int capacity_episodes, int max_len);

  /// Opens a fresh row for a new episode, evicting the oldest row when the
  /// matrix is at capacity.
  void begin_episode();

  /// Closes the current row. Recording after this requires begin_episode().
  void end_episode();

  /// Writes `value` at column `step` of the open row. Steps must be written
  /// in order (overwriting the last written step is allowed) so that valid
  /// cells stay a prefix. Throws DimensionError when step >= max_len.
  void record(int step, double value);

  /// Changes the row capacity, dropping the oldest rows if it shrinks.
  void set_capacity(int capacity_episodes);

  int capacity() const { return capacity_; }
  int max_len() const { return max_len_; }
  int rows() const { return static_cast<int>(rows_.size()); }
  bool has_open_row() const { return open_; }
  int row_length(int row) const;
  bool is_valid(int row, int step) const;
  double value(int row, int step) const;
  std::size_t valid_count() const;

  /// Valid entries of one column.
  std::vector<double> valid_column(int step) const;

  /// Column `step` where every invalid cell is replaced by the minimum over
  /// all valid entries (any row) in columns >= step. Empty when no valid
  /// entry exists at or after that column.
  std::vector<double> filled_column(int step) const;

  /// Median of filled_column(step); nullopt when that column is empty.
  std::optional<double> filled_median(int step) const;

  std::vector<double> all_valid_values() const;

 private:
  struct Row {
    std::vector<double> values;
    int length = 0;
  };

  void check_step(int step) const;

  int capacity_;
  int max_len_;
  std::deque<Row> rows_;
  bool open_ = false;
};

}  // namespace least::stop
