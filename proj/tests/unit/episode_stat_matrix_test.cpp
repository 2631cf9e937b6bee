#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "least/errors.hpp"
#include "least/stats.hpp"
#include "least/stop/episode_stat_matrix.hpp"

using least::stop::EpisodeStatMatrix;

namespace {

void add_episode(EpisodeStatMatrix& m, const std::vector<double>& values) {
  m.begin_episode();
  for (std::size_t i = 0; i < values.size(); ++i) m.record(static_cast<int>(i), values[i]);
  m.end_episode();
}

// Brute force over a dense copy: NaN marks an invalid cell.
std::vector<double> brute_filled_column(const std::vector<std::vector<double>>& grid, int col) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> out;
  double fill = nan;
  for (const auto& row : grid) {
    for (std::size_t j = static_cast<std::size_t>(col); j < row.size(); ++j) {
      if (!std::isnan(row[j]) && (std::isnan(fill) || row[j] < fill)) fill = row[j];
    }
  }
  if (std::isnan(fill)) return out;
  for (const auto& row : grid) out.push_back(std::isnan(row[static_cast<std::size_t>(col)]) ? fill : row[static_cast<std::size_t>(col)]);
  return out;
}

}  // namespace

TEST(EpisodeStatMatrix, WriteThenRead) {
  EpisodeStatMatrix m(4, 5);
  m.begin_episode();
  m.record(0, 1.25);
  EXPECT_TRUE(m.is_valid(0, 0));
  EXPECT_EQ(m.value(0, 0), 1.25);
  EXPECT_FALSE(m.is_valid(0, 1));
}

TEST(EpisodeStatMatrix, EpisodesUseDistinctRows) {
  EpisodeStatMatrix m(4, 5);
  add_episode(m, {1.0, 2.0});
  add_episode(m, {3.0});
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m.value(0, 0), 1.0);
  EXPECT_EQ(m.value(1, 0), 3.0);
  EXPECT_EQ(m.row_length(0), 2);
  EXPECT_EQ(m.row_length(1), 1);
}

TEST(EpisodeStatMatrix, FifoEviction) {
  EpisodeStatMatrix m(3, 2);
  for (int e = 0; e < 4; ++e) add_episode(m, {static_cast<double>(e)});
  EXPECT_EQ(m.rows(), 3);
  EXPECT_EQ(m.value(0, 0), 1.0);
  EXPECT_EQ(m.value(2, 0), 3.0);
}

TEST(EpisodeStatMatrix, StepOutOfRangeThrows) {
  EpisodeStatMatrix m(2, 3);
  m.begin_episode();
  EXPECT_THROW(m.record(3, 0.0), least::DimensionError);
  EXPECT_THROW(m.record(1, 0.0), least::DimensionError);  // would leave a hole
  m.end_episode();
  EXPECT_THROW(m.record(0, 0.0), std::logic_error);
}

TEST(EpisodeStatMatrix, ValidCellsFormPrefix) {
  EpisodeStatMatrix m(2, 4);
  add_episode(m, {1.0, 2.0});
  for (int i = 0; i < 4; ++i) EXPECT_EQ(m.is_valid(0, i), i < 2);
}

TEST(EpisodeStatMatrix, FillUsesGlobalMinOfLaterColumns) {
  EpisodeStatMatrix m(3, 4);
  add_episode(m, {5.0, 4.0, 3.0, 2.0});
  add_episode(m, {6.0});               // truncated after column 0
  add_episode(m, {7.0, 8.0, 9.0, -1.0});
  // column 1: invalid cell in row 1 filled with min over columns >= 1 = -1
  const auto col = m.filled_column(1);
  ASSERT_EQ(col.size(), 3u);
  EXPECT_EQ(col[1], -1.0);
  EXPECT_EQ(*m.filled_median(1), 4.0);
  EXPECT_EQ(*m.filled_median(0), 6.0);
}

TEST(EpisodeStatMatrix, EmptyColumnHasNoMedian) {
  EpisodeStatMatrix m(3, 4);
  EXPECT_FALSE(m.filled_median(0).has_value());
  add_episode(m, {1.0});
  EXPECT_TRUE(m.filled_median(0).has_value());
  EXPECT_FALSE(m.filled_median(2).has_value());
}

TEST(EpisodeStatMatrix, FilledColumnMatchesBruteForce) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(0, 8);
  std::normal_distribution<double> val(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    EpisodeStatMatrix m(6, 8);
    std::vector<std::vector<double>> grid;
    for (int e = 0; e < 9; ++e) {
      std::vector<double> row(8, std::numeric_limits<double>::quiet_NaN());
      std::vector<double> values;
      const int n = len(rng);
      for (int i = 0; i < n; ++i) values.push_back(row[static_cast<std::size_t>(i)] = val(rng));
      add_episode(m, values);
      grid.push_back(row);
      if (grid.size() > 6) grid.erase(grid.begin());
    }
    for (int col = 0; col < 8; ++col) {
      const auto expect = brute_filled_column(grid, col);
      EXPECT_EQ(m.filled_column(col), expect);
      if (!expect.empty()) EXPECT_EQ(*m.filled_median(col), least::median(expect));
    }
  }
}

TEST(EpisodeStatMatrix, ShrinkKeepsNewestRows) {
  EpisodeStatMatrix m(5, 1);
  for (int e = 0; e < 5; ++e) add_episode(m, {static_cast<double>(e)});
  m.set_capacity(2);
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m.value(0, 0), 3.0);
  EXPECT_EQ(m.value(1, 0), 4.0);
  m.set_capacity(4);
  add_episode(m, {5.0});
  EXPECT_EQ(m.rows(), 3);
}
