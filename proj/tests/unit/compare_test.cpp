#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "least/harness/compare.hpp"

using namespace least::harness;

namespace {

// Curve with eval rows every 1000 steps holding the given scores.
RunRecord record_with(std::vector<double> scores, RunMode mode = RunMode::kVanilla) {
  RunRecord r;
  r.mode = mode;
  r.total_steps = 1000 * static_cast<std::int64_t>(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    CurveRow row;
    row.step = 1000 * static_cast<std::int64_t>(i + 1);
    row.score_mean = scores[i];
    row.quadrants = {0.25, 0.25, 0.25, 0.25};
    r.curve.push_back(row);
  }
  return r;
}

}  // namespace

TEST(StepsToScore, Examples) {
  const auto r = record_with({10.0, 30.0, 50.0, 55.0, 60.0, 70.0});
  EXPECT_EQ(steps_to_score(r.curve, 0.0), 1000);
  EXPECT_FALSE(steps_to_score(r.curve, 70.5).has_value());
  EXPECT_EQ(steps_to_score(r.curve, 60.0), 5000);
  EXPECT_THROW(steps_to_score({}, 1.0), std::invalid_argument);
}

TEST(StepsToScore, NonMonotoneTakesFirstCrossing) {
  const auto r = record_with({80.0, 10.0, 90.0});
  EXPECT_EQ(steps_to_score(r.curve, 75.0), 1000);
  EXPECT_EQ(steps_to_score(r.curve, 85.0), 3000);
}

TEST(FinalScore, AveragesTrailingWindow) {
  const auto r = record_with({0.0, 10.0, 20.0, 30.0});
  EXPECT_EQ(final_score(r, 2), 25.0);
  EXPECT_EQ(final_score(r, 10), 15.0);
  EXPECT_EQ(final_score(r, 1), 30.0);
}

TEST(CompareRuns, IdenticalArmsHaveZeroGap) {
  const std::vector<RunRecord> arm{record_with({10, 40, 60}), record_with({20, 30, 70})};
  const auto c = compare_runs(arm, arm);
  EXPECT_EQ(c.score_gap, 0.0);
  EXPECT_EQ(c.vanilla.final_mean, c.least.final_mean);
  EXPECT_EQ(c.vanilla.steps_to_target, c.least.steps_to_target);
}

TEST(CompareRuns, SingleSeedHasZeroStd) {
  const auto c = compare_runs({record_with({10, 20})}, {record_with({30, 40})});
  EXPECT_EQ(c.vanilla.final_std, 0.0);
  EXPECT_EQ(c.least.final_std, 0.0);
  EXPECT_EQ(c.vanilla.runs, 1);
}

TEST(CompareRuns, FiveSeedsMatchHandComputation) {
  // Finals with window 1: vanilla {50, 55, 60, 65, 70}, least {70, 72, 74, 76, 78}.
  std::vector<RunRecord> v, l;
  for (int i = 0; i < 5; ++i) {
    v.push_back(record_with({20.0, 40.0 + 2 * i, 50.0 + 5 * i}));
    l.push_back(record_with({30.0, 60.0 + i, 70.0 + 2 * i}, RunMode::kLeast));
  }
  const auto c = compare_runs(v, l, 1);
  EXPECT_DOUBLE_EQ(c.vanilla.final_mean, 60.0);
  EXPECT_DOUBLE_EQ(c.vanilla.final_std, std::sqrt(50.0));  // population: (100+25+0+25+100)/5
  EXPECT_DOUBLE_EQ(c.least.final_mean, 74.0);
  EXPECT_DOUBLE_EQ(c.least.final_std, std::sqrt(8.0));
  EXPECT_DOUBLE_EQ(c.score_gap, 14.0);
  EXPECT_DOUBLE_EQ(c.target_score, 60.0);  // vanilla seed-mean curve peaks at its last row
  EXPECT_EQ(c.vanilla.steps_to_target, 3000);
  EXPECT_EQ(c.least.steps_to_target, 2000);  // least mean row 2 is 62
  EXPECT_EQ(c.vanilla.budget, 3000);
}

TEST(CompareRuns, MidpointSplitSharedFromLeastArm) {
  auto with_probe = [](RunRecord r, std::vector<double> q, std::vector<double> g) {
    least::agent::BatchProbe p;
    p.q_hat = Eigen::Map<Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
    p.td_error_mag = Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
    r.midpoint = MidpointProbe{1000, p};
    return r;
  };
  // Least pooled means: q 0, loss 1.
  const auto l = with_probe(record_with({1.0}), {-1.0, 1.0}, {0.0, 2.0});
  const auto v = with_probe(record_with({1.0}), {-2.0, -2.0, -2.0, 3.0}, {0.5, 0.5, 0.5, 0.5});
  const auto c = compare_runs({v}, {l});
  ASSERT_TRUE(c.splits.has_value());
  EXPECT_EQ(c.splits->q_split, 0.0);
  EXPECT_EQ(c.splits->loss_split, 1.0);
  EXPECT_EQ((*c.vanilla.midpoint_quadrants)[0], 0.75);
  EXPECT_EQ((*c.vanilla.midpoint_quadrants)[2], 0.25);
  EXPECT_EQ((*c.least.midpoint_quadrants)[0], 0.5);
  EXPECT_EQ((*c.least.midpoint_quadrants)[3], 0.5);
}

TEST(CompareRuns, ForcedStopFraction) {
  auto r = record_with({1.0});
  r.episodes.resize(4);
  r.episodes[1].forced = true;
  const auto c = compare_runs({record_with({1.0})}, {r});
  EXPECT_EQ(c.least.forced_stop_fraction, 0.25);
  EXPECT_EQ(c.vanilla.forced_stop_fraction, 0.0);
}

TEST(CompareRuns, EmptyArmThrows) {
  EXPECT_THROW(compare_runs({}, {record_with({1.0})}), std::invalid_argument);
  EXPECT_THROW(compare_runs({record_with({})}, {record_with({1.0})}), std::invalid_argument);
}

TEST(CompareRuns, OutputsMentionBothArms) {
  const auto c = compare_runs({record_with({10, 20})}, {record_with({30, 40})});
  const auto j = comparison_json(c);
  EXPECT_TRUE(j.contains("vanilla"));
  EXPECT_TRUE(j.contains("least"));
  const std::string table = format_comparison_table(c);
  EXPECT_NE(table.find("vanilla"), std::string::npos);
  EXPECT_NE(table.find("least"), std::string::npos);
  const auto path = std::filesystem::temp_directory_path() / "least_compare_test.csv";
  write_comparison_csv(path, c);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_FALSE(header.empty());
  std::filesystem::remove(path);
}

TEST(PositionHistogram, Examples) {
  const auto layout = least::maze::MazeLayout::builtin(least::maze::SizeClass::kSmall);
  RunRecord one;
  one.episodes.push_back({0, 50, 49, false, false, 1.5, 1.5});
  auto h = position_histogram({one}, layout);
  int total = 0;
  for (const auto& row : h) for (int c : row) total += c;
  EXPECT_EQ(total, 1);
  EXPECT_EQ(h[1][1], 1);

  RunRecord at_goal;
  const auto g = layout.goal_center();
  for (int i = 0; i < 60; ++i) at_goal.episodes.push_back({i, 10 * i, 9, false, true, g.x(), g.y()});
  h = position_histogram({at_goal}, layout);
  EXPECT_EQ(h[static_cast<std::size_t>(layout.goal_cell().row)][static_cast<std::size_t>(layout.goal_cell().col)], 50);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ux(0.0, layout.cols()), uy(0.0, layout.rows());
  RunRecord a, b;
  std::vector<std::vector<int>> manual(static_cast<std::size_t>(layout.rows()),
                                       std::vector<int>(static_cast<std::size_t>(layout.cols()), 0));
  for (RunRecord* r : {&a, &b}) {
    for (int i = 0; i < 70; ++i) {
      const double x = ux(rng), y = uy(rng);
      r->episodes.push_back({i, i, 0, false, false, x, y});
      if (i >= 20) manual[static_cast<std::size_t>(std::floor(y))][static_cast<std::size_t>(std::floor(x))]++;
    }
  }
  EXPECT_EQ(position_histogram({a, b}, layout), manual);
}

TEST(PositionHistogram, CsvTopRowFirstWithWalls) {
  const auto layout = least::maze::MazeLayout::parse("####\n#SG#\n####\n", least::maze::SizeClass::kSmall);
  RunRecord r;
  r.episodes.push_back({0, 1, 0, false, true, 2.5, 1.5});
  const auto path = std::filesystem::temp_directory_path() / "least_positions_test.csv";
  write_position_csv(path, layout, position_histogram({r}, layout));
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "-1,-1,-1,-1\n-1,0,1,-1\n-1,-1,-1,-1\n");
  std::filesystem::remove(path);
}
