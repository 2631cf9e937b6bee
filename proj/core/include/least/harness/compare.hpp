#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "least/harness/training.hpp"
#include "least/maze/layout.hpp"
#include "least/replay/analytics.hpp"

namespace least::harness {

/// First eval step whose mean score reaches `target`; nullopt if never.
/// Throws std::invalid_argument on an empty curve.
std::optional<std::int64_t> steps_to_score(const std::vector<CurveRow>& curve, double target);

/// Seed-averaged score curve. All records must share the same eval steps.
std::vector<CurveRow> mean_curve(const std::vector<RunRecord>& records);

/// Mean of the last `window` eval scores (fewer if the curve is shorter).
double final_score(const RunRecord& record, int window);

struct ArmSummary {
  std::string name;
  int runs = 0;
  std::int64_t budget = 0;
  double final_mean = 0.0;
  double final_std = 0.0;  // population std over seeds
  double curve_max = 0.0;  // max of the seed-averaged curve
  std::optional<std::int64_t> steps_to_target;
  std::optional<std::array<double, 4>> midpoint_quadrants;  // seed means, shared splits
  std::array<double, 4> final_quadrants{};                  // last curve row, seed means
  double forced_stop_fraction = 0.0;                         // forced episodes / all episodes
};

struct Comparison {
  ArmSummary vanilla;
  ArmSummary least;
  double target_score = 0.0;  // vanilla curve_max
  double score_gap = 0.0;     // least.final_mean - vanilla.final_mean
  std::optional<replay::QuadrantSplits> splits;
};

/// Per-arm final scores, steps to reach vanilla's best seed-averaged score,
/// and midpoint quadrant fractions split at the LEAST arm's pooled means.
/// Throws std::invalid_argument if either arm is empty.
Comparison compare_runs(const std::vector<RunRecord>& vanilla, const std::vector<RunRecord>& least,
                        int final_window = 5);

nlohmann::json comparison_json(const Comparison& c);
void write_comparison_csv(const std::filesystem::path& path, const Comparison& c);
std::string format_comparison_table(const Comparison& c);

/// counts[row][col] (row 0 = bottom) of the final positions of each record's
/// last `last_n` training episodes.
std::vector<std::vector<int>> position_histogram(const std::vector<RunRecord>& records,
                                                 const maze::MazeLayout& layout, std::size_t last_n = 50);

/// Grid CSV, top row first, walls written as -1.
void write_position_csv(const std::filesystem::path& path, const maze::MazeLayout& layout,
                        const std::vector<std::vector<int>>& counts);

}  // namespace least::harness
