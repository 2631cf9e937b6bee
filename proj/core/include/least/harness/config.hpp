#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "least/agent/td3_agent.hpp"
#include "least/maze/layout.hpp"
#include "least/maze/maze_env.hpp"
#include "least/stop/noise_schedule.hpp"
#include "least/stop/stop_controller.hpp"

namespace least::harness {

enum class RunMode { kVanilla, kLeast };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(std::string_view name);

struct AnalyticsConfig {
  int probe_states = 256;             // fixed FAU probe batch
  Eigen::Index quadrant_stride = 10;  // buffer subsampling for per-eval quadrants
  Eigen::Index midpoint_stride = 1;   // buffer subsampling for the midpoint probe
};

struct ExperimentConfig {
  maze::SizeClass size_class = maze::SizeClass::kSmall;
  std::optional<std::string> layout_file;  // relative paths resolve against the config file
  std::int64_t total_steps = 100000;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  RunMode mode = RunMode::kLeast;
  std::int64_t eval_interval = 2000;
  int eval_episodes = 10;
  std::int64_t warmup_steps = 5000;
  int batch_size = 128;
  Eigen::Index replay_capacity = 100000;
  agent::Td3Config agent;
  stop::StopControllerConfig controller;
  // When set, t_start = round(fraction * total_steps) and overrides
  // controller.start_step.
  std::optional<double> t_start_fraction = 0.15;
  stop::NoiseScheduleConfig noise;
  maze::MazeDynamics dynamics;
  AnalyticsConfig analytics;
  int final_window = 5;  // eval rows averaged into the final score
  std::string output_dir = "runs";
};

/// Desk-scale defaults: 100k / 150k / 200k steps for small / medium / large.
ExperimentConfig default_config(maze::SizeClass size_class);

std::int64_t effective_t_start(const ExperimentConfig& config);

/// Controller settings the run actually uses: t_start resolved, and
/// disabled in vanilla mode.
stop::StopControllerConfig effective_controller(const ExperimentConfig& config);

/// Throws FormatError on an inconsistent configuration.
void validate(const ExperimentConfig& config);

maze::MazeLayout load_layout(const ExperimentConfig& config);

/// Parses a JSON config. Keys missing from the file take the defaults of the
/// named maze size class. `base_dir` anchors a relative layout_file.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses "0..4" (inclusive range) or "0,3,7".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace least::harness
