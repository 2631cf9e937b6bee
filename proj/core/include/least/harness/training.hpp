#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "least/agent/td3_agent.hpp"
#include "least/harness/config.hpp"

namespace least::harness {

struct CurveRow {
  std::int64_t step = 0;
  double score_mean = 0.0;
  double score_std = 0.0;
  int capacity = 0;  // current K
  double sigma = 0.0;
  double beta = 0.0;
  std::array<double, 4> quadrants{};  // lowq_lowloss, lowq_highloss, highq_lowloss, highq_highloss
  double fau_actor = 0.0;
  double fau_critic = 0.0;
};

struct EpisodeLogEntry {
  std::int64_t episode = 0;
  std::int64_t end_step = 0;  // global step count when the episode ended
  int stop_step = 0;          // zero-based index of the last step taken
  bool forced = false;
  bool reached_goal = false;
  double final_x = 0.0;
  double final_y = 0.0;
};

// (min-critic Q, |TD error|) of the replay buffer halfway through training.
struct MidpointProbe {
  std::int64_t step = 0;
  agent::BatchProbe probe;
};

struct RunRecord {
  RunMode mode = RunMode::kLeast;
  std::uint64_t seed = 0;
  std::int64_t total_steps = 0;
  std::int64_t t_start = 0;
  std::vector<CurveRow> curve;
  std::vector<EpisodeLogEntry> episodes;
  std::optional<MidpointProbe> midpoint;
  std::int64_t clamped_actions = 0;
  int final_capacity = 0;
  std::optional<double> entropy_baseline;
  std::string layout_text;

  std::int64_t forced_stops() const;
};

// Thrown when a loss or gradient turns non-finite. Carries enough state to
// reproduce the failure offline.
class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(const std::string& what, nlohmann::json diagnostic)
      : std::runtime_error(what), diagnostic_(std::move(diagnostic)) {}
  const nlohmann::json& diagnostic() const { return diagnostic_; }

 private:
  nlohmann::json diagnostic_;
};

// Called after each eval row; lets the CLI print progress.
using ProgressFn = std::function<void(const CurveRow&)>;

/// One seeded training run. Deterministic in (config, seed).
RunRecord run_training(const ExperimentConfig& config, std::uint64_t seed, const ProgressFn& progress = {});

/// Independent random stream `stream` for run `seed`.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

}  // namespace least::harness
