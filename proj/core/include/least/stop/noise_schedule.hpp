#pragma once

#include <nlohmann/json.hpp>

#include <vector>

namespace least::stop {

struct NoiseScheduleConfig {
  double sigma_upper = 0.25;     // sigma-bar, open upper bound
  double sigma_base = 0.1;       // sigma*, the resting exploration noise
  double temp_tau = 10.0;
  double temp_mu = 5.0;
  int window = 50;               // m episodes
  int early_step_threshold = 20; // e
};

/// max(sigma_upper / (1 + exp(-beta * tau + mu)), sigma_base)
double noise_sigma_for(double beta, const NoiseScheduleConfig& config);

/// Exploration-noise level driven by how often recent episodes were forced
/// to stop early.
class NoiseSchedule {
 public:
  explicit NoiseSchedule(NoiseScheduleConfig config);

  /// `stop_step` is the zero-based step index at which the episode ended.
  /// The pushed flag is `was_forced_stop && stop_step < e`.
  void record_episode_end(int stop_step, bool was_forced_stop);

  /// beta: flagged episodes among the last m, divided by m.
  double stop_frequency() const;
  double sigma() const { return noise_sigma_for(stop_frequency(), config_); }

  const NoiseScheduleConfig& config() const { return config_; }

 private:
  NoiseScheduleConfig config_;
  std::vector<bool> flags_;
  std::size_t cursor_ = 0;
  int flagged_ = 0;
};

void to_json(nlohmann::json& j, const NoiseScheduleConfig& c);
void from_json(const nlohmann::json& j, NoiseScheduleConfig& c);

}  // namespace least::stop
