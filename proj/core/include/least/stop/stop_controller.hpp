#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>

#include "least/stop/episode_stat_matrix.hpp"

namespace least::stop {

struct StopControllerConfig {
  int initial_episodes = 150;                  // K at start
  int max_episode_len = 50;                    // L
  double omega_scale = 0.5;                    // lambda, multiplies the weight
  std::int64_t start_step = 0;                 // t_start
  double overflow_rate = 0.05;                 // gamma_ov
  int resize_amount = 10;                      // h
  std::int64_t entropy_check_interval = 1000;  // c
  int min_episodes = 150;
  int max_episodes = 300;
  // H-bar. Measured from B_Q when the controller first activates if unset.
  std::optional<double> entropy_baseline;
  bool enabled = true;
};

struct StopVerdict {
  bool stop = false;
  double epsilon = 0.0;
  double omega = 0.0;
  double threshold = 0.0;
  double q_min = 0.0;
  double q_max = 0.0;
};

enum class ResizeOutcome { kUnchanged, kGrew, kShrank };

inline constexpr double kOmegaFloor = 1e-8;
inline constexpr int kEntropyBins = 32;

/// Sign-aware threshold: omega * eps for eps >= 0, eps / omega for eps < 0,
/// clipped into [q_min, q_max].
double effective_threshold(double omega, double epsilon, double q_min, double q_max);

/// True (stop and reset) iff q_hat is strictly below the effective threshold.
bool stop_decision(double q_hat, double omega, double epsilon, double q_min, double q_max);

/// Shannon entropy (nats) of a 32-bin equal-width histogram of all valid
/// cells over [min, max]. Zero for constant data. Throws on an empty matrix.
double buffer_entropy(const EpisodeStatMatrix& bq);

/// Per-step early-stop rule over rolling Q (B_Q) and TD-error (B_G)
/// statistics, with entropy-guided resizing of the episode window.
class StopController {
 public:
  explicit StopController(StopControllerConfig config);

  void begin_episode();
  void end_episode();
  void record_step(int step, double q_hat, double td_error_mag);

  /// Median of the filled B_Q column.
  std::optional<double> column_threshold(int step) const;

  /// lambda * median(filled B_G column) / max(td_error_mag, kOmegaFloor).
  std::optional<double> compute_omega(int step, double td_error_mag) const;

  bool is_active(std::int64_t global_step) const {
    return config_.enabled && global_step >= config_.start_step;
  }

  /// Full gate. nullopt while inert (disabled, before t_start, or no data
  /// for this column). The first active call fixes the entropy baseline
  /// when none was configured.
  std::optional<StopVerdict> evaluate(std::int64_t global_step, int step, double q_hat,
                                      double td_error_mag);

  /// Runs maybe_resize() on every multiple of the check interval once a
  /// baseline exists; nullopt on other steps.
  std::optional<ResizeOutcome> on_global_step(std::int64_t global_step);

  /// Grows K by h (up to k_max) when the entropy exceeds
  /// (1 + gamma_ov) * baseline, otherwise shrinks by h toward the larger of
  /// k_min and the initial K.
  ResizeOutcome maybe_resize();

  double current_entropy() const { return buffer_entropy(bq_); }
  std::optional<double> entropy_baseline() const { return baseline_; }
  void set_entropy_baseline(double h) { baseline_ = h; }

  int capacity() const { return bq_.capacity(); }
  const StopControllerConfig& config() const { return config_; }
  const EpisodeStatMatrix& q_matrix() const { return bq_; }
  const EpisodeStatMatrix& g_matrix() const { return bg_; }

  /// Matrices and parameters for offline threshold plots.
  nlohmann::json dump() const;

 private:
  StopControllerConfig config_;
  EpisodeStatMatrix bq_;
  EpisodeStatMatrix bg_;
  std::optional<double> baseline_;
};

void to_json(nlohmann::json& j, const StopControllerConfig& c);
void from_json(const nlohmann::json& j, StopControllerConfig& c);

}  // namespace least::stop
