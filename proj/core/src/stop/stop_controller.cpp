#include "least/stop/stop_controller.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace least::stop {

double effective_threshold(double omega, double epsilon, double q_min, double q_max) {
  const double raw = epsilon >= 0.0 ? omega * epsilon : epsilon / omega;
  return std::clamp(raw, q_min, q_max);
}

bool stop_decision(double q_hat, double omega, double epsilon, double q_min, double q_max) {
  return q_hat < effective_threshold(omega, epsilon, q_min, q_max);
}

double buffer_entropy(const EpisodeStatMatrix& bq) {
  const std::vector<double> values = bq.all_valid_values();
  if (values.empty()) throw std::invalid_argument("entropy of an empty statistics matrix");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  if (!(width > 0.0)) return 0.0;
  std::array<std::size_t, kEntropyBins> counts{};
  for (double v : values) {
    auto bin = static_cast<int>((v - lo) / width * kEntropyBins);
    counts[static_cast<std::size_t>(std::clamp(bin, 0, kEntropyBins - 1))] += 1;
  }
  const double n = static_cast<double>(values.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

StopController::StopController(StopControllerConfig config)
    : config_(std::move(config)),
      bq_(config_.initial_episodes, config_.max_episode_len),
      bg_(config_.initial_episodes, config_.max_episode_len),
      baseline_(config_.entropy_baseline) {
  if (!(config_.min_episodes <= config_.initial_episodes && config_.initial_episodes <= config_.max_episodes)) {
    throw std::invalid_argument("StopController needs k_min <= K <= k_max");
  }
  if (config_.resize_amount <= 0 || config_.entropy_check_interval <= 0) {
    throw std::invalid_argument("resize amount and entropy check interval must be positive");
  }
  if (!(config_.omega_scale > 0.0) || config_.overflow_rate < 0.0 || config_.start_step < 0) {
    throw std::invalid_argument("invalid omega scale, overflow rate or start step");
  }
}

void StopController::begin_episode() {
  bq_.begin_episode();
  bg_.begin_episode();
}

void StopController::end_episode() {
  bq_.end_episode();
  bg_.end_episode();
}

void StopController::record_step(int step, double q_hat, double td_error_mag) {
  bq_.record(step, q_hat);
  bg_.record(step, td_error_mag);
}

std::optional<double> StopController::column_threshold(int step) const {
  return bq_.filled_median(step);
}

std::optional<double> StopController::compute_omega(int step, double td_error_mag) const {
  const std::optional<double> g_median = bg_.filled_median(step);
  if (!g_median) return std::nullopt;
  return config_.omega_scale * *g_median / std::max(td_error_mag, kOmegaFloor);
}

std::optional<StopVerdict> StopController::evaluate(std::int64_t global_step, int step, double q_hat,
                                                    double td_error_mag) {
  if (!is_active(global_step)) return std::nullopt;
  if (!baseline_ && bq_.valid_count() > 0) baseline_ = buffer_entropy(bq_);
  const std::optional<double> eps = column_threshold(step);
  const std::optional<double> omega = compute_omega(step, td_error_mag);
  const std::vector<double> column = bq_.valid_column(step);
  if (!eps || !omega || column.empty()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
  StopVerdict v;
  v.epsilon = *eps;
  v.omega = *omega;
  v.q_min = *lo;
  v.q_max = *hi;
  v.threshold = effective_threshold(v.omega, v.epsilon, v.q_min, v.q_max);
  v.stop = q_hat < v.threshold;
  return v;
}

std::optional<ResizeOutcome> StopController::on_global_step(std::int64_t global_step) {
  if (!config_.enabled || !baseline_ || global_step <= 0 ||
      global_step % config_.entropy_check_interval != 0) {
    return std::nullopt;
  }
  return maybe_resize();
}

ResizeOutcome StopController::maybe_resize() {
  if (!baseline_ || bq_.valid_count() == 0) return ResizeOutcome::kUnchanged;
  const int k = capacity();
  int next = k;
  if (current_entropy() > (1.0 + config_.overflow_rate) * *baseline_) {
    next = std::min(k + config_.resize_amount, config_.max_episodes);
  } else {
    const int floor = std::max(config_.min_episodes, config_.initial_episodes);
    next = std::max(k - config_.resize_amount, floor);
  }
  if (next == k) return ResizeOutcome::kUnchanged;
  bq_.set_capacity(next);
  bg_.set_capacity(next);
  return next > k ? ResizeOutcome::kGrew : ResizeOutcome::kShrank;
}

namespace {

nlohmann::json matrix_json(const EpisodeStatMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    std::vector<double> row;
    for (int i = 0; i < m.row_length(r); ++i) row.push_back(m.value(r, i));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json StopController::dump() const {
  nlohmann::json j = {{"config", config_},
                      {"capacity", capacity()},
                      {"entropy_baseline", baseline_ ? nlohmann::json(*baseline_) : nlohmann::json()},
                      {"entropy", bq_.valid_count() > 0 ? nlohmann::json(current_entropy()) : nlohmann::json()},
                      {"q_matrix", matrix_json(bq_)},
                      {"g_matrix", matrix_json(bg_)}};
  nlohmann::json thresholds = nlohmann::json::array();
  for (int i = 0; i < bq_.max_len(); ++i) {
    const auto eps = column_threshold(i);
    thresholds.push_back(eps ? nlohmann::json(*eps) : nlohmann::json());
  }
  j["column_thresholds"] = thresholds;
  return j;
}

void to_json(nlohmann::json& j, const StopControllerConfig& c) {
  j = {{"K", c.initial_episodes},
       {"L", c.max_episode_len},
       {"lambda", c.omega_scale},
       {"t_start", c.start_step},
       {"gamma_ov", c.overflow_rate},
       {"h", c.resize_amount},
       {"c", c.entropy_check_interval},
       {"k_min", c.min_episodes},
       {"k_max", c.max_episodes},
       {"entropy_baseline", c.entropy_baseline ? nlohmann::json(*c.entropy_baseline) : nlohmann::json()},
       {"enabled", c.enabled}};
}

void from_json(const nlohmann::json& j, StopControllerConfig& c) {
  c.initial_episodes = j.value("K", c.initial_episodes);
  c.max_episode_len = j.value("L", c.max_episode_len);
  c.omega_scale = j.value("lambda", c.omega_scale);
  c.start_step = j.value("t_start", c.start_step);
  c.overflow_rate = j.value("gamma_ov", c.overflow_rate);
  c.resize_amount = j.value("h", c.resize_amount);
  c.entropy_check_interval = j.value("c", c.entropy_check_interval);
  // k_min and k_max follow K unless given.
  c.min_episodes = j.value("k_min", j.contains("K") ? c.initial_episodes : c.min_episodes);
  c.max_episodes = j.value("k_max", j.contains("K") ? 2 * c.initial_episodes : c.max_episodes);
  if (j.contains("entropy_baseline") && !j.at("entropy_baseline").is_null()) {
    c.entropy_baseline = j.at("entropy_baseline").get<double>();
  }
  c.enabled = j.value("enabled", c.enabled);
}

}  // namespace least::stop
