#include "least/stop/noise_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace least::stop {

double noise_sigma_for(double beta, const NoiseScheduleConfig& config) {
  const double raw = config.sigma_upper / (1.0 + std::exp(-beta * config.temp_tau + config.temp_mu));
  return std::max(raw, config.sigma_base);
}

NoiseSchedule::NoiseSchedule(NoiseScheduleConfig config)
    : config_(config), flags_(static_cast<std::size_t>(std::max(config.window, 0)), false) {
  if (config_.window <= 0 || config_.early_step_threshold <= 0) {
    throw std::invalid_argument("noise schedule window and step threshold must be positive");
  }
  if (!(config_.sigma_base > 0.0 && config_.sigma_base < config_.sigma_upper)) {
    throw std::invalid_argument("noise schedule needs 0 < sigma_base < sigma_upper");
  }
  if (!(config_.temp_tau > 0.0) || !(config_.temp_mu > 0.0)) {
    throw std::invalid_argument("noise schedule temperatures must be positive");
  }
}

void NoiseSchedule::record_episode_end(int stop_step, bool was_forced_stop) {
  const bool flag = was_forced_stop && stop_step < config_.early_step_threshold;
  if (flags_[cursor_]) --flagged_;
  flags_[cursor_] = flag;
  if (flag) ++flagged_;
  cursor_ = (cursor_ + 1) % flags_.size();
}

double NoiseSchedule::stop_frequency() const {
  return static_cast<double>(flagged_) / static_cast<double>(config_.window);
}

void to_json(nlohmann::json& j, const NoiseScheduleConfig& c) {
  j = {{"sigma_upper", c.sigma_upper}, {"sigma_base", c.sigma_base}, {"tau", c.temp_tau},
       {"mu", c.temp_mu},             {"m", c.window},               {"e", c.early_step_threshold}};
}

void from_json(const nlohmann::json& j, NoiseScheduleConfig& c) {
  c.sigma_upper = j.value("sigma_upper", c.sigma_upper);
  c.sigma_base = j.value("sigma_base", c.sigma_base);
  c.temp_tau = j.value("tau", c.temp_tau);
  c.temp_mu = j.value("mu", c.temp_mu);
  c.window = j.value("m", c.window);
  c.early_step_threshold = j.value("e", c.early_step_threshold);
}

}  // namespace least::stop
