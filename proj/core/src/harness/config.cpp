#include "least/harness/config.hpp"

#include <charconv>
#include <cmath>

#include "least/errors.hpp"
#include "least/nn/snapshot.hpp"

namespace least::harness {

std::string to_string(RunMode mode) { return mode == RunMode::kVanilla ? "vanilla" : "least"; }

RunMode run_mode_from_string(std::string_view name) {
  if (name == "vanilla") return RunMode::kVanilla;
  if (name == "least") return RunMode::kLeast;
  throw FormatError("unknown mode '" + std::string(name) + "' (expected vanilla or least)");
}

ExperimentConfig default_config(maze::SizeClass size_class) {
  ExperimentConfig c;
  c.size_class = size_class;
  switch (size_class) {
    case maze::SizeClass::kSmall: c.total_steps = 100000; break;
    case maze::SizeClass::kMedium: c.total_steps = 150000; break;
    case maze::SizeClass::kLarge: c.total_steps = 200000; break;
  }
  c.output_dir = "runs/" + maze::to_string(size_class);
  return c;
}

std::int64_t effective_t_start(const ExperimentConfig& config) {
  if (config.t_start_fraction) {
    return static_cast<std::int64_t>(std::llround(*config.t_start_fraction * static_cast<double>(config.total_steps)));
  }
  return config.controller.start_step;
}

stop::StopControllerConfig effective_controller(const ExperimentConfig& config) {
  stop::StopControllerConfig c = config.controller;
  c.start_step = effective_t_start(config);
  c.max_episode_len = config.dynamics.max_steps;
  if (config.mode == RunMode::kVanilla) c.enabled = false;
  return c;
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) { throw FormatError("invalid config: " + msg); };
  if (c.total_steps < 0) fail("total_steps must be >= 0");
  if (c.seeds.empty()) fail("seeds must not be empty");
  if (c.eval_interval <= 0) fail("eval_interval must be positive");
  if (c.eval_episodes <= 0) fail("eval_episodes must be positive");
  if (c.warmup_steps < 0) fail("warmup_steps must be >= 0");
  if (c.batch_size <= 0) fail("batch_size must be positive");
  if (c.replay_capacity < c.batch_size) fail("replay_capacity must hold at least one batch");
  if (c.agent.hidden.empty()) fail("agent.hidden needs at least one layer");
  if (c.agent.policy_delay <= 0) fail("agent.policy_delay must be positive");
  if (c.t_start_fraction && (*c.t_start_fraction < 0.0 || *c.t_start_fraction > 1.0)) {
    fail("t_start_fraction must lie in [0, 1]");
  }
  if (c.controller.initial_episodes <= 0) fail("controller.K must be positive");
  if (c.controller.max_episodes < c.controller.initial_episodes) fail("controller.k_max must be >= K");
  if (c.controller.resize_amount <= 0) fail("controller.h must be positive");
  if (c.controller.entropy_check_interval <= 0) fail("controller.c must be positive");
  if (c.noise.window <= 0) fail("noise.m must be positive");
  if (!(c.noise.sigma_base >= 0.0) || !(c.noise.sigma_upper > c.noise.sigma_base)) {
    fail("noise needs 0 <= sigma_base < sigma_upper");
  }
  if (c.analytics.probe_states <= 0) fail("analytics.probe_states must be positive");
  if (c.analytics.quadrant_stride <= 0 || c.analytics.midpoint_stride <= 0) fail("analytics strides must be positive");
  if (c.final_window <= 0) fail("final_window must be positive");
}

maze::MazeLayout load_layout(const ExperimentConfig& config) {
  if (config.layout_file) return maze::MazeLayout::load(*config.layout_file, config.size_class);
  return maze::MazeLayout::builtin(config.size_class);
}

namespace {

void dynamics_from_json(const nlohmann::json& j, maze::MazeDynamics& d) {
  d.accel_gain = j.value("accel_gain", d.accel_gain);
  d.speed_factor = j.value("speed_factor", d.speed_factor);
  d.max_speed = j.value("max_speed", d.max_speed);
  d.base_radius = j.value("base_radius", d.base_radius);
  d.point_scale = j.value("point_scale", d.point_scale);
  d.max_steps = j.value("max_steps", d.max_steps);
}

nlohmann::json dynamics_to_json(const maze::MazeDynamics& d) {
  return {{"accel_gain", d.accel_gain}, {"speed_factor", d.speed_factor}, {"max_speed", d.max_speed},
          {"base_radius", d.base_radius}, {"point_scale", d.point_scale}, {"max_steps", d.max_steps}};
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  try {
    const auto size = maze::size_class_from_string(j.value("maze", std::string("small")));
    ExperimentConfig c = default_config(size);
    if (j.contains("layout_file") && !j.at("layout_file").is_null()) {
      std::filesystem::path p = j.at("layout_file").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) {
        p = std::filesystem::weakly_canonical(std::filesystem::absolute(base_dir / p));
      }
      c.layout_file = p.string();
    }
    c.total_steps = j.value("total_steps", c.total_steps);
    c.seeds = j.value("seeds", c.seeds);
    if (j.contains("mode")) c.mode = run_mode_from_string(j.at("mode").get<std::string>());
    c.eval_interval = j.value("eval_interval", c.eval_interval);
    c.eval_episodes = j.value("eval_episodes", c.eval_episodes);
    c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.replay_capacity = j.value("replay_capacity", c.replay_capacity);
    if (j.contains("agent")) j.at("agent").get_to(c.agent);
    if (j.contains("controller")) {
      const auto& cj = j.at("controller");
      cj.get_to(c.controller);
      if (cj.contains("t_start")) c.t_start_fraction.reset();
    }
    if (j.contains("t_start_fraction")) {
      if (j.at("t_start_fraction").is_null()) {
        c.t_start_fraction.reset();
      } else {
        c.t_start_fraction = j.at("t_start_fraction").get<double>();
      }
    }
    if (j.contains("noise")) j.at("noise").get_to(c.noise);
    if (j.contains("dynamics")) dynamics_from_json(j.at("dynamics"), c.dynamics);
    if (j.contains("analytics")) {
      const auto& a = j.at("analytics");
      c.analytics.probe_states = a.value("probe_states", c.analytics.probe_states);
      c.analytics.quadrant_stride = a.value("quadrant_stride", c.analytics.quadrant_stride);
      c.analytics.midpoint_stride = a.value("midpoint_stride", c.analytics.midpoint_stride);
    }
    c.final_window = j.value("final_window", c.final_window);
    c.output_dir = j.value("output_dir", c.output_dir);
    validate(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["maze"] = maze::to_string(c.size_class);
  j["layout_file"] = c.layout_file ? nlohmann::json(*c.layout_file) : nlohmann::json(nullptr);
  j["total_steps"] = c.total_steps;
  j["seeds"] = c.seeds;
  j["mode"] = to_string(c.mode);
  j["eval_interval"] = c.eval_interval;
  j["eval_episodes"] = c.eval_episodes;
  j["warmup_steps"] = c.warmup_steps;
  j["batch_size"] = c.batch_size;
  j["replay_capacity"] = c.replay_capacity;
  j["agent"] = c.agent;
  nlohmann::json ctrl = c.controller;
  if (c.t_start_fraction) ctrl.erase("t_start");
  j["controller"] = ctrl;
  j["t_start_fraction"] = c.t_start_fraction ? nlohmann::json(*c.t_start_fraction) : nlohmann::json(nullptr);
  j["noise"] = c.noise;
  j["dynamics"] = dynamics_to_json(c.dynamics);
  j["analytics"] = {{"probe_states", c.analytics.probe_states},
                    {"quadrant_stride", c.analytics.quadrant_stride},
                    {"midpoint_stride", c.analytics.midpoint_stride}};
  j["final_window"] = c.final_window;
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(nn::load_json(path), path.parent_path());
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  auto parse_one = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw FormatError("bad seed '" + std::string(s) + "' in '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<std::uint64_t> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_one(text.substr(0, dots));
    const auto hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw FormatError("empty seed range '" + std::string(text) + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto comma = text.find(',', begin);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_one(text.substr(begin, end - begin)));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return out;
}

}  // namespace least::harness
