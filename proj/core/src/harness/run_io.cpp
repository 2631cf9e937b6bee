#include "least/harness/run_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "least/errors.hpp"
#include "least/harness/compare.hpp"
#include "least/nn/snapshot.hpp"

namespace least::harness {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& path) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError(path.string() + ": bad number '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s, const fs::path& path) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError(path.string() + ": bad integer '" + s + "'");
  }
  return v;
}

// Rows of a CSV whose first line must equal `header`.
std::vector<std::vector<std::string>> read_table(const fs::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw FormatError(path.string() + ": unexpected header '" + line + "'");
  const std::size_t width = split_csv(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != width) throw FormatError(path.string() + ": row has " + std::to_string(cells.size()) + " cells");
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_curve_csv(const fs::path& path, const std::vector<CurveRow>& rows) {
  auto out = open_out(path);
  out << kCurveHeader << '\n';
  for (const auto& r : rows) {
    out << r.step << ',' << format_double(r.score_mean) << ',' << format_double(r.score_std) << ',' << r.capacity
        << ',' << format_double(r.sigma) << ',' << format_double(r.beta);
    for (double q : r.quadrants) out << ',' << format_double(q);
    out << ',' << format_double(r.fau_actor) << ',' << format_double(r.fau_critic) << '\n';
  }
}

std::vector<CurveRow> read_curve_csv(const fs::path& path) {
  std::vector<CurveRow> rows;
  for (const auto& c : read_table(path, kCurveHeader)) {
    CurveRow r;
    r.step = parse_int(c[0], path);
    r.score_mean = parse_double(c[1], path);
    r.score_std = parse_double(c[2], path);
    r.capacity = static_cast<int>(parse_int(c[3], path));
    r.sigma = parse_double(c[4], path);
    r.beta = parse_double(c[5], path);
    for (std::size_t k = 0; k < 4; ++k) r.quadrants[k] = parse_double(c[6 + k], path);
    r.fau_actor = parse_double(c[10], path);
    r.fau_critic = parse_double(c[11], path);
    if (!rows.empty() && r.step <= rows.back().step) throw FormatError(path.string() + ": steps not increasing");
    rows.push_back(r);
  }
  return rows;
}

void write_stops_csv(const fs::path& path, const std::vector<EpisodeLogEntry>& episodes) {
  auto out = open_out(path);
  out << kStopsHeader << '\n';
  for (const auto& e : episodes) {
    out << e.episode << ',' << e.end_step << ',' << e.stop_step << ',' << (e.forced ? 1 : 0) << ','
        << (e.reached_goal ? 1 : 0) << ',' << format_double(e.final_x) << ',' << format_double(e.final_y) << '\n';
  }
}

std::vector<EpisodeLogEntry> read_stops_csv(const fs::path& path) {
  std::vector<EpisodeLogEntry> out;
  for (const auto& c : read_table(path, kStopsHeader)) {
    EpisodeLogEntry e;
    e.episode = parse_int(c[0], path);
    e.end_step = parse_int(c[1], path);
    e.stop_step = static_cast<int>(parse_int(c[2], path));
    e.forced = parse_int(c[3], path) != 0;
    e.reached_goal = parse_int(c[4], path) != 0;
    e.final_x = parse_double(c[5], path);
    e.final_y = parse_double(c[6], path);
    out.push_back(e);
  }
  return out;
}

void write_midpoint_csv(const fs::path& path, const agent::BatchProbe& probe) {
  auto out = open_out(path);
  out << kMidpointHeader << '\n';
  for (Eigen::Index i = 0; i < probe.q_hat.size(); ++i) {
    out << format_double(probe.q_hat[i]) << ',' << format_double(probe.td_error_mag[i]) << '\n';
  }
}

agent::BatchProbe read_midpoint_csv(const fs::path& path) {
  const auto rows = read_table(path, kMidpointHeader);
  agent::BatchProbe p;
  p.q_hat.resize(static_cast<Eigen::Index>(rows.size()));
  p.td_error_mag.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.q_hat[static_cast<Eigen::Index>(i)] = parse_double(rows[i][0], path);
    p.td_error_mag[static_cast<Eigen::Index>(i)] = parse_double(rows[i][1], path);
  }
  return p;
}

nlohmann::json run_summary(const RunRecord& r, const ExperimentConfig& config) {
  nlohmann::json j;
  j["format"] = "least-run";
  j["version"] = 1;
  j["mode"] = to_string(r.mode);
  j["seed"] = r.seed;
  j["total_steps"] = r.total_steps;
  j["t_start"] = r.t_start;
  j["episodes"] = r.episodes.size();
  j["forced_stops"] = r.forced_stops();
  j["clamped_actions"] = r.clamped_actions;
  j["final_K"] = r.final_capacity;
  j["entropy_baseline"] = r.entropy_baseline ? nlohmann::json(*r.entropy_baseline) : nlohmann::json(nullptr);
  j["midpoint_step"] = r.midpoint ? nlohmann::json(r.midpoint->step) : nlohmann::json(nullptr);
  if (!r.curve.empty()) {
    const auto best = std::max_element(r.curve.begin(), r.curve.end(),
                                       [](const CurveRow& a, const CurveRow& b) { return a.score_mean < b.score_mean; });
    j["last_score"] = r.curve.back().score_mean;
    j["final_score"] = final_score(r, config.final_window);
    j["max_score"] = best->score_mean;
  }
  j["layout"] = r.layout_text;
  j["config"] = config_to_json(config);
  return j;
}

fs::path seed_dir(const fs::path& root, std::uint64_t seed) { return root / ("seed_" + std::to_string(seed)); }

void write_run(const fs::path& dir, const RunRecord& record, const ExperimentConfig& config) {
  fs::create_directories(dir);
  write_curve_csv(dir / "curve.csv", record.curve);
  write_stops_csv(dir / "stops.csv", record.episodes);
  if (record.midpoint) write_midpoint_csv(dir / "midpoint_probe.csv", record.midpoint->probe);
  nn::save_json(run_summary(record, config), dir / "summary.json");
}

RunRecord read_run(const fs::path& dir) {
  const nlohmann::json s = nn::load_json(dir / "summary.json");
  if (s.value("format", std::string()) != "least-run") throw FormatError(dir.string() + ": not a run directory");
  RunRecord r;
  try {
    r.mode = run_mode_from_string(s.at("mode").get<std::string>());
    r.seed = s.at("seed").get<std::uint64_t>();
    r.total_steps = s.at("total_steps").get<std::int64_t>();
    r.t_start = s.at("t_start").get<std::int64_t>();
    r.clamped_actions = s.at("clamped_actions").get<std::int64_t>();
    r.final_capacity = s.at("final_K").get<int>();
    if (!s.at("entropy_baseline").is_null()) r.entropy_baseline = s.at("entropy_baseline").get<double>();
    r.layout_text = s.at("layout").get<std::string>();
    r.curve = read_curve_csv(dir / "curve.csv");
    r.episodes = read_stops_csv(dir / "stops.csv");
    if (!s.at("midpoint_step").is_null()) {
      r.midpoint = MidpointProbe{s.at("midpoint_step").get<std::int64_t>(), read_midpoint_csv(dir / "midpoint_probe.csv")};
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(dir.string() + "/summary.json: " + e.what());
  }
  return r;
}

std::vector<fs::path> find_run_dirs(const fs::path& root) {
  if (fs::exists(root / "curve.csv")) return {root};
  std::vector<std::pair<std::uint64_t, fs::path>> found;
  if (!fs::is_directory(root)) throw FormatError("no such run directory " + root.string());
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("seed_", 0) != 0 || !fs::exists(entry.path() / "curve.csv")) continue;
    std::uint64_t seed = 0;
    const auto res = std::from_chars(name.data() + 5, name.data() + name.size(), seed);
    if (res.ec != std::errc()) continue;
    found.emplace_back(seed, entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<fs::path> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

}  // namespace least::harness
