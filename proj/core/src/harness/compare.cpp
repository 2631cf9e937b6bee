#include "least/harness/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "least/errors.hpp"
#include "least/harness/run_io.hpp"
#include "least/maze/score.hpp"
#include "least/stats.hpp"

namespace least::harness {

std::optional<std::int64_t> steps_to_score(const std::vector<CurveRow>& curve, double target) {
  if (curve.empty()) throw std::invalid_argument("steps_to_score on an empty curve");
  for (const auto& row : curve) {
    if (row.score_mean >= target) return row.step;
  }
  return std::nullopt;
}

std::vector<CurveRow> mean_curve(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("mean_curve of no records");
  const auto& first = records.front().curve;
  std::vector<CurveRow> out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    out[i].step = first[i].step;
    std::vector<double> scores;
    for (const auto& r : records) {
      if (r.curve.size() != first.size() || r.curve[i].step != first[i].step) {
        throw FormatError("records do not share eval steps");
      }
      scores.push_back(r.curve[i].score_mean);
    }
    out[i].score_mean = mean(scores);
    out[i].score_std = population_std(scores);
  }
  return out;
}

double final_score(const RunRecord& record, int window) {
  if (record.curve.empty()) throw std::invalid_argument("final_score of an empty curve");
  const std::size_t n = std::min(record.curve.size(), static_cast<std::size_t>(std::max(window, 1)));
  double sum = 0.0;
  for (std::size_t i = record.curve.size() - n; i < record.curve.size(); ++i) sum += record.curve[i].score_mean;
  return sum / static_cast<double>(n);
}

namespace {

agent::BatchProbe pooled_midpoint(const std::vector<RunRecord>& records) {
  Eigen::Index n = 0;
  for (const auto& r : records) n += r.midpoint->probe.q_hat.size();
  agent::BatchProbe p;
  p.q_hat.resize(n);
  p.td_error_mag.resize(n);
  Eigen::Index at = 0;
  for (const auto& r : records) {
    const auto m = r.midpoint->probe.q_hat.size();
    p.q_hat.segment(at, m) = r.midpoint->probe.q_hat;
    p.td_error_mag.segment(at, m) = r.midpoint->probe.td_error_mag;
    at += m;
  }
  return p;
}

bool all_have_midpoint(const std::vector<RunRecord>& records) {
  return std::all_of(records.begin(), records.end(),
                     [](const RunRecord& r) { return r.midpoint && r.midpoint->probe.q_hat.size() > 0; });
}

ArmSummary summarize(const std::string& name, const std::vector<RunRecord>& records, int final_window) {
  ArmSummary s;
  s.name = name;
  s.runs = static_cast<int>(records.size());
  s.budget = records.front().total_steps;
  std::vector<double> finals;
  std::size_t episodes = 0;
  std::size_t forced = 0;
  for (const auto& r : records) {
    finals.push_back(final_score(r, final_window));
    for (std::size_t k = 0; k < 4; ++k) s.final_quadrants[k] += r.curve.back().quadrants[k] / records.size();
    episodes += r.episodes.size();
    forced += static_cast<std::size_t>(r.forced_stops());
  }
  s.final_mean = mean(finals);
  s.final_std = population_std(finals);
  const auto curve = mean_curve(records);
  s.curve_max = std::max_element(curve.begin(), curve.end(), [](const CurveRow& a, const CurveRow& b) {
                  return a.score_mean < b.score_mean;
                })->score_mean;
  s.forced_stop_fraction = episodes ? static_cast<double>(forced) / static_cast<double>(episodes) : 0.0;
  return s;
}

std::array<double, 4> midpoint_fractions(const std::vector<RunRecord>& records, const replay::QuadrantSplits& splits) {
  std::array<double, 4> out{};
  for (const auto& r : records) {
    const auto q = replay::quadrant_fractions(r.midpoint->probe, splits);
    for (std::size_t k = 0; k < 4; ++k) out[k] += q.fractions[k] / records.size();
  }
  return out;
}

}  // namespace

Comparison compare_runs(const std::vector<RunRecord>& vanilla, const std::vector<RunRecord>& least,
                        int final_window) {
  if (vanilla.empty() || least.empty()) throw std::invalid_argument("compare_runs needs at least one run per arm");
  for (const auto* arm : {&vanilla, &least}) {
    for (const auto& r : *arm) {
      if (r.curve.empty()) throw std::invalid_argument("compare_runs: run with no eval rows");
    }
  }
  Comparison c;
  c.vanilla = summarize("vanilla", vanilla, final_window);
  c.least = summarize("least", least, final_window);
  c.target_score = c.vanilla.curve_max;
  c.vanilla.steps_to_target = steps_to_score(mean_curve(vanilla), c.target_score);
  c.least.steps_to_target = steps_to_score(mean_curve(least), c.target_score);
  c.score_gap = c.least.final_mean - c.vanilla.final_mean;
  if (all_have_midpoint(least) && all_have_midpoint(vanilla)) {
    c.splits = replay::mean_splits(pooled_midpoint(least));
    c.vanilla.midpoint_quadrants = midpoint_fractions(vanilla, *c.splits);
    c.least.midpoint_quadrants = midpoint_fractions(least, *c.splits);
  }
  return c;
}

namespace {

nlohmann::json opt_json(const std::optional<std::int64_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json arm_json(const ArmSummary& a) {
  nlohmann::json j;
  j["runs"] = a.runs;
  j["budget"] = a.budget;
  j["final_mean"] = a.final_mean;
  j["final_std"] = a.final_std;
  j["curve_max"] = a.curve_max;
  j["steps_to_target"] = opt_json(a.steps_to_target);
  j["midpoint_quadrants"] = a.midpoint_quadrants ? nlohmann::json(*a.midpoint_quadrants) : nlohmann::json(nullptr);
  j["final_quadrants"] = a.final_quadrants;
  j["forced_stop_fraction"] = a.forced_stop_fraction;
  return j;
}

std::string fmt(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

}  // namespace

nlohmann::json comparison_json(const Comparison& c) {
  nlohmann::json j;
  j["quadrant_order"] = {"lowq_lowloss", "lowq_highloss", "highq_lowloss", "highq_highloss"};
  j["vanilla"] = arm_json(c.vanilla);
  j["least"] = arm_json(c.least);
  j["target_score"] = c.target_score;
  j["score_gap"] = c.score_gap;
  if (c.splits) {
    j["q_split"] = c.splits->q_split;
    j["loss_split"] = c.splits->loss_split;
  }
  return j;
}

void write_comparison_csv(const std::filesystem::path& path, const Comparison& c) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "arm,runs,budget,final_mean,final_std,curve_max,target_score,steps_to_target,"
         "mid_lowq_lowloss,mid_lowq_highloss,mid_highq_lowloss,mid_highq_highloss,forced_stop_fraction\n";
  for (const ArmSummary* a : {&c.vanilla, &c.least}) {
    out << a->name << ',' << a->runs << ',' << a->budget << ',' << format_double(a->final_mean) << ','
        << format_double(a->final_std) << ',' << format_double(a->curve_max) << ',' << format_double(c.target_score)
        << ',' << (a->steps_to_target ? std::to_string(*a->steps_to_target) : std::string());
    for (std::size_t k = 0; k < 4; ++k) {
      out << ',' << (a->midpoint_quadrants ? format_double((*a->midpoint_quadrants)[k]) : std::string());
    }
    out << ',' << format_double(a->forced_stop_fraction) << '\n';
  }
}

std::string format_comparison_table(const Comparison& c) {
  std::ostringstream os;
  os << "arm      runs  final score       steps to " << fmt(c.target_score, 1) << "   midpoint quadrants (ll lh hl hh)\n";
  for (const ArmSummary* a : {&c.vanilla, &c.least}) {
    char head[96];
    std::snprintf(head, sizeof(head), "%-8s %4d  %6.2f +/- %-6.2f  ", a->name.c_str(), a->runs, a->final_mean,
                  a->final_std);
    os << head;
    const std::string steps = a->steps_to_target ? std::to_string(*a->steps_to_target) : "never";
    char mid[32];
    std::snprintf(mid, sizeof(mid), "%-14s", steps.c_str());
    os << mid;
    if (a->midpoint_quadrants) {
      for (double q : *a->midpoint_quadrants) os << ' ' << fmt(q, 3);
    } else {
      os << " n/a";
    }
    os << '\n';
  }
  os << "gap (least - vanilla): " << fmt(c.score_gap) << '\n';
  return os.str();
}

std::vector<std::vector<int>> position_histogram(const std::vector<RunRecord>& records, const maze::MazeLayout& layout,
                                                 std::size_t last_n) {
  std::vector<Eigen::Vector2d> points;
  for (const auto& r : records) {
    const std::size_t n = std::min(last_n, r.episodes.size());
    for (std::size_t i = r.episodes.size() - n; i < r.episodes.size(); ++i) {
      points.emplace_back(r.episodes[i].final_x, r.episodes[i].final_y);
    }
  }
  return maze::bin_positions(layout, points);
}

void write_position_csv(const std::filesystem::path& path, const maze::MazeLayout& layout,
                        const std::vector<std::vector<int>>& counts) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (int row = layout.rows() - 1; row >= 0; --row) {
    for (int col = 0; col < layout.cols(); ++col) {
      if (col) out << ',';
      out << (layout.is_wall(col, row) ? -1 : counts[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]);
    }
    out << '\n';
  }
}

}  // namespace least::harness
