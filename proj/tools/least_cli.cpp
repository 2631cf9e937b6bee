#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include "least/errors.hpp"
#include "least/harness/compare.hpp"
#include "least/harness/config.hpp"
#include "least/harness/run_io.hpp"
#include "least/harness/training.hpp"
#include "least/nn/snapshot.hpp"

namespace fs = std::filesystem;
using namespace least;

namespace {

struct RunOptions {
  std::string config_path;
  std::string maze;
  std::string mode;
  std::string seeds;
  std::string out;
  std::int64_t steps = -1;
  int jobs = 1;
  bool quiet = false;
};

int cmd_run(const RunOptions& o) {
  harness::ExperimentConfig cfg = o.config_path.empty()
                                      ? harness::default_config(maze::size_class_from_string(o.maze.empty() ? "small" : o.maze))
                                      : harness::load_config(o.config_path);
  if (!o.mode.empty()) cfg.mode = harness::run_mode_from_string(o.mode);
  if (!o.seeds.empty()) cfg.seeds = harness::parse_seed_list(o.seeds);
  if (o.steps >= 0) cfg.total_steps = o.steps;
  if (!o.out.empty()) cfg.output_dir = o.out;
  harness::validate(cfg);

  const fs::path root = cfg.output_dir;
  fs::create_directories(root);
  nn::save_json(harness::config_to_json(cfg), root / "config.json");

  std::mutex io;
  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      const std::uint64_t seed = cfg.seeds[i];
      const auto t0 = std::chrono::steady_clock::now();
      const fs::path dir = harness::seed_dir(root, seed);
      try {
        auto progress = [&](const harness::CurveRow& r) {
          if (o.quiet) return;
          std::lock_guard lock(io);
          std::printf("[%s seed %llu] step %lld score %.1f K %d sigma %.3f beta %.2f\n",
                      harness::to_string(cfg.mode).c_str(), static_cast<unsigned long long>(seed),
                      static_cast<long long>(r.step), r.score_mean, r.capacity, r.sigma, r.beta);
          std::fflush(stdout);
        };
        const auto rec = harness::run_training(cfg, seed, progress);
        harness::write_run(dir, rec, cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::lock_guard lock(io);
        std::printf("[%s seed %llu] done: %zu episodes, %lld forced stops, %.1fs -> %s\n",
                    harness::to_string(cfg.mode).c_str(), static_cast<unsigned long long>(seed), rec.episodes.size(),
                    static_cast<long long>(rec.forced_stops()), secs, dir.string().c_str());
      } catch (const harness::TrainingAborted& e) {
        fs::create_directories(dir);
        nn::save_json(e.diagnostic(), dir / "diagnostic.json");
        std::lock_guard lock(io);
        std::fprintf(stderr, "seed %llu: %s (diagnostic.json written)\n", static_cast<unsigned long long>(seed), e.what());
        ++failures;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(o.jobs, static_cast<int>(cfg.seeds.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return failures ? 2 : 0;
}

std::vector<harness::RunRecord> read_runs(const fs::path& root) {
  std::vector<harness::RunRecord> out;
  for (const auto& dir : harness::find_run_dirs(root)) out.push_back(harness::read_run(dir));
  if (out.empty()) throw FormatError("no runs found under " + root.string());
  return out;
}

int cmd_compare(const std::string& vanilla_dir, const std::string& least_dir, const std::string& out, int window) {
  const auto c = harness::compare_runs(read_runs(vanilla_dir), read_runs(least_dir), window);
  std::cout << harness::format_comparison_table(c);
  if (!out.empty()) {
    fs::create_directories(out);
    harness::write_comparison_csv(fs::path(out) / "comparison.csv", c);
    nn::save_json(harness::comparison_json(c), fs::path(out) / "comparison.json");
  }
  return 0;
}

int cmd_positions(const std::string& runs_dir, std::size_t last, const std::string& out) {
  const auto runs = read_runs(runs_dir);
  const auto layout = maze::MazeLayout::parse(runs.front().layout_text, maze::SizeClass::kSmall);
  const auto counts = harness::position_histogram(runs, layout, last);
  const fs::path path = out.empty() ? fs::path(runs_dir) / "positions.csv" : fs::path(out);
  harness::write_position_csv(path, layout, counts);
  for (int row = layout.rows() - 1; row >= 0; --row) {
    for (int col = 0; col < layout.cols(); ++col) {
      if (layout.is_wall(col, row)) {
        std::printf("    #");
      } else {
        std::printf("%5d", counts[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]);
      }
    }
    std::printf("\n");
  }
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Early-stopping TD3 experiments on point mazes"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "train seeded runs and write curve.csv / stops.csv / summary.json");
  run_cmd->add_option("--config", run.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  run_cmd->add_option("--maze", run.maze, "small|medium|large (defaults when no --config)");
  run_cmd->add_option("--mode", run.mode, "vanilla|least");
  run_cmd->add_option("--seeds", run.seeds, "seed range like 0..4 or list like 0,2,5");
  run_cmd->add_option("--out", run.out, "output directory (one seed_<n>/ per seed)");
  run_cmd->add_option("--steps", run.steps, "override total_steps");
  run_cmd->add_option("--jobs", run.jobs, "seeds trained in parallel")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--quiet", run.quiet, "no per-eval progress lines");

  std::string vanilla_dir, least_dir, compare_out;
  int window = 5;
  auto* cmp_cmd = app.add_subcommand("compare", "summarize vanilla vs least run directories");
  cmp_cmd->add_option("--vanilla", vanilla_dir)->required();
  cmp_cmd->add_option("--least", least_dir)->required();
  cmp_cmd->add_option("--out", compare_out, "write comparison.csv and comparison.json here");
  cmp_cmd->add_option("--final-window", window, "eval rows averaged into the final score")->check(CLI::PositiveNumber);

  std::string runs_dir, pos_out;
  std::size_t last = 50;
  auto* pos_cmd = app.add_subcommand("positions", "histogram of final positions of the last episodes");
  pos_cmd->add_option("--runs", runs_dir)->required();
  pos_cmd->add_option("--last", last, "episodes per run");
  pos_cmd->add_option("--out", pos_out, "CSV path (default <runs>/positions.csv)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return cmd_run(run);
    if (*cmp_cmd) return cmd_compare(vanilla_dir, least_dir, compare_out, window);
    if (*pos_cmd) return cmd_positions(runs_dir, last, pos_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
