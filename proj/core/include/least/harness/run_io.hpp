#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "least/harness/training.hpp"

namespace least::harness {

inline constexpr const char* kCurveHeader =
    "step,score_mean,score_std,K,sigma,beta,frac_lowq_lowloss,frac_lowq_highloss,"
    "frac_highq_lowloss,frac_highq_highloss,fau_actor,fau_critic";
inline constexpr const char* kStopsHeader = "episode,end_step,stop_step,forced,reached_goal,final_x,final_y";
inline constexpr const char* kMidpointHeader = "q_hat,td_error_mag";

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

void write_curve_csv(const std::filesystem::path& path, const std::vector<CurveRow>& rows);
std::vector<CurveRow> read_curve_csv(const std::filesystem::path& path);

void write_stops_csv(const std::filesystem::path& path, const std::vector<EpisodeLogEntry>& episodes);
std::vector<EpisodeLogEntry> read_stops_csv(const std::filesystem::path& path);

void write_midpoint_csv(const std::filesystem::path& path, const agent::BatchProbe& probe);
agent::BatchProbe read_midpoint_csv(const std::filesystem::path& path);

nlohmann::json run_summary(const RunRecord& record, const ExperimentConfig& config);

/// Writes curve.csv, stops.csv, summary.json and (when present)
/// midpoint_probe.csv into `dir`, creating it if needed.
void write_run(const std::filesystem::path& dir, const RunRecord& record, const ExperimentConfig& config);

/// Inverse of write_run. Throws FormatError on schema mismatches.
RunRecord read_run(const std::filesystem::path& dir);

/// Run directories (seed_*) under `root`, sorted by seed. A directory that
/// itself holds curve.csv is returned alone.
std::vector<std::filesystem::path> find_run_dirs(const std::filesystem::path& root);

std::filesystem::path seed_dir(const std::filesystem::path& root, std::uint64_t seed);

}  // namespace least::harness
