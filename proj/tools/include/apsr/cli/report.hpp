#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "apsr/sim.hpp"
#include "apsr/workload.hpp"
#include "apsr/cli/config.hpp"

namespace apsr::cli {

inline constexpr const char* kToolVersion = "0.1.0";
/// Bumped whenever a CSV column set changes.
inline constexpr int kSchemaVersion = 1;

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_number(double value);

[[nodiscard]] std::string analyze_header();
[[nodiscard]] std::string runs_header();
[[nodiscard]] std::string series_header();
[[nodiscard]] std::string sizing_header();

struct AnalyzeRow {
  std::int64_t n = 0;
  double delta_hat = 0.0;
  std::int64_t budget = 0;
  std::int64_t k = 0;
  std::int64_t s = 0;
  std::int64_t d = 0;
  double expected_happy = 0.0;
};

[[nodiscard]] AnalyzeRow analyze_row(std::int64_t n, double delta_hat, std::int64_t budget, std::int64_t k);
void write_analyze_row(std::ostream& out, const AnalyzeRow& row);

void write_run_row(std::ostream& out, std::uint64_t seed, const RunMetrics& m);
/// Per-slot rows; delta_so_far is the cumulative decline ratio up to the slot.
void write_series(std::ostream& out, const std::vector<SlotMetrics>& series);
void write_sizing_rows(std::ostream& out, const SizingReport& report);

struct SeedRun {
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

struct Aggregate {
  double mean = 0.0;
  double stderr_ = 0.0;  // standard error of the mean across seeds; 0 for one seed
};

[[nodiscard]] Aggregate aggregate(const std::vector<double>& values);

[[nodiscard]] nlohmann::ordered_json metrics_to_json(const RunMetrics& m);
[[nodiscard]] RunMetrics metrics_from_json(const nlohmann::json& j);

/// The run manifest: config echo, seeds, tool version, per-run metrics, and
/// mean / standard error across seeds.
[[nodiscard]] nlohmann::ordered_json build_manifest(const std::string& preset, const Settings& config_echo,
                                                    const std::vector<SeedRun>& runs);
/// The config echo of a manifest, ready for to_experiment.
[[nodiscard]] Settings manifest_settings(const nlohmann::json& manifest);

}  // namespace apsr::cli
