#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parrot/simulator.hpp"

namespace parrot::campaign {

struct CampaignConfig {
  sim::Scenario base;
  /// Empty means a single point at the base scenario.
  std::string sweep_param;
  std::vector<double> sweep_values;
  std::size_t runs = 25;
  std::uint64_t base_seed = 1;
  std::string output_dir = ".";
  bool trace = false;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t jobs = 0;

  void validate() const;
  std::size_t point_count() const { return sweep_values.empty() ? 1 : sweep_values.size(); }
};

/// Parses `key = value` lines ('#' starts a comment) into `cfg`, then applies
/// each `overrides` entry ("key=value") on top. Unknown keys, unparseable
/// values and constraint violations throw ConfigError naming the key and line.
void parse_config(std::istream& in, std::string_view source_name,
                  const std::vector<std::string>& overrides, CampaignConfig& cfg);

/// Built-in defaults plus `path` (if non-empty) plus overrides.
CampaignConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Applies one key to a scenario or campaign. Throws ConfigError on unknown keys.
void apply_setting(CampaignConfig& cfg, std::string_view key, std::string_view value);

/// Sets a sweepable numeric parameter on a scenario.
void apply_sweep_value(sim::Scenario& scenario, std::string_view param, double value);

/// base_seed XOR splitmix64((point << 32) | run).
std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t point, std::size_t run);

struct CellResult {
  std::size_t point = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  sim::RunMetrics metrics;
};

struct MeanCi {
  double mean = 0.0;
  double ci95 = 0.0;
};

/// Sample mean and 1.96 * s / sqrt(n) half-width; ci95 = 0 when n < 2.
MeanCi mean_ci95(const std::vector<double>& samples);

struct PointSummary {
  double sweep_value = 0.0;
  std::size_t runs = 0;
  MeanCi pdr;
  MeanCi latency;
  double latency_p99 = 0.0;
  double overhead_bytes = 0.0;
  double optimal_bound_mean = 0.0;
  double drops_no_route = 0.0;
  double drops_ttl = 0.0;
  double drops_collision = 0.0;
  double drops_channel = 0.0;
  double drops_queue = 0.0;
};

struct CampaignResult {
  std::vector<CellResult> cells;  ///< sorted by (point, run)
  std::vector<PointSummary> points;
};

/// Builds the scenario for one cell: base + sweep value + derived seed.
sim::Scenario cell_scenario(const CampaignConfig& cfg, std::size_t point, std::size_t run);

PointSummary summarize(double sweep_value, const std::vector<sim::RunMetrics>& runs);

/// Executes every (point, run) cell, optionally in parallel; output is
/// independent of scheduling. Throws ConfigError identifying the failing point.
CampaignResult run_campaign(const CampaignConfig& cfg);

/// Runs a single cell (the --only path).
CellResult run_cell(const CampaignConfig& cfg, std::size_t point, std::size_t run);

inline constexpr std::string_view kCsvHeader =
    "sweep_value,runs,pdr_mean,pdr_ci95,latency_mean_s,latency_ci95_s,latency_p99_s,"
    "overhead_bytes,optimal_bound_mean,drops_no_route,drops_ttl,drops_collision,"
    "drops_channel,drops_queue";

/// Fixed-point, six decimals, locale independent.
std::string format_number(double value);

std::string to_csv(const std::vector<PointSummary>& points);

/// Writes the CSV. Throws ConfigError on empty input, IoError naming the path on failure.
void emit_csv(const std::vector<PointSummary>& points, const std::filesystem::path& path);

/// Parses a CSV produced by to_csv back into summaries.
std::vector<PointSummary> parse_csv(std::string_view text);

}  // namespace parrot::campaign
