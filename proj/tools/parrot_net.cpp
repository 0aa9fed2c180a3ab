// parrot-net: runs seeded simulation campaigns and writes plot-ready CSV.
//
//   parrot-net run --config FILE [--set k=v]... [--seed N] [--runs N]
//                  [--protocol parrot|greedy|flood] [--channel rural|urban]
//                  [--out DIR] [--trace] [--only point=I,run=J] [--jobs N]
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#if __has_include("CLI11.hpp")
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif
#include "parrot/campaign.hpp"
#include "parrot/errors.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct RunOptions {
  std::string config;
  std::vector<std::string> sets;
  std::string seed;
  std::string runs;
  std::string protocol;
  std::string channel;
  std::string out;
  std::string only;
  std::string jobs;
  bool trace = false;
};

std::pair<std::size_t, std::size_t> parse_only(const std::string& spec) {
  std::size_t point = 0;
  std::size_t run = 0;
  bool have_point = false;
  bool have_run = false;
  std::string_view rest = spec;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw parrot::ConfigError("--only expects point=I,run=J");
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    try {
      if (key == "point") {
        point = std::stoul(value);
        have_point = true;
      } else if (key == "run") {
        run = std::stoul(value);
        have_run = true;
      } else {
        throw parrot::ConfigError("--only: unknown field '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw parrot::ConfigError("--only: bad number '" + value + "'");
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (!have_point || !have_run) throw parrot::ConfigError("--only expects point=I,run=J");
  return {point, run};
}

void print_summary(const std::vector<parrot::campaign::PointSummary>& points,
                   const std::string& param) {
  std::printf("%-12s %5s %10s %10s %12s %10s\n", param.empty() ? "point" : param.c_str(), "runs",
              "pdr", "pdr_ci95", "latency_ms", "optimal");
  for (const auto& p : points) {
    std::printf("%-12s %5zu %10.4f %10.4f %12.3f %10.4f\n",
                parrot::campaign::format_number(p.sweep_value).c_str(), p.runs, p.pdr.mean,
                p.pdr.ci95, p.latency.mean * 1e3, p.optimal_bound_mean);
  }
}

int run_command(const RunOptions& opt) {
  using namespace parrot::campaign;

  std::vector<std::string> overrides = opt.sets;
  if (!opt.seed.empty()) overrides.push_back("seed=" + opt.seed);
  if (!opt.runs.empty()) overrides.push_back("runs=" + opt.runs);
  if (!opt.protocol.empty()) overrides.push_back("protocol=" + opt.protocol);
  if (!opt.channel.empty()) overrides.push_back("channel=" + opt.channel);
  if (!opt.out.empty()) overrides.push_back("output_dir=" + opt.out);
  if (!opt.jobs.empty()) overrides.push_back("jobs=" + opt.jobs);
  if (opt.trace) overrides.push_back("trace=true");

  CampaignConfig cfg = load_config(opt.config, overrides);

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw parrot::IoError("cannot create output directory " + cfg.output_dir);

  if (!opt.only.empty()) {
    const auto [point, run] = parse_only(opt.only);
    if (point >= cfg.point_count() || run >= cfg.runs) {
      throw parrot::ConfigError("--only: cell outside the campaign grid");
    }
    const CellResult cell = run_cell(cfg, point, run);
    const double value = cfg.sweep_values.empty() ? 0.0 : cfg.sweep_values[point];
    const std::vector<PointSummary> rows{summarize(value, {cell.metrics})};
    const auto path = std::filesystem::path(cfg.output_dir) /
                      ("cell_p" + std::to_string(point) + "_r" + std::to_string(run) + ".csv");
    emit_csv(rows, path);
    std::printf("seed %llu sender %u receiver %u\n", static_cast<unsigned long long>(cell.seed),
                cell.metrics.sender, cell.metrics.receiver);
    print_summary(rows, cfg.sweep_param);
    return 0;
  }

  const CampaignResult result = run_campaign(cfg);
  const auto path = std::filesystem::path(cfg.output_dir) / "results.csv";
  emit_csv(result.points, path);
  print_summary(result.points, cfg.sweep_param);
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PARRoT predictive ad-hoc routing simulator"};
  app.require_subcommand(1);

  RunOptions opt;
  CLI::App* run = app.add_subcommand("run", "Run a campaign described by a config file");
  run->add_option("--config", opt.config, "key = value configuration file");
  run->add_option("--set", opt.sets, "Override a key (key=value); repeatable");
  run->add_option("--seed", opt.seed, "Base seed");
  run->add_option("--runs", opt.runs, "Runs per sweep point");
  run->add_option("--protocol", opt.protocol, "parrot | greedy | flood");
  run->add_option("--channel", opt.channel, "rural | urban");
  run->add_option("--out", opt.out, "Output directory");
  run->add_option("--only", opt.only, "Re-execute one cell: point=I,run=J");
  run->add_option("--jobs", opt.jobs, "Worker threads (0 = all cores)");
  run->add_flag("--trace", opt.trace, "Write per-run position traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return run_command(opt);
  } catch (const parrot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const parrot::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
}
