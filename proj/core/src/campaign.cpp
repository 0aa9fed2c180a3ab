#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numeric>
#include <thread>

#include "parrot/campaign.hpp"
#include "parrot/errors.hpp"

namespace parrot::campaign {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t point, std::size_t run) {
  // splitmix64 is a bijection, so distinct (point, run) give distinct seeds.
  const std::uint64_t key = (static_cast<std::uint64_t>(point) << 32) |
                            (static_cast<std::uint64_t>(run) & 0xFFFFFFFFULL);
  return base_seed ^ splitmix64(key);
}

MeanCi mean_ci95(const std::vector<double>& samples) {
  MeanCi out;
  if (samples.empty()) return out;
  out.mean = mean_of(samples);
  if (samples.size() < 2) return out;
  double ss = 0.0;
  for (double x : samples) ss += (x - out.mean) * (x - out.mean);
  const double n = static_cast<double>(samples.size());
  out.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

sim::Scenario cell_scenario(const CampaignConfig& cfg, std::size_t point, std::size_t run) {
  sim::Scenario s = cfg.base;
  if (!cfg.sweep_param.empty()) apply_sweep_value(s, cfg.sweep_param, cfg.sweep_values.at(point));
  s.seed = derive_seed(cfg.base_seed, point, run);
  return s;
}

CellResult run_cell(const CampaignConfig& cfg, std::size_t point, std::size_t run) {
  try {
    sim::Scenario s = cell_scenario(cfg, point, run);
    CellResult out{point, run, s.seed, {}};
    sim::Simulation simulation(std::move(s));
    out.metrics = simulation.run();
    if (cfg.trace) {
      const auto path = std::filesystem::path(cfg.output_dir) /
                        ("trace_p" + std::to_string(point) + "_r" + std::to_string(run) + ".txt");
      sim::write_trace(simulation.trace(), path.string());
    }
    return out;
  } catch (const ConfigError& e) {
    std::string where = "point " + std::to_string(point);
    if (!cfg.sweep_param.empty() && point < cfg.sweep_values.size()) {
      where += " (" + cfg.sweep_param + "=" + format_number(cfg.sweep_values[point]) + ")";
    }
    throw ConfigError(where + ", run " + std::to_string(run) + ": " + e.what());
  }
}

PointSummary summarize(double sweep_value, const std::vector<sim::RunMetrics>& runs) {
  PointSummary p;
  p.sweep_value = sweep_value;
  p.runs = runs.size();

  std::vector<double> pdr, latency, p99, overhead, bound;
  std::vector<double> no_route, ttl, collision, channel, queue;
  for (const auto& m : runs) {
    if (m.pdr != sim::kUndefinedPdr) pdr.push_back(m.pdr);
    if (m.delivered > 0) {
      latency.push_back(m.latency_mean);
      p99.push_back(m.latency_p99);
    }
    overhead.push_back(static_cast<double>(m.overhead_bytes));
    bound.push_back(m.optimal_bound);
    no_route.push_back(static_cast<double>(m.drops.no_route));
    ttl.push_back(static_cast<double>(m.drops.ttl));
    collision.push_back(static_cast<double>(m.drops.collision));
    channel.push_back(static_cast<double>(m.drops.channel));
    queue.push_back(static_cast<double>(m.drops.queue));
  }
  p.pdr = mean_ci95(pdr);
  p.latency = mean_ci95(latency);
  p.latency_p99 = mean_of(p99);
  p.overhead_bytes = mean_of(overhead);
  p.optimal_bound_mean = mean_of(bound);
  p.drops_no_route = mean_of(no_route);
  p.drops_ttl = mean_of(ttl);
  p.drops_collision = mean_of(collision);
  p.drops_channel = mean_of(channel);
  p.drops_queue = mean_of(queue);
  return p;
}

CampaignResult run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  const std::size_t points = cfg.point_count();
  const std::size_t total = points * cfg.runs;

  CampaignResult result;
  result.cells.resize(total);

  std::size_t jobs = cfg.jobs != 0 ? cfg.jobs : std::max(1U, std::thread::hardware_concurrency());
  jobs = std::min(jobs, total);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(total);
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        result.cells[i] = run_cell(cfg, i / cfg.runs, i % cfg.runs);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  // Report the first failing cell in (point, run) order, not completion order.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t p = 0; p < points; ++p) {
    std::vector<sim::RunMetrics> runs;
    for (std::size_t r = 0; r < cfg.runs; ++r) runs.push_back(result.cells[p * cfg.runs + r].metrics);
    const double value = cfg.sweep_values.empty() ? 0.0 : cfg.sweep_values[p];
    result.points.push_back(summarize(value, runs));
  }
  return result;
}

}  // namespace parrot::campaign
