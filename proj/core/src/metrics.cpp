#include <algorithm>
#include <cmath>
#include <numeric>

#include "parrot/simulator.hpp"

namespace parrot::sim {
namespace {

// Nearest-rank percentile of a sorted sample.
double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

RunMetrics collect_metrics(std::span<const PacketRecord> packets, std::uint64_t chirp_frames,
                           std::size_t chirp_frame_bytes, double optimal_bound) {
  RunMetrics m;
  m.sent = packets.size();
  for (const PacketRecord& p : packets) {
    if (p.state == PacketState::delivered) {
      ++m.delivered;
      m.latencies.push_back(p.delivered_at - p.emitted);
    } else {
      m.drops.add(p.cause.value_or(DropCause::queue));
    }
  }
  m.pdr = m.sent == 0 ? kUndefinedPdr
                      : static_cast<double>(m.delivered) / static_cast<double>(m.sent);

  if (!m.latencies.empty()) {
    m.latency_mean = std::accumulate(m.latencies.begin(), m.latencies.end(), 0.0) /
                     static_cast<double>(m.latencies.size());
    std::vector<double> sorted = m.latencies;
    std::sort(sorted.begin(), sorted.end());
    m.latency_p50 = percentile(sorted, 0.50);
    m.latency_p99 = percentile(sorted, 0.99);
  }
  m.chirp_frames = chirp_frames;
  m.overhead_bytes = chirp_frames * chirp_frame_bytes;
  m.optimal_bound = optimal_bound;
  return m;
}

}  // namespace parrot::sim
