#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>

#include "parrot/errors.hpp"
#include "parrot/simulator.hpp"

namespace parrot::sim {

const std::vector<Vec3>& PositionTrace::at(double time) const {
  const double k = std::floor(time / dt + 1e-9);
  const auto last = snapshots.size() - 1;
  if (k <= 0.0) return snapshots.front();
  return snapshots[std::min(static_cast<std::size_t>(k), last)];
}

bool disk_reachable(std::span<const Vec3> positions, double r_tx, NodeId from, NodeId to) {
  if (from == to) return true;
  std::vector<bool> seen(positions.size(), false);
  std::queue<NodeId> frontier;
  frontier.push(from);
  seen[from] = true;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v = 0; v < positions.size(); ++v) {
      if (seen[v] || distance(positions[u], positions[v]) > r_tx) continue;
      if (v == to) return true;
      seen[v] = true;
      frontier.push(v);
    }
  }
  return false;
}

double optimal_pdr_bound(const PositionTrace& trace, double r_tx,
                         std::span<const double> emission_times, NodeId sender,
                         NodeId receiver) {
  if (emission_times.empty() || trace.snapshots.empty()) return 0.0;

  // Many emissions share a snapshot; evaluate each snapshot once.
  const std::vector<Vec3>* cached_snapshot = nullptr;
  bool cached = false;
  std::size_t reachable = 0;
  for (double t : emission_times) {
    const auto& snap = trace.at(t);
    if (&snap != cached_snapshot) {
      cached_snapshot = &snap;
      cached = disk_reachable(snap, r_tx, sender, receiver);
    }
    if (cached) ++reachable;
  }
  return static_cast<double>(reachable) / static_cast<double>(emission_times.size());
}

std::optional<NodeId> greedy_next_hop(std::span<const NeighborPosition> neighbors,
                                      const Vec3& self, const Vec3& dest) {
  std::optional<NodeId> best;
  double best_dist = distance(self, dest);
  for (const NeighborPosition& n : neighbors) {
    const double d = distance(n.position, dest);
    if (d < best_dist || (best && d == best_dist && n.id < *best)) {
      best_dist = d;
      best = n.id;
    }
  }
  return best;
}

void write_trace(const PositionTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open trace file " + path);

  char buf[64];
  auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
    out.write(buf, res.ptr - buf);
  };
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    const double t = static_cast<double>(k) * trace.dt;
    const auto& snap = trace.snapshots[k];
    for (std::size_t n = 0; n < snap.size(); ++n) {
      put(t);
      out << ' ' << n << ' ';
      put(snap[n].x);
      out << ' ';
      put(snap[n].y);
      out << ' ';
      put(snap[n].z);
      out << '\n';
    }
  }
  if (!out) throw IoError("failed writing trace file " + path);
}

}  // namespace parrot::sim
