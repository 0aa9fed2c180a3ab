#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parrot/channel.hpp"
#include "parrot/kinematics.hpp"
#include "parrot/mac.hpp"
#include "parrot/routing.hpp"
#include "parrot/vec3.hpp"

namespace parrot::sim {

enum class Protocol { parrot, greedy, flood };

struct TrafficConfig {
  double cbr_rate_bps = 2e6;
  std::size_t payload_bytes = 1400;

  double packet_interval() const {
    return static_cast<double>(payload_bytes) * 8.0 / cbr_rate_bps;
  }
};

struct Scenario {
  kinematics::Box box;
  std::size_t nodes = 10;
  double speed = 50.0 / 3.6;
  double duration = 900.0;
  /// Application packets are emitted in [warmup, duration).
  double warmup = 30.0;
  /// Extra time after `duration` for in-flight packets to drain.
  double drain = 1.0;
  TrafficConfig traffic;
  Protocol protocol = Protocol::parrot;
  kinematics::MobilityConfig mobility;
  /// r_tx is overwritten with compute_r_tx(budget) when the run starts.
  routing::RoutingParams routing;
  channel::LinkBudget budget = channel::LinkBudget::for_range(200.0);
  channel::Model channel = channel::Model::rural;
  MacConfig mac;
  std::uint32_t data_hop_budget = 32;
  std::uint64_t seed = 1;

  /// Static placement; when non-empty it must hold one position per node and
  /// nodes do not move.
  std::vector<Vec3> fixed_positions;
  /// Sender/receiver override; drawn from the seed when absent.
  std::optional<std::pair<NodeId, NodeId>> flow;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct DropCounts {
  std::uint64_t no_route = 0;
  std::uint64_t ttl = 0;
  std::uint64_t collision = 0;
  std::uint64_t channel = 0;
  std::uint64_t queue = 0;

  std::uint64_t total() const { return no_route + ttl + collision + channel + queue; }
  void add(DropCause cause);
  friend bool operator==(const DropCounts&, const DropCounts&) = default;
};

inline constexpr double kUndefinedPdr = -1.0;

struct RunMetrics {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  /// delivered / sent, or kUndefinedPdr when nothing was sent.
  double pdr = kUndefinedPdr;
  std::vector<double> latencies;
  double latency_mean = 0.0;
  double latency_p50 = 0.0;
  double latency_p99 = 0.0;
  std::uint64_t chirp_frames = 0;
  std::uint64_t overhead_bytes = 0;
  DropCounts drops;
  double optimal_bound = 0.0;
  NodeId sender = 0;
  NodeId receiver = 0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

enum class PacketState : std::uint8_t { in_flight, delivered, dropped };

/// Per-application-packet outcome tracked during a run.
struct PacketRecord {
  double emitted = 0.0;
  double delivered_at = 0.0;
  PacketState state = PacketState::in_flight;
  std::optional<DropCause> cause;
};

/// Reduces packet outcomes to metrics. In-flight packets count as queue drops.
RunMetrics collect_metrics(std::span<const PacketRecord> packets, std::uint64_t chirp_frames,
                           std::size_t chirp_frame_bytes, double optimal_bound);

/// Node positions sampled on every mobility tick: snapshots[k] holds time k*dt.
struct PositionTrace {
  double dt = 0.1;
  std::vector<std::vector<Vec3>> snapshots;

  const std::vector<Vec3>& at(double time) const;
};

/// Fraction of emission times at which receiver is reachable from sender in the
/// disk graph of radius r_tx. Mobility-only ceiling; ignores load.
double optimal_pdr_bound(const PositionTrace& trace, double r_tx,
                         std::span<const double> emission_times, NodeId sender,
                         NodeId receiver);

/// Breadth-first reachability in the unit-disk graph over `positions`.
bool disk_reachable(std::span<const Vec3> positions, double r_tx, NodeId from, NodeId to);

struct NeighborPosition {
  NodeId id = 0;
  Vec3 position;
};

/// Greedy geographic forwarding: the neighbor strictly closer to `dest` than
/// `self` with minimal distance; lowest id on ties.
std::optional<NodeId> greedy_next_hop(std::span<const NeighborPosition> neighbors,
                                      const Vec3& self, const Vec3& dest);

/// Line-oriented trace: "time node x y z" per node per tick.
void write_trace(const PositionTrace& trace, const std::string& path);

/// One deterministic run of a scenario. The object keeps its state after run()
/// so tests can inspect routing tables and traces.
class Simulation {
 public:
  explicit Simulation(Scenario scenario);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  RunMetrics run();

  const Scenario& scenario() const;
  const routing::RoutingState& routing(NodeId node) const;
  const PositionTrace& trace() const;
  NodeId sender() const;
  NodeId receiver() const;
  double r_tx() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Validates and executes a scenario.
RunMetrics run(const Scenario& scenario);

}  // namespace parrot::sim
