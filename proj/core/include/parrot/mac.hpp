#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "parrot/channel.hpp"
#include "parrot/chirp.hpp"
#include "parrot/event_queue.hpp"
#include "parrot/vec3.hpp"

namespace parrot::sim {

inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

enum class DropCause : std::uint8_t { no_route, ttl, collision, channel, queue };

struct MacConfig {
  double link_rate_bps = 24e6;
  std::size_t header_bytes = 56;  ///< MAC + IPv4 + UDP headers charged per frame
  std::size_t queue_limit = 100;
  int unicast_retries = 3;
  double retry_backoff = 1e-3;
  /// Upper bound of the uniform delay applied before rebroadcasting a frame.
  double broadcast_jitter = 5e-3;

  void validate() const;
};

enum class PayloadKind : std::uint8_t { chirp, data };

struct DataPacket {
  std::uint64_t id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  std::uint32_t hops = 0;
  double emitted = 0.0;
};

struct Frame {
  NodeId sender = 0;
  NodeId link_dest = kBroadcast;
  PayloadKind kind = PayloadKind::chirp;
  std::size_t size_bytes = 0;
  double enqueued = 0.0;
  chirp::Frame chirp_bytes{};
  DataPacket data;

  bool is_broadcast() const { return link_dest == kBroadcast; }
};

/// Idealized shared medium: per-node FIFO, no carrier sense. A reception is
/// lost when any other reception or the receiver's own transmission overlaps it.
/// Unicast frames are retried after a fixed backoff; broadcasts never are.
class Medium {
 public:
  struct Hooks {
    std::function<void(NodeId receiver, const Frame&, double now)> deliver;
    std::function<void(const Frame&, DropCause, double now)> drop;
  };

  Medium(MacConfig cfg, channel::LinkBudget budget, channel::Model model,
         const std::vector<Vec3>& positions, std::uint64_t seed, EventQueue& events,
         Hooks hooks);

  /// Queues a frame at `node`. Returns false (and reports a queue drop) on overflow.
  bool transmit(NodeId node, Frame frame, double now);

  void on_tx_start(NodeId node, double now);
  void on_tx_end(NodeId node, double now);

  double airtime(std::size_t size_bytes) const;
  double r_tx() const { return r_tx_; }
  std::size_t queue_length(NodeId node) const { return nodes_[node].queue.size(); }

  /// Frames still queued or in flight, for end-of-run accounting.
  std::vector<Frame> pending_frames() const;

 private:
  struct Reception {
    std::uint64_t tx_id;
    double end;
    bool corrupted;
  };
  struct Transmission {
    std::uint64_t id = 0;
    std::vector<NodeId> receivers;
  };
  struct NodeMac {
    std::deque<Frame> queue;
    bool transmitting = false;
    bool waiting = false;  ///< tx_start scheduled (backoff or immediate)
    int attempts = 0;
    DropCause last_failure = DropCause::channel;
    Transmission current;
    std::vector<Reception> receptions;
  };

  void schedule_start(NodeId node, double at);

  MacConfig cfg_;
  channel::LinkBudget budget_;
  channel::Model model_;
  double r_tx_;
  const std::vector<Vec3>& positions_;
  std::mt19937_64 rng_;
  EventQueue& events_;
  Hooks hooks_;
  std::vector<NodeMac> nodes_;
  std::uint64_t next_tx_id_ = 1;
};

}  // namespace parrot::sim
