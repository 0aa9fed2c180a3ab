#include "parrot/mac.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "parrot/errors.hpp"

namespace parrot::sim {

void MacConfig::validate() const {
  if (!(link_rate_bps > 0.0)) throw ConfigError("link_rate must be > 0");
  if (queue_limit == 0) throw ConfigError("queue_limit must be >= 1");
  if (unicast_retries < 0) throw ConfigError("unicast_retries must be >= 0");
  if (!(retry_backoff >= 0.0)) throw ConfigError("retry_backoff must be >= 0");
  if (!(broadcast_jitter >= 0.0)) throw ConfigError("broadcast_jitter must be >= 0");
}

Medium::Medium(MacConfig cfg, channel::LinkBudget budget, channel::Model model,
               const std::vector<Vec3>& positions, std::uint64_t seed, EventQueue& events,
               Hooks hooks)
    : cfg_(cfg),
      budget_(budget),
      model_(model),
      r_tx_(channel::compute_r_tx(budget)),
      positions_(positions),
      rng_(seed),
      events_(events),
      hooks_(std::move(hooks)),
      nodes_(positions.size()) {
  cfg_.validate();
}

double Medium::airtime(std::size_t size_bytes) const {
  return static_cast<double>(size_bytes) * 8.0 / cfg_.link_rate_bps;
}

void Medium::schedule_start(NodeId node, double at) {
  nodes_[node].waiting = true;
  events_.push(at, EventKind::tx_start, node);
}

bool Medium::transmit(NodeId node, Frame frame, double now) {
  NodeMac& n = nodes_[node];
  if (n.queue.size() >= cfg_.queue_limit) {
    hooks_.drop(frame, DropCause::queue, now);
    return false;
  }
  frame.enqueued = now;
  n.queue.push_back(std::move(frame));
  if (!n.transmitting && !n.waiting) schedule_start(node, now);
  return true;
}

void Medium::on_tx_start(NodeId node, double now) {
  NodeMac& n = nodes_[node];
  n.waiting = false;
  if (n.queue.empty() || n.transmitting) return;

  const Frame& frame = n.queue.front();
  const double end = now + airtime(frame.size_bytes);
  n.transmitting = true;
  n.current.id = next_tx_id_++;
  n.current.receivers.clear();

  // Half duplex: whatever this node was receiving is lost.
  for (Reception& r : n.receptions) r.corrupted = true;

  const Vec3& origin = positions_[node];
  for (NodeId m = 0; m < nodes_.size(); ++m) {
    if (m == node) continue;
    const double d = distance(origin, positions_[m]);
    if (!channel::receive(budget_, model_, d, r_tx_, rng_)) continue;

    NodeMac& rx = nodes_[m];
    bool corrupted = rx.transmitting;
    for (Reception& other : rx.receptions) {
      if (other.end > now) {
        other.corrupted = true;
        corrupted = true;
      }
    }
    rx.receptions.push_back(Reception{n.current.id, end, corrupted});
    n.current.receivers.push_back(m);
  }
  events_.push(end, EventKind::tx_end, node);
}

void Medium::on_tx_end(NodeId node, double now) {
  NodeMac& n = nodes_[node];
  n.transmitting = false;
  const Frame frame = n.queue.front();
  const std::uint64_t tx_id = n.current.id;

  std::vector<NodeId> delivered;
  bool dest_heard = false;
  for (NodeId m : n.current.receivers) {
    auto& list = nodes_[m].receptions;
    const auto it = std::find_if(list.begin(), list.end(),
                                 [&](const Reception& r) { return r.tx_id == tx_id; });
    const bool ok = it != list.end() && !it->corrupted;
    if (it != list.end()) list.erase(it);
    if (m == frame.link_dest) dest_heard = true;
    if (ok && (frame.is_broadcast() || m == frame.link_dest)) delivered.push_back(m);
  }

  std::optional<DropCause> dropped;
  if (frame.is_broadcast() || !delivered.empty()) {
    n.queue.pop_front();
    n.attempts = 0;
  } else {
    ++n.attempts;
    n.last_failure = dest_heard ? DropCause::collision : DropCause::channel;
    if (n.attempts <= cfg_.unicast_retries) {
      schedule_start(node, now + cfg_.retry_backoff);
    } else {
      n.queue.pop_front();
      n.attempts = 0;
      dropped = n.last_failure;
    }
  }
  if (!n.queue.empty() && !n.waiting) schedule_start(node, now);

  if (dropped) hooks_.drop(frame, *dropped, now);
  for (NodeId m : delivered) hooks_.deliver(m, frame, now);
}

std::vector<Frame> Medium::pending_frames() const {
  std::vector<Frame> out;
  for (const NodeMac& n : nodes_) out.insert(out.end(), n.queue.begin(), n.queue.end());
  return out;
}

}  // namespace parrot::sim
