#include "parrot/simulator.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "parrot/errors.hpp"

namespace parrot::sim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent generator streams so that, e.g., the channel model does not
// perturb the mobility draws of a run.
enum class Stream : std::uint64_t { mobility = 1, flow = 2, mac = 3, protocol = 4 };

std::uint64_t stream_seed(std::uint64_t seed, Stream s) {
  return splitmix64(seed ^ (static_cast<std::uint64_t>(s) * 0xD1B54A32D192ED03ULL));
}

}  // namespace

void Scenario::validate() const {
  if (!(duration > 0.0)) throw ConfigError("duration must be > 0");
  if (nodes < 2) throw ConfigError("nodes must be >= 2");
  if (!(box.extent.x > 0.0 && box.extent.y > 0.0 && box.extent.z > 0.0)) {
    throw ConfigError("box dimensions must be > 0");
  }
  if (!(speed >= 0.0)) throw ConfigError("speed must be >= 0");
  if (!(warmup >= 0.0 && warmup < duration)) throw ConfigError("warmup must lie in [0, duration)");
  if (!(drain >= 0.0)) throw ConfigError("drain must be >= 0");
  if (!(traffic.cbr_rate_bps > 0.0)) throw ConfigError("cbr_rate must be > 0");
  if (traffic.payload_bytes == 0) throw ConfigError("payload must be > 0");
  if (data_hop_budget == 0) throw ConfigError("hop_budget must be >= 1");
  if (!fixed_positions.empty() && fixed_positions.size() != nodes) {
    throw ConfigError("fixed_positions must list exactly one position per node");
  }
  if (flow) {
    if (flow->first >= nodes || flow->second >= nodes || flow->first == flow->second) {
      throw ConfigError("flow endpoints must be distinct node ids below the node count");
    }
  }
  mobility.validate();
  routing.validate();
  budget.validate();
  mac.validate();
  channel::compute_r_tx(budget);
}

void DropCounts::add(DropCause cause) {
  switch (cause) {
    case DropCause::no_route: ++no_route; break;
    case DropCause::ttl: ++ttl; break;
    case DropCause::collision: ++collision; break;
    case DropCause::channel: ++channel; break;
    case DropCause::queue: ++queue; break;
  }
}

struct Simulation::Impl {
  explicit Impl(Scenario s);

  void dispatch(const Event& e);
  void on_mobility_tick(std::uint32_t tick, double now);
  void on_chirp_emit(NodeId node, double now);
  void on_app_packet(double now);
  void on_deliver(NodeId rx, const Frame& frame, double now);
  void on_drop(const Frame& frame, DropCause cause, double now);

  void forward_data(NodeId node, DataPacket pkt, double now);
  void send_deferred(NodeId node, Frame frame, double now);
  void mark_delivered(const DataPacket& pkt, double now);
  void mark_dropped(std::uint64_t id, DropCause cause);
  routing::SelfView self_view(NodeId node);
  Frame make_frame(NodeId sender, NodeId link_dest, PayloadKind kind) const;

  RunMetrics run();

  Scenario sc;
  double r_tx = 0.0;
  double end_time = 0.0;
  bool moving = false;
  bool finished = false;

  std::mt19937_64 protocol_rng;
  std::vector<kinematics::KinematicState> kin;
  std::vector<Vec3> positions;
  std::vector<std::optional<Vec3>> predicted;
  std::vector<routing::RoutingState> routers;
  std::vector<std::unordered_set<std::uint64_t>> flood_seen;

  EventQueue events;
  std::unique_ptr<Medium> medium;
  std::vector<std::optional<Frame>> deferred;
  std::vector<std::uint32_t> free_slots;

  PositionTrace trace;
  std::vector<PacketRecord> packets;
  std::vector<double> emission_times;
  std::uint64_t chirp_frames = 0;
  std::uint64_t app_count = 0;
  NodeId sender = 0;
  NodeId receiver = 1;
};

Simulation::Impl::Impl(Scenario s) : sc(std::move(s)) {
  sc.validate();
  r_tx = channel::compute_r_tx(sc.budget);
  sc.routing.r_tx = r_tx;
  sc.mobility.tau = sc.routing.tau;
  if (sc.protocol == Protocol::greedy) sc.routing.initial_ttl = 1;
  end_time = sc.duration + sc.drain;

  std::mt19937_64 mobility_rng(stream_seed(sc.seed, Stream::mobility));
  std::mt19937_64 flow_rng(stream_seed(sc.seed, Stream::flow));
  protocol_rng.seed(stream_seed(sc.seed, Stream::protocol));

  kin.reserve(sc.nodes);
  for (std::size_t i = 0; i < sc.nodes; ++i) {
    if (sc.fixed_positions.empty()) {
      kin.push_back(kinematics::make_random_waypoint_node(sc.box, sc.speed, end_time,
                                                          sc.mobility, mobility_rng));
    } else {
      kinematics::KinematicState k;
      k.position = sc.fixed_positions[i];
      kinematics::push_history(k, sc.mobility);
      kin.push_back(std::move(k));
    }
    positions.push_back(kin.back().position);
  }
  moving = sc.fixed_positions.empty() && sc.speed > 0.0;
  predicted.assign(sc.nodes, std::nullopt);

  if (sc.flow) {
    sender = sc.flow->first;
    receiver = sc.flow->second;
  } else {
    std::uniform_int_distribution<NodeId> pick_sender(0, static_cast<NodeId>(sc.nodes - 1));
    std::uniform_int_distribution<NodeId> pick_receiver(0, static_cast<NodeId>(sc.nodes - 2));
    sender = pick_sender(flow_rng);
    receiver = pick_receiver(flow_rng);
    if (receiver >= sender) ++receiver;
  }

  routers.reserve(sc.nodes);
  for (NodeId i = 0; i < sc.nodes; ++i) routers.emplace_back(i, sc.routing);
  flood_seen.resize(sc.nodes);

  medium = std::make_unique<Medium>(
      sc.mac, sc.budget, sc.channel, positions, stream_seed(sc.seed, Stream::mac), events,
      Medium::Hooks{
          [this](NodeId rx, const Frame& f, double now) { on_deliver(rx, f, now); },
          [this](const Frame& f, DropCause c, double now) { on_drop(f, c, now); },
      });

  trace.dt = sc.mobility.dt;
}

routing::SelfView Simulation::Impl::self_view(NodeId node) {
  auto& cached = predicted[node];
  if (!cached) {
    cached = sc.routing.tau > 0.0 ? kinematics::predict(kin[node], sc.mobility)
                                  : positions[node];
  }
  return {positions[node], *cached};
}

Frame Simulation::Impl::make_frame(NodeId from, NodeId link_dest, PayloadKind kind) const {
  Frame f;
  f.sender = from;
  f.link_dest = link_dest;
  f.kind = kind;
  const std::size_t body =
      kind == PayloadKind::chirp ? chirp::kFrameSize : sc.traffic.payload_bytes;
  f.size_bytes = body + sc.mac.header_bytes;
  return f;
}

RunMetrics Simulation::Impl::run() {
  if (finished) throw std::logic_error("Simulation::run() may only be called once");
  finished = true;

  trace.snapshots.push_back(positions);
  if (moving) events.push(sc.mobility.dt, EventKind::mobility_tick, 0, 1);

  if (sc.protocol != Protocol::flood) {
    std::uniform_real_distribution<double> phase(0.0, sc.routing.chirp_interval);
    for (NodeId i = 0; i < sc.nodes; ++i) {
      events.push(phase(protocol_rng), EventKind::chirp_emit, i);
    }
  }
  events.push(sc.warmup, EventKind::app_packet);

  while (!events.empty() && events.top().time <= end_time) {
    dispatch(events.pop());
  }

  for (PacketRecord& p : packets) {
    if (p.state != PacketState::in_flight) continue;
    p.state = PacketState::dropped;
    if (sc.protocol != Protocol::flood || !p.cause) {
      p.cause = sc.protocol == Protocol::flood ? DropCause::channel : DropCause::queue;
    }
  }

  const double bound = optimal_pdr_bound(trace, r_tx, emission_times, sender, receiver);
  RunMetrics m = collect_metrics(packets, chirp_frames, chirp::kFrameSize + sc.mac.header_bytes,
                                 bound);
  m.sender = sender;
  m.receiver = receiver;
  return m;
}

void Simulation::Impl::dispatch(const Event& e) {
  switch (e.kind) {
    case EventKind::mobility_tick: on_mobility_tick(e.arg, e.time); break;
    case EventKind::chirp_emit: on_chirp_emit(e.node, e.time); break;
    case EventKind::app_packet: on_app_packet(e.time); break;
    case EventKind::tx_start: medium->on_tx_start(e.node, e.time); break;
    case EventKind::tx_end: medium->on_tx_end(e.node, e.time); break;
    case EventKind::deferred_enqueue: {
      Frame f = std::move(*deferred[e.arg]);
      deferred[e.arg].reset();
      free_slots.push_back(e.arg);
      const bool is_chirp = f.kind == PayloadKind::chirp;
      if (medium->transmit(e.node, std::move(f), e.time) && is_chirp) ++chirp_frames;
      break;
    }
  }
}

void Simulation::Impl::on_mobility_tick(std::uint32_t tick, double now) {
  for (std::size_t i = 0; i < kin.size(); ++i) {
    kin[i] = kinematics::step_random_waypoint(std::move(kin[i]), sc.box, sc.mobility);
    positions[i] = kin[i].position;
    predicted[i].reset();
  }
  trace.snapshots.push_back(positions);
  const double next = static_cast<double>(tick + 1) * sc.mobility.dt;
  if (next <= end_time) events.push(next, EventKind::mobility_tick, 0, tick + 1);
  (void)now;
}

void Simulation::Impl::on_chirp_emit(NodeId node, double now) {
  routing::RoutingState& r = routers[node];
  r.expire(now);
  const chirp::Chirp c = r.make_chirp(self_view(node), now);
  Frame f = make_frame(node, kBroadcast, PayloadKind::chirp);
  f.chirp_bytes = chirp::encode_chirp(c);
  if (medium->transmit(node, std::move(f), now)) ++chirp_frames;
  events.push(now + sc.routing.chirp_interval, EventKind::chirp_emit, node);
}

void Simulation::Impl::on_app_packet(double now) {
  DataPacket pkt;
  pkt.id = packets.size();
  pkt.source = sender;
  pkt.destination = receiver;
  pkt.emitted = now;
  packets.push_back(PacketRecord{now, 0.0, PacketState::in_flight, std::nullopt});
  emission_times.push_back(now);

  if (sc.protocol == Protocol::flood) flood_seen[sender].insert(pkt.id);
  forward_data(sender, pkt, now);

  ++app_count;
  const double next =
      sc.warmup + static_cast<double>(app_count) * sc.traffic.packet_interval();
  if (next < sc.duration) events.push(next, EventKind::app_packet);
}

void Simulation::Impl::forward_data(NodeId node, DataPacket pkt, double now) {
  if (pkt.hops >= sc.data_hop_budget) {
    mark_dropped(pkt.id, DropCause::ttl);
    return;
  }

  NodeId link_dest = kBroadcast;
  switch (sc.protocol) {
    case Protocol::parrot: {
      routing::RoutingState& r = routers[node];
      r.expire(now);
      const auto hop = r.select_next_hop(pkt.destination);
      if (!hop) {
        mark_dropped(pkt.id, DropCause::no_route);
        return;
      }
      link_dest = *hop;
      break;
    }
    case Protocol::greedy: {
      routing::RoutingState& r = routers[node];
      r.expire(now);
      std::vector<NeighborPosition> nbrs;
      nbrs.reserve(r.neighbors().size());
      for (const auto& [id, rec] : r.neighbors()) nbrs.push_back({id, rec.position});
      const auto hop = greedy_next_hop(nbrs, positions[node], positions[pkt.destination]);
      if (!hop) {
        mark_dropped(pkt.id, DropCause::no_route);
        return;
      }
      link_dest = *hop;
      break;
    }
    case Protocol::flood:
      break;
  }

  Frame f = make_frame(node, link_dest, PayloadKind::data);
  pkt.hops += 1;
  f.data = pkt;
  if (sc.protocol == Protocol::flood && node != pkt.source) {
    send_deferred(node, std::move(f), now);
  } else {
    medium->transmit(node, std::move(f), now);
  }
}

void Simulation::Impl::send_deferred(NodeId node, Frame frame, double now) {
  std::uniform_real_distribution<double> jitter(0.0, sc.mac.broadcast_jitter);
  const double at = now + jitter(protocol_rng);
  std::uint32_t slot = 0;
  if (free_slots.empty()) {
    slot = static_cast<std::uint32_t>(deferred.size());
    deferred.emplace_back(std::move(frame));
  } else {
    slot = free_slots.back();
    free_slots.pop_back();
    deferred[slot] = std::move(frame);
  }
  events.push(at, EventKind::deferred_enqueue, node, slot);
}

void Simulation::Impl::on_deliver(NodeId rx, const Frame& frame, double now) {
  if (frame.kind == PayloadKind::chirp) {
    if (sc.protocol == Protocol::flood) return;
    chirp::Chirp c;
    try {
      c = chirp::decode_chirp(frame.chirp_bytes);
    } catch (const chirp::ChirpError&) {
      return;
    }
    const auto action = routers[rx].handle_chirp(c, frame.sender, self_view(rx), now);
    if (const auto* fwd = std::get_if<routing::Forward>(&action)) {
      Frame out = make_frame(rx, kBroadcast, PayloadKind::chirp);
      out.chirp_bytes = chirp::encode_chirp(fwd->chirp);
      send_deferred(rx, std::move(out), now);
    }
    return;
  }

  const DataPacket& pkt = frame.data;
  if (sc.protocol == Protocol::flood) {
    if (!flood_seen[rx].insert(pkt.id).second) return;
  }
  if (rx == pkt.destination) {
    mark_delivered(pkt, now);
    return;
  }
  forward_data(rx, pkt, now);
}

void Simulation::Impl::on_drop(const Frame& frame, DropCause cause, double /*now*/) {
  if (frame.kind == PayloadKind::data) mark_dropped(frame.data.id, cause);
}

void Simulation::Impl::mark_delivered(const DataPacket& pkt, double now) {
  PacketRecord& rec = packets[pkt.id];
  if (rec.state == PacketState::delivered) return;
  rec.state = PacketState::delivered;
  rec.delivered_at = now;
  rec.cause.reset();
}

void Simulation::Impl::mark_dropped(std::uint64_t id, DropCause cause) {
  PacketRecord& rec = packets[id];
  if (rec.state != PacketState::in_flight) return;
  rec.cause = cause;
  // A flood copy dying says nothing about the other copies; settle at the end.
  if (sc.protocol != Protocol::flood) rec.state = PacketState::dropped;
}

Simulation::Simulation(Scenario scenario) : impl_(std::make_unique<Impl>(std::move(scenario))) {}
Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

RunMetrics Simulation::run() { return impl_->run(); }
const Scenario& Simulation::scenario() const { return impl_->sc; }
const routing::RoutingState& Simulation::routing(NodeId node) const {
  return impl_->routers.at(node);
}
const PositionTrace& Simulation::trace() const { return impl_->trace; }
NodeId Simulation::sender() const { return impl_->sender; }
NodeId Simulation::receiver() const { return impl_->receiver; }
double Simulation::r_tx() const { return impl_->r_tx; }

RunMetrics run(const Scenario& scenario) {
  Simulation sim(scenario);
  return sim.run();
}

}  // namespace parrot::sim
