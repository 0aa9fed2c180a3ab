#include "parrot/routing.hpp"

#include <algorithm>
#include <cmath>

#include "parrot/errors.hpp"

namespace parrot::routing {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 narrow(const Vec3& v) {
  return {static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)};
}

float unit_float(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

}  // namespace

void RoutingParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0,1]");
  const bool gamma_ok = gamma0 > 0.0 && (gamma0 < 1.0 || (allow_unit_gamma0 && gamma0 == 1.0));
  if (!gamma_ok) {
    throw ConfigError("gamma0 must lie in (0,1) (1.0 requires allow_gamma0_one)");
  }
  if (!(tau >= 0.0)) throw ConfigError("tau must be >= 0");
  if (!(chirp_interval > 0.0)) throw ConfigError("chirp_interval must be > 0");
  if (!(neighbor_timeout > 0.0)) throw ConfigError("neighbor_timeout must be > 0");
  if (!(entry_timeout > 0.0)) throw ConfigError("entry_timeout must be > 0");
  if (!(r_tx > 0.0)) throw ConfigError("r_tx must be > 0");
  if (!(cohesion_window > 0.0)) throw ConfigError("cohesion_window must be > 0");
  if (initial_ttl < 1) throw ConfigError("initial_ttl must be >= 1");
  if (!(q_floor >= 0.0 && q_floor < 1.0)) throw ConfigError("q_floor must lie in [0,1)");
}

double compute_let(const Vec3& dp, const Vec3& dv, double r_tx) {
  const double a = dot(dv, dv);
  const double b = 2.0 * dot(dp, dv);
  const double c = dot(dp, dp) - r_tx * r_tx;
  const bool in_range = c <= 0.0;

  if (a == 0.0) return in_range ? kInf : 0.0;

  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return in_range ? kInf : 0.0;

  // Cancellation-free roots.
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q == 0.0) return 0.0;
  double t1 = q / a;
  double t2 = c / q;
  if (t1 > t2) std::swap(t1, t2);

  if (t2 <= 0.0) return 0.0;
  if (t1 <= 0.0) return t2;
  return 0.0;
}

double phi_let_from_let(double let, double tau) {
  if (tau <= 0.0) return 1.0;
  if (let < tau) return std::sqrt(std::max(let, 0.0) / tau);
  return 1.0;
}

double cohesion_of(const std::set<NodeId>& now, const std::set<NodeId>& before) {
  std::size_t common = 0;
  for (NodeId n : now) common += before.count(n);
  const std::size_t united = now.size() + before.size() - common;
  if (united == 0) return 1.0;
  const std::size_t sym_diff = united - common;
  return std::sqrt(1.0 - static_cast<double>(sym_diff) / static_cast<double>(united));
}

RoutingState::RoutingState(NodeId self, RoutingParams params)
    : self_(self), params_(params) {
  params_.validate();
}

bool RoutingState::is_live(const NeighborRecord& r, double now) const {
  return now - r.last_heard <= params_.neighbor_timeout;
}

std::set<NodeId> RoutingState::neighbor_set(double now) const {
  std::set<NodeId> out;
  for (const auto& [id, rec] : neighbors_) {
    if (is_live(rec, now)) out.insert(id);
  }
  return out;
}

double RoutingState::phi_coh(double now) const {
  return cohesion_of(neighbor_set(now), cohesion_snapshot_);
}

void RoutingState::roll_cohesion(double now) {
  if (now - snapshot_time_ >= params_.cohesion_window - 1e-9) {
    cohesion_snapshot_ = neighbor_set(now);
    snapshot_time_ = now;
  }
}

Chirp RoutingState::make_chirp(const SelfView& self, double now) {
  const double cohesion = phi_coh(now);
  roll_cohesion(now);
  ++own_seq_;

  Chirp c;
  c.originator = self_;
  c.position = narrow(self.position);
  c.predicted_position = narrow(self.predicted);
  c.reward = 1.0F;
  c.cohesion = unit_float(cohesion);
  c.seq = own_seq_;
  c.ttl = params_.initial_ttl;
  return c;
}

double RoutingState::phi_let(const SelfView& self, const NeighborRecord& neighbor) const {
  if (params_.tau <= 0.0) return 1.0;
  const Vec3 dp = neighbor.position - self.position;
  const Vec3 dv = ((neighbor.predicted_position - neighbor.position) -
                   (self.predicted - self.position)) /
                  params_.tau;
  return phi_let_from_let(compute_let(dp, dv, params_.r_tx), params_.tau);
}

std::optional<double> RoutingState::gamma(NodeId j, const SelfView& self) const {
  const auto it = neighbors_.find(j);
  if (it == neighbors_.end()) return std::nullopt;
  const NeighborRecord& rec = it->second;
  return params_.gamma0 * phi_let(self, rec) * rec.cohesion;
}

double RoutingState::q_update(NodeId dest, NodeId via, double reward, double gamma_j,
                              double now) {
  QEntry& e = table_[dest].via[via];
  e.q += params_.alpha * (gamma_j * reward - e.q);
  e.updated = now;
  return e.q;
}

ChirpAction RoutingState::handle_chirp(const Chirp& c, std::optional<NodeId> forwarder,
                                       const SelfView& self, double now) {
  if (!forwarder) return Discard{DiscardReason::malformed};
  if (c.originator == self_) return Discard{DiscardReason::self_origin};

  const NodeId j = *forwarder;
  DestinationEntry& dest = table_[c.originator];
  if (dest.newest_seq && !chirp::seq_newer(c.seq, *dest.newest_seq)) {
    if (params_.learn_from_duplicates && c.seq == *dest.newest_seq &&
        dest.seq_forwarders.insert(j).second) {
      learn(c, j, self, now);
    }
    return Discard{DiscardReason::stale};
  }
  dest.newest_seq = c.seq;
  dest.seq_forwarders = {j};
  learn(c, j, self, now);

  if (c.ttl <= 1) return Discard{DiscardReason::ttl_expired};

  Chirp out = c;
  out.position = narrow(self.position);
  out.predicted_position = narrow(self.predicted);
  out.ttl = static_cast<std::uint16_t>(c.ttl - 1);
  out.reward = unit_float(best_q(c.originator));
  out.cohesion = unit_float(phi_coh(now));
  return Forward{out};
}

void RoutingState::learn(const Chirp& c, NodeId j, const SelfView& self, double now) {
  upsert_neighbor(NeighborRecord{j, now, c.position, c.predicted_position, c.cohesion});
  const double g = *gamma(j, self);
  q_update(c.originator, j, c.reward, g, now);
}

double RoutingState::best_q(NodeId dest) const {
  const auto it = table_.find(dest);
  if (it == table_.end()) return 0.0;
  double best = 0.0;
  for (const auto& [via, entry] : it->second.via) {
    if (neighbors_.contains(via)) best = std::max(best, entry.q);
  }
  return best;
}

std::optional<NodeId> RoutingState::select_next_hop(NodeId dest) const {
  const auto it = table_.find(dest);
  if (it == table_.end()) return std::nullopt;

  std::optional<NodeId> best;
  double best_q = params_.q_floor;
  // Ascending id order, strict comparison: ties keep the lower id.
  for (const auto& [via, entry] : it->second.via) {
    if (!neighbors_.contains(via)) continue;
    if (entry.q > best_q) {
      best_q = entry.q;
      best = via;
    }
  }
  return best;
}

void RoutingState::expire(double now) {
  std::erase_if(neighbors_, [&](const auto& kv) { return !is_live(kv.second, now); });
  for (auto& [dest, entry] : table_) {
    std::erase_if(entry.via,
                  [&](const auto& kv) { return now - kv.second.updated > params_.entry_timeout; });
  }
}

std::optional<double> RoutingState::q(NodeId dest, NodeId via) const {
  const auto it = table_.find(dest);
  if (it == table_.end()) return std::nullopt;
  const auto jt = it->second.via.find(via);
  if (jt == it->second.via.end()) return std::nullopt;
  return jt->second.q;
}

void RoutingState::set_q(NodeId dest, NodeId via, double value, double now) {
  table_[dest].via[via] = QEntry{value, now};
}

void RoutingState::upsert_neighbor(const NeighborRecord& record) {
  neighbors_[record.id] = record;
}

}  // namespace parrot::routing
