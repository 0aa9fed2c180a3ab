#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <variant>

#include "parrot/chirp.hpp"
#include "parrot/vec3.hpp"

namespace parrot::routing {

using chirp::Chirp;

struct RoutingParams {
  double alpha = 0.5;
  double gamma0 = 0.8;
  double tau = 2.5;
  double chirp_interval = 0.5;
  double neighbor_timeout = 1.5;  ///< 3 chirp intervals
  double entry_timeout = 3.0;     ///< 6 chirp intervals
  double r_tx = 200.0;
  double cohesion_window = 0.5;
  std::uint16_t initial_ttl = chirp::kDefaultInitialTtl;
  /// Q values at or below this are treated as "no route".
  double q_floor = 1e-4;
  /// Permits gamma0 == 1 for the loop-degradation experiment.
  bool allow_unit_gamma0 = false;
  /// When true, a copy carrying the already-seen SEQ from a forwarder not yet
  /// heard for that SEQ still updates Q(d, forwarder); it is never forwarded.
  bool learn_from_duplicates = true;

  void validate() const;
};

/// Position and self-prediction of the node running the protocol.
struct SelfView {
  Vec3 position;
  Vec3 predicted;
};

struct NeighborRecord {
  NodeId id = 0;
  double last_heard = 0.0;
  Vec3 position;
  Vec3 predicted_position;
  double cohesion = 1.0;
};

struct QEntry {
  double q = 0.0;
  double updated = 0.0;
};

struct DestinationEntry {
  std::optional<std::uint16_t> newest_seq;
  /// Forwarders already heard for newest_seq.
  std::set<NodeId> seq_forwarders;
  std::map<NodeId, QEntry> via;
};

enum class DiscardReason { stale, ttl_expired, self_origin, malformed };

struct Discard {
  DiscardReason reason;
};
struct Forward {
  Chirp chirp;
};
using ChirpAction = std::variant<Discard, Forward>;

/// Link expiry time for relative position dp (m) and relative velocity dv
/// (m/s) against radius r_tx. Returns +inf for a link that never expires.
double compute_let(const Vec3& dp, const Vec3& dv, double r_tx);

/// sqrt(LET/tau) below the horizon, 1 otherwise; tau == 0 disables the factor.
double phi_let_from_let(double let, double tau);

/// sqrt(1 - |A xor B| / |A u B|), 1 when both sets are empty.
double cohesion_of(const std::set<NodeId>& now, const std::set<NodeId>& before);

/// Per-node protocol state: Q-table, neighbor records and cohesion snapshots.
class RoutingState {
 public:
  RoutingState(NodeId self, RoutingParams params);

  NodeId self() const { return self_; }
  const RoutingParams& params() const { return params_; }

  /// Originates this node's next chirp with V = 1 and the next sequence number.
  Chirp make_chirp(const SelfView& self, double now);

  /// Processes a received chirp. `forwarder` is the link-layer sender.
  ChirpAction handle_chirp(const Chirp& c, std::optional<NodeId> forwarder, const SelfView& self,
                           double now);

  /// Q <- Q + alpha (gamma V - Q); missing entries start from 0.
  double q_update(NodeId dest, NodeId via, double reward, double gamma_j, double now);

  /// gamma0 * phi_let * cohesion(j); nullopt when j has no record.
  std::optional<double> gamma(NodeId j, const SelfView& self) const;

  double phi_let(const SelfView& self, const NeighborRecord& neighbor) const;

  /// Cohesion of this node's neighbor set against the last snapshot.
  double phi_coh(double now) const;

  /// Best live neighbor toward dest, lowest id on ties; nullopt below q_floor.
  std::optional<NodeId> select_next_hop(NodeId dest) const;

  void expire(double now);

  /// Largest Q toward dest over all stored next hops, 0 when none.
  double best_q(NodeId dest) const;

  std::set<NodeId> neighbor_set(double now) const;
  const std::map<NodeId, NeighborRecord>& neighbors() const { return neighbors_; }
  const std::map<NodeId, DestinationEntry>& table() const { return table_; }
  std::optional<double> q(NodeId dest, NodeId via) const;
  std::uint16_t last_own_seq() const { return own_seq_; }

  /// Seeds a Q value directly. Intended for tests and tools.
  void set_q(NodeId dest, NodeId via, double value, double now);
  /// Inserts or refreshes a neighbor record directly.
  void upsert_neighbor(const NeighborRecord& record);

 private:
  bool is_live(const NeighborRecord& r, double now) const;
  void learn(const Chirp& c, NodeId j, const SelfView& self, double now);
  void roll_cohesion(double now);

  NodeId self_;
  RoutingParams params_;
  std::uint16_t own_seq_ = 0;
  std::map<NodeId, NeighborRecord> neighbors_;
  std::map<NodeId, DestinationEntry> table_;
  std::set<NodeId> cohesion_snapshot_;
  double snapshot_time_ = -std::numeric_limits<double>::infinity();
};

}  // namespace parrot::routing
