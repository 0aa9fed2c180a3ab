#pragma once

#include <cstddef>
#include <deque>
#include <random>
#include <vector>

#include "parrot/vec3.hpp"

namespace parrot::kinematics {

struct MobilityConfig {
  double dt = 0.1;     ///< mobility update interval (s)
  double tau = 2.5;    ///< prediction horizon (s)
  double r_w = 10.0;   ///< waypoint sphere radius (m)
  std::size_t h = 5;   ///< slope history length (samples)

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Motion state of one node. Positions only change on mobility ticks.
struct KinematicState {
  Vec3 position;
  double speed = 0.0;
  std::vector<Vec3> waypoints;
  std::size_t next_waypoint = 0;
  /// Last h positions sampled every dt, oldest first.
  std::deque<Vec3> history;
  double last_update = 0.0;

  bool has_waypoints() const { return next_waypoint < waypoints.size(); }
  std::size_t remaining_waypoints() const { return waypoints.size() - next_waypoint; }
};

/// Axis-aligned scenario volume [0, extent.x] x [0, extent.y] x [0, extent.z].
struct Box {
  Vec3 extent{500.0, 500.0, 250.0};

  bool contains(const Vec3& p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.z >= 0.0 && p.x <= extent.x && p.y <= extent.y &&
           p.z <= extent.z;
  }
};

/// Iterative waypoint-following look-ahead of floor(tau/dt) virtual steps.
/// Replays exactly the motion law of step_random_waypoint.
Vec3 predict_waypoint(const KinematicState& state, const MobilityConfig& cfg);

struct SlopePrediction {
  Vec3 position;
  /// True when fewer than two history samples were available and p(t) was returned.
  bool degenerate = false;
};

/// Extrapolates the mean velocity over the position history for tau seconds.
SlopePrediction predict_slope(const KinematicState& state, const MobilityConfig& cfg);

/// Waypoint prediction when a trajectory is known, slope extrapolation otherwise.
Vec3 predict(const KinematicState& state, const MobilityConfig& cfg);

/// Advances the node by one mobility tick and appends the new position to the history.
KinematicState step_random_waypoint(KinematicState state, const Box& bounds,
                                    const MobilityConfig& cfg);

/// Draws a uniform start position and a full waypoint sequence long enough for
/// `duration` seconds of motion at `speed`. All randomness comes from `rng`.
KinematicState make_random_waypoint_node(const Box& bounds, double speed, double duration,
                                         const MobilityConfig& cfg, std::mt19937_64& rng);

/// Euclidean prediction error in meters.
double prediction_error(const Vec3& predicted, const Vec3& actual);

/// Records the current position as a history sample, keeping at most h entries.
void push_history(KinematicState& state, const MobilityConfig& cfg);

}  // namespace parrot::kinematics
