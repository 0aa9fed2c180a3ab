#include "parrot/kinematics.hpp"

#include <cmath>
#include <string>

#include "parrot/errors.hpp"

namespace parrot::kinematics {
namespace {

// Moves the waypoint cursor past every waypoint whose sphere already contains p.
std::size_t advance_cursor(const std::vector<Vec3>& waypoints, std::size_t cursor, const Vec3& p,
                           double r_w) {
  while (cursor < waypoints.size() && distance(waypoints[cursor], p) <= r_w) ++cursor;
  return cursor;
}

// One step of length `step` toward `target`, landing on it when closer than a step.
Vec3 step_toward(const Vec3& p, const Vec3& target, double step) {
  const Vec3 delta = target - p;
  const double dist = norm(delta);
  if (dist <= step) return target;
  return p + delta * (step / dist);
}

// Shared motion law: containment check, then a step toward the current waypoint.
void motion_step(Vec3& p, std::size_t& cursor, const std::vector<Vec3>& waypoints, double speed,
                 const MobilityConfig& cfg) {
  cursor = advance_cursor(waypoints, cursor, p, cfg.r_w);
  if (cursor < waypoints.size() && speed > 0.0) {
    p = step_toward(p, waypoints[cursor], speed * cfg.dt);
  }
}

}  // namespace

void MobilityConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(tau >= 0.0)) throw ConfigError("tau must be >= 0");
  if (!(r_w > 0.0)) throw ConfigError("waypoint_radius must be > 0");
  if (h < 2) throw ConfigError("history must be >= 2");
}

Vec3 predict_waypoint(const KinematicState& state, const MobilityConfig& cfg) {
  // Guard against floor(2.5 / 0.1) == 24 from binary rounding.
  const auto steps = static_cast<std::size_t>(std::floor(cfg.tau / cfg.dt + 1e-9));
  Vec3 p = state.position;
  std::size_t cursor = state.next_waypoint;
  for (std::size_t i = 0; i < steps; ++i) {
    motion_step(p, cursor, state.waypoints, state.speed, cfg);
  }
  return p;
}

SlopePrediction predict_slope(const KinematicState& state, const MobilityConfig& cfg) {
  const auto& hist = state.history;
  if (hist.size() < 2) return {state.position, true};

  Vec3 sum;
  for (std::size_t i = 1; i < hist.size(); ++i) {
    sum += (hist[i] - hist[i - 1]) / cfg.dt;
  }
  const double n = static_cast<double>(hist.size() - 1);
  return {state.position + sum * (cfg.tau / n), false};
}

Vec3 predict(const KinematicState& state, const MobilityConfig& cfg) {
  if (state.has_waypoints()) return predict_waypoint(state, cfg);
  return predict_slope(state, cfg).position;
}

void push_history(KinematicState& state, const MobilityConfig& cfg) {
  state.history.push_back(state.position);
  while (state.history.size() > cfg.h) state.history.pop_front();
}

KinematicState step_random_waypoint(KinematicState state, const Box& /*bounds*/,
                                    const MobilityConfig& cfg) {
  // Waypoints lie inside the box and steps never overshoot, so positions stay
  // in the convex hull of the start point and the waypoints.
  motion_step(state.position, state.next_waypoint, state.waypoints, state.speed, cfg);
  state.last_update += cfg.dt;
  push_history(state, cfg);
  return state;
}

KinematicState make_random_waypoint_node(const Box& bounds, double speed, double duration,
                                         const MobilityConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, bounds.extent.x);
  std::uniform_real_distribution<double> uy(0.0, bounds.extent.y);
  std::uniform_real_distribution<double> uz(0.0, bounds.extent.z);
  auto draw = [&] {
    const double x = ux(rng);
    const double y = uy(rng);
    const double z = uz(rng);
    return Vec3{x, y, z};
  };

  KinematicState state;
  state.position = draw();
  state.speed = speed;

  // Path length needed to keep moving for the whole run, with margin for the
  // waypoint spheres cutting each leg short.
  const double diagonal = norm(bounds.extent);
  const double needed = 2.0 * speed * duration + 2.0 * diagonal;
  double covered = 0.0;
  Vec3 last = state.position;
  do {
    const Vec3 w = draw();
    covered += distance(last, w);
    state.waypoints.push_back(w);
    last = w;
  } while (covered < needed);

  push_history(state, cfg);
  return state;
}

double prediction_error(const Vec3& predicted, const Vec3& actual) {
  return distance(predicted, actual);
}

}  // namespace parrot::kinematics
