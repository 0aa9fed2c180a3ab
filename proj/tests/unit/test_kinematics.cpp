#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "parrot/errors.hpp"
#include "parrot/kinematics.hpp"

using namespace parrot;
using namespace parrot::kinematics;

namespace {

void expect_near(const Vec3& a, const Vec3& b, double tol = 1e-9) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

KinematicState moving(Vec3 p, double speed, std::vector<Vec3> waypoints) {
  KinematicState s;
  s.position = p;
  s.speed = speed;
  s.waypoints = std::move(waypoints);
  return s;
}

}  // namespace

TEST(WaypointPrediction, StraightLeg) {
  MobilityConfig cfg;
  const auto s = moving({0, 0, 0}, 10.0, {{100, 0, 0}});
  expect_near(predict_waypoint(s, cfg), {25, 0, 0});
}

TEST(WaypointPrediction, ZeroSpeedStaysPut) {
  MobilityConfig cfg;
  for (double tau : {0.0, 1.0, 2.5, 17.0}) {
    cfg.tau = tau;
    const auto s = moving({3, 4, 5}, 0.0, {{100, 0, 0}});
    expect_near(predict_waypoint(s, cfg), {3, 4, 5});
  }
}

TEST(WaypointPrediction, SkipsWaypointAlreadyInsideSphere) {
  MobilityConfig cfg;
  cfg.tau = 1.0;
  const auto s = moving({0, 0, 0}, 10.0, {{2, 0, 0}, {0, 50, 0}});

  // Plain stepping oracle: w1 is within r_w at t=0, so every step heads for w2.
  Vec3 p{0, 0, 0};
  const Vec3 w2{0, 50, 0};
  for (int i = 0; i < 10; ++i) p = p + (w2 - p) * (1.0 / norm(w2 - p));

  const Vec3 got = predict_waypoint(s, cfg);
  expect_near(got, p);
  expect_near(got, {0, 10, 0});
}

TEST(WaypointPrediction, MatchesRealizedMotion) {
  MobilityConfig cfg;
  std::mt19937_64 rng(7);
  auto s = make_random_waypoint_node(Box{}, 50.0 / 3.6, 300.0, cfg, rng);
  for (int k = 0; k < 500; ++k) {
    const Vec3 predicted = predict_waypoint(s, cfg);
    auto future = s;
    for (int i = 0; i < 25; ++i) future = step_random_waypoint(std::move(future), Box{}, cfg);
    ASSERT_LT(prediction_error(predicted, future.position), 1e-9) << "tick " << k;
    s = step_random_waypoint(std::move(s), Box{}, cfg);
  }
}

TEST(SlopePrediction, HandExample) {
  MobilityConfig cfg;
  cfg.tau = 1.0;
  KinematicState s;
  s.history = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  s.position = {2, 0, 0};
  const auto r = predict_slope(s, cfg);
  EXPECT_FALSE(r.degenerate);
  expect_near(r.position, {12, 0, 0});
}

TEST(SlopePrediction, LongerHistory) {
  MobilityConfig cfg;
  cfg.h = 4;
  cfg.dt = 0.5;
  cfg.tau = 2.5;
  KinematicState s;
  s.history = {{0, 0, 0}, {0, 1, 0}, {0, 2, 0}, {0, 3, 0}};
  s.position = {0, 3, 0};
  expect_near(predict_slope(s, cfg).position, {0, 3 + 5, 0});
}

TEST(SlopePrediction, ConstantHistoryAndDegenerate) {
  MobilityConfig cfg;
  KinematicState s;
  s.position = {7, 7, 7};
  s.history = {{7, 7, 7}, {7, 7, 7}, {7, 7, 7}};
  expect_near(predict_slope(s, cfg).position, {7, 7, 7});

  s.history = {{7, 7, 7}};
  const auto r = predict_slope(s, cfg);
  EXPECT_TRUE(r.degenerate);
  expect_near(r.position, {7, 7, 7});
}

TEST(SlopePrediction, LinearInTau) {
  MobilityConfig cfg;
  KinematicState s;
  s.history = {{0, 0, 0}, {1, 2, 0}, {2, 4, 1}};
  s.position = {2, 4, 1};
  cfg.tau = 1.0;
  const Vec3 one = predict_slope(s, cfg).position - s.position;
  cfg.tau = 3.0;
  const Vec3 three = predict_slope(s, cfg).position - s.position;
  expect_near(three, one * 3.0);
}

TEST(RandomWaypoint, ExhaustedQueueIsStationary) {
  MobilityConfig cfg;
  auto s = moving({10, 10, 10}, 10.0, {{10, 10, 10}});
  for (int i = 0; i < 5; ++i) s = step_random_waypoint(std::move(s), Box{}, cfg);
  expect_near(s.position, {10, 10, 10});
  EXPECT_FALSE(s.has_waypoints());
  expect_near(predict(s, cfg), {10, 10, 10});
}

TEST(RandomWaypoint, ReachesNearbyWaypoint) {
  MobilityConfig cfg;
  auto s = moving({0, 0, 0}, 10.0, {{10, 0, 0}});
  int steps = 0;
  while (distance(s.position, {10, 0, 0}) > cfg.r_w) {
    s = step_random_waypoint(std::move(s), Box{}, cfg);
    ++steps;
  }
  EXPECT_LE(steps, 10);
}

TEST(RandomWaypoint, StaysInBoxAndIsDeterministic) {
  MobilityConfig cfg;
  const Box box;
  auto trajectory = [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto s = make_random_waypoint_node(box, 50.0 / 3.6, 900.0, cfg, rng);
    std::vector<Vec3> out;
    for (int i = 0; i < 9000; ++i) {
      s = step_random_waypoint(std::move(s), box, cfg);
      out.push_back(s.position);
    }
    return out;
  };
  const auto a = trajectory(42);
  const auto b = trajectory(42);
  ASSERT_EQ(a, b);
  for (const Vec3& p : a) ASSERT_TRUE(box.contains(p));
  EXPECT_NE(a, trajectory(43));
}

TEST(PredictionError, Bounds) {
  EXPECT_EQ(prediction_error({1, 2, 3}, {1, 2, 3}), 0.0);

  const double v = 50.0 / 3.6;
  const double tau = 2.5;
  // Hold-position predictor on a straight track.
  EXPECT_NEAR(prediction_error({0, 0, 0}, {v * tau, 0, 0}), 34.72, 5e-3);
  // Predicted one way, moved the other.
  EXPECT_NEAR(prediction_error({v * tau, 0, 0}, {-v * tau, 0, 0}), 2 * v * tau, 1e-9);
}

TEST(MobilityConfig, RejectsBadValues) {
  MobilityConfig cfg;
  cfg.dt = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.h = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.tau = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}
