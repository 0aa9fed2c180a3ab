#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "parrot/errors.hpp"
#include "parrot/simulator.hpp"

using namespace parrot;
using namespace parrot::sim;

namespace {

Scenario static_scenario(std::vector<Vec3> positions, NodeId from, NodeId to) {
  Scenario s;
  s.nodes = positions.size();
  s.fixed_positions = std::move(positions);
  s.flow = {{from, to}};
  s.duration = 40.0;
  s.warmup = 10.0;
  return s;
}

std::vector<Vec3> line(std::size_t n, double spacing) {
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({10 + spacing * i, 250, 100});
  return out;
}

void expect_conserved(const RunMetrics& m) {
  EXPECT_EQ(m.sent, m.delivered + m.drops.total());
}

}  // namespace

TEST(Simulation, TwoStaticNodesDeliverEverything) {
  const auto m = run(static_scenario({{100, 100, 100}, {250, 100, 100}}, 0, 1));
  EXPECT_EQ(m.sent, static_cast<std::uint64_t>(std::ceil(30.0 / 0.0056)));
  EXPECT_EQ(m.pdr, 1.0);
  EXPECT_EQ(m.optimal_bound, 1.0);
  const double air = (1400 + 56) * 8 / 24e6;
  EXPECT_NEAR(m.latency_p50, air, 1e-12);
  EXPECT_NEAR(*std::min_element(m.latencies.begin(), m.latencies.end()), air, 1e-12);
  expect_conserved(m);
}

TEST(Simulation, PartitionedPairDeliversNothing) {
  const auto m = run(static_scenario({{0, 0, 0}, {480, 480, 240}}, 0, 1));
  EXPECT_GT(m.sent, 0U);
  EXPECT_EQ(m.delivered, 0U);
  EXPECT_EQ(m.pdr, 0.0);
  EXPECT_EQ(m.optimal_bound, 0.0);
  EXPECT_EQ(m.drops.no_route, m.sent);
}

TEST(Simulation, MultiHopChainDelivers) {
  auto s = static_scenario(line(5, 120), 0, 4);
  const auto m = run(s);
  EXPECT_GT(m.pdr, 0.9);
  EXPECT_EQ(m.optimal_bound, 1.0);
  expect_conserved(m);
}

TEST(Simulation, SameSeedSameMetrics) {
  Scenario s;
  s.duration = 120.0;
  s.seed = 77;
  const auto a = run(s);
  const auto b = run(s);
  EXPECT_TRUE(a == b);
  s.seed = 78;
  EXPECT_FALSE(a == run(s));
  expect_conserved(a);
  EXPECT_LE(a.pdr, a.optimal_bound);
}

TEST(Simulation, ConservationAcrossProtocolsAndChannels) {
  for (auto proto : {Protocol::parrot, Protocol::greedy, Protocol::flood}) {
    for (auto ch : {channel::Model::rural, channel::Model::urban}) {
      Scenario s;
      s.duration = 90.0;
      s.protocol = proto;
      s.channel = ch;
      s.seed = 5;
      const auto m = run(s);
      EXPECT_EQ(m.sent, m.delivered + m.drops.total());
    }
  }
}

TEST(Simulation, FloodReachesAcrossConnectedGraph) {
  auto s = static_scenario(line(6, 150), 0, 5);
  s.protocol = Protocol::flood;
  // One packet per second so successive floods never overlap.
  s.traffic.cbr_rate_bps = 1400 * 8;
  const auto m = run(s);
  EXPECT_EQ(m.chirp_frames, 0U);
  EXPECT_EQ(m.sent, 30U);
  EXPECT_EQ(m.pdr, 1.0);
}

TEST(Simulation, GreedyLocalMinimumDrops) {
  // Sender's only neighbor lies farther from the receiver than the sender.
  auto s = static_scenario({{200, 250, 100}, {480, 250, 100}, {50, 250, 100}}, 0, 1);
  s.protocol = Protocol::greedy;
  const auto m = run(s);
  EXPECT_EQ(m.delivered, 0U);
  EXPECT_EQ(m.drops.no_route, m.sent);
}

TEST(Simulation, GreedyForwardsTowardDestination) {
  auto s = static_scenario(line(4, 140), 0, 3);
  s.protocol = Protocol::greedy;
  EXPECT_GT(run(s).pdr, 0.95);
}

TEST(Simulation, ParrotEmptyTableDropsNoRoute) {
  auto s = static_scenario({{100, 100, 100}, {250, 100, 100}}, 0, 1);
  s.warmup = 0.0;
  s.duration = 0.2;
  s.routing.chirp_interval = 10.0;
  const auto m = run(s);
  EXPECT_GT(m.drops.no_route, 0U);
}

TEST(Simulation, WalkthroughTopologyBuildsBothReversePaths) {
  // A=0 B=1 C=2 D=3 E=4 F=5
  auto s = static_scenario({{440, 250, 100},
                            {300, 360, 100},
                            {150, 330, 100},
                            {0, 250, 100},
                            {300, 140, 100},
                            {150, 170, 100}},
                           3, 0);
  s.duration = 15.0;
  s.warmup = 5.0;
  Simulation sim(s);
  sim.run();
  const auto& a = sim.routing(0).table().at(3).via;
  ASSERT_EQ(a.size(), 2U);
  EXPECT_TRUE(a.contains(1));
  EXPECT_TRUE(a.contains(4));
}

TEST(Simulation, ChirpFrameCountMatchesFloodTally) {
  // Fully connected, collision-free: each origination is forwarded once by
  // every other node, so each round costs n^2 frames.
  const std::size_t n = 10;
  std::vector<Vec3> pos;
  for (std::size_t i = 0; i < n; ++i) pos.push_back({100.0 + 8.0 * i, 200, 100});
  auto s = static_scenario(pos, 0, 1);
  s.duration = 900.0;
  s.warmup = 30.0;
  s.mac.link_rate_bps = 1e13;
  s.mac.broadcast_jitter = 0.0;
  const auto m = run(s);

  // Originations at phase + k*0.5 <= duration + drain with phase in (0, 0.5).
  const std::uint64_t rounds = static_cast<std::uint64_t>((900.0 + 1.0) / 0.5);
  EXPECT_EQ(m.chirp_frames, n * n * rounds);
  EXPECT_EQ(m.overhead_bytes, m.chirp_frames * (40 + 56));
}

TEST(Simulation, RunOnlyOnce) {
  Simulation sim(static_scenario({{0, 0, 0}, {10, 0, 0}}, 0, 1));
  sim.run();
  EXPECT_THROW(sim.run(), std::logic_error);
}

TEST(Scenario, Validation) {
  Scenario s;
  s.nodes = 1;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.warmup = s.duration;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.flow = {{0, 0}};
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.fixed_positions = {{0, 0, 0}};
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(OptimalBound, ConstructedTraces) {
  PositionTrace full{1.0, {{{0, 0, 0}, {50, 0, 0}, {100, 0, 0}}}};
  const std::vector<double> times{0.0, 0.5, 1.0};
  EXPECT_EQ(optimal_pdr_bound(full, 60, times, 0, 2), 1.0);
  EXPECT_EQ(optimal_pdr_bound(full, 40, times, 0, 2), 0.0);

  PositionTrace split{1.0, {{{0, 0, 0}, {50, 0, 0}}, {{0, 0, 0}, {500, 0, 0}}}};
  const std::vector<double> half{0.0, 0.3, 1.0, 1.7};
  EXPECT_EQ(optimal_pdr_bound(split, 60, half, 0, 1), 0.5);
  EXPECT_EQ(optimal_pdr_bound(split, 60, {}, 0, 1), 0.0);
}

TEST(OptimalBound, DiskReachability) {
  const std::vector<Vec3> pos{{0, 0, 0}, {90, 0, 0}, {180, 0, 0}, {400, 0, 0}};
  EXPECT_TRUE(disk_reachable(pos, 100, 0, 2));
  EXPECT_FALSE(disk_reachable(pos, 100, 0, 3));
  EXPECT_TRUE(disk_reachable(pos, 100, 3, 3));
}

TEST(Greedy, NextHopRules) {
  const Vec3 dest{0, 0, 0};
  const Vec3 self{100, 0, 0};
  std::vector<NeighborPosition> n{{4, {120, 0, 0}}, {7, {80, 0, 0}}};
  EXPECT_EQ(greedy_next_hop(n, self, dest), 7U);

  n = {{4, {120, 0, 0}}, {7, {0, 130, 0}}};
  EXPECT_FALSE(greedy_next_hop(n, self, dest).has_value());

  n = {{9, {0, 60, 0}}, {3, {0, -60, 0}}, {5, {60, 0, 0}}};
  EXPECT_EQ(greedy_next_hop(n, self, dest), 3U);
}

TEST(Metrics, Reduction) {
  std::vector<PacketRecord> pk(1000);
  for (std::size_t i = 0; i < pk.size(); ++i) {
    pk[i].emitted = i * 0.01;
    if (i < 900) {
      pk[i].state = PacketState::delivered;
      pk[i].delivered_at = pk[i].emitted + 0.002;
    } else if (i < 950) {
      pk[i].state = PacketState::dropped;
      pk[i].cause = DropCause::no_route;
    }
  }
  const auto m = collect_metrics(pk, 12, 96, 0.95);
  EXPECT_EQ(m.sent, 1000U);
  EXPECT_EQ(m.delivered, 900U);
  EXPECT_DOUBLE_EQ(m.pdr, 0.9);
  EXPECT_NEAR(m.latency_mean, 0.002, 1e-12);
  EXPECT_EQ(m.drops.no_route, 50U);
  EXPECT_EQ(m.drops.queue, 50U);
  EXPECT_EQ(m.overhead_bytes, 12U * 96U);
  EXPECT_EQ(m.optimal_bound, 0.95);

  const auto empty = collect_metrics({}, 0, 96, 0.0);
  EXPECT_EQ(empty.pdr, kUndefinedPdr);
}

TEST(Trace, WritesOneLinePerNodePerTick) {
  PositionTrace t{0.1, {{{1, 2, 3}, {4, 5, 6}}, {{1.5, 2, 3}, {4, 5, 6}}}};
  const auto path = std::filesystem::temp_directory_path() / "parrot_trace_test.txt";
  write_trace(t, path.string());
  std::ifstream in(path);
  std::string l;
  int lines = 0;
  while (std::getline(in, l)) ++lines;
  EXPECT_EQ(lines, 4);
  std::filesystem::remove(path);
}
