#include <benchmark/benchmark.h>

#include <random>

#include "parrot/chirp.hpp"
#include "parrot/kinematics.hpp"
#include "parrot/routing.hpp"
#include "parrot/simulator.hpp"

using namespace parrot;

namespace {

chirp::Chirp sample_chirp() {
  chirp::Chirp c;
  c.originator = 7;
  c.position = {120.5, 33.25, 80.0};
  c.predicted_position = {150.0, 40.0, 80.0};
  c.reward = 0.64F;
  c.cohesion = 0.9F;
  c.seq = 4242;
  c.ttl = 12;
  return c;
}

void BM_EncodeDecode(benchmark::State& state) {
  const chirp::Chirp c = sample_chirp();
  for (auto _ : state) {
    const auto frame = chirp::encode_chirp(c);
    benchmark::DoNotOptimize(chirp::decode_chirp(frame));
  }
}
BENCHMARK(BM_EncodeDecode);

void BM_ComputeLet(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-150, 150);
  std::vector<std::pair<Vec3, Vec3>> inputs;
  for (int i = 0; i < 1024; ++i) inputs.push_back({{u(rng), u(rng), u(rng)}, {u(rng) / 5, u(rng) / 5, 0}});
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [dp, dv] = inputs[i++ & 1023];
    benchmark::DoNotOptimize(routing::compute_let(dp, dv, 200.0));
  }
}
BENCHMARK(BM_ComputeLet);

void BM_PredictWaypoint(benchmark::State& state) {
  kinematics::MobilityConfig cfg;
  std::mt19937_64 rng(2);
  const auto s = kinematics::make_random_waypoint_node(kinematics::Box{}, 50 / 3.6, 900, cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kinematics::predict_waypoint(s, cfg));
}
BENCHMARK(BM_PredictWaypoint);

void BM_HandleChirp(benchmark::State& state) {
  routing::RoutingState r(0, {});
  chirp::Chirp c = sample_chirp();
  const routing::SelfView self{{100, 30, 80}, {110, 35, 80}};
  double now = 0.0;
  for (auto _ : state) {
    ++c.seq;
    now += 1e-3;
    benchmark::DoNotOptimize(r.handle_chirp(c, 3 + (c.seq & 3), self, now));
  }
}
BENCHMARK(BM_HandleChirp);

void BM_SimulationRun(benchmark::State& state) {
  sim::Scenario s;
  s.duration = static_cast<double>(state.range(0));
  s.warmup = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run(s));
  state.SetLabel("simulated seconds: " + std::to_string(state.range(0)));
}
BENCHMARK(BM_SimulationRun)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
