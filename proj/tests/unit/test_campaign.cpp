#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "parrot/campaign.hpp"
#include "parrot/errors.hpp"

using namespace parrot;
using namespace parrot::campaign;

namespace {

CampaignConfig parse(const std::string& text, const std::vector<std::string>& overrides = {}) {
  std::istringstream in(text);
  CampaignConfig cfg;
  parse_config(in, "test.cfg", overrides, cfg);
  return cfg;
}

std::string error_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, DefaultsMatchReferenceScenario) {
  const CampaignConfig cfg = load_config("", {});
  const auto& s = cfg.base;
  EXPECT_EQ(s.routing.alpha, 0.5);
  EXPECT_EQ(s.routing.gamma0, 0.8);
  EXPECT_EQ(s.routing.tau, 2.5);
  EXPECT_EQ(s.routing.chirp_interval, 0.5);
  EXPECT_EQ(s.mobility.dt, 0.1);
  EXPECT_EQ(s.mobility.r_w, 10.0);
  EXPECT_EQ(s.nodes, 10U);
  EXPECT_EQ(s.duration, 900.0);
  EXPECT_NEAR(s.speed, 50.0 / 3.6, 1e-12);
  EXPECT_EQ(s.traffic.cbr_rate_bps, 2e6);
  EXPECT_EQ(cfg.runs, 25U);
}

TEST(Config, OverridesWinOverFile) {
  const auto cfg = parse("alpha = 0.5  # comment\n\n", {"alpha=0.7"});
  EXPECT_EQ(cfg.base.routing.alpha, 0.7);
}

TEST(Config, RejectsOutOfRangeAndUnknown) {
  EXPECT_NE(error_of("alpha = 1.5\n").find("alpha"), std::string::npos);
  EXPECT_NE(error_of("alpha = 1.5\n").find("test.cfg:1"), std::string::npos);
  EXPECT_NE(error_of("\nbogus = 1\n").find("bogus"), std::string::npos);
  EXPECT_NE(error_of("alpha = abc\n").find("alpha"), std::string::npos);
  EXPECT_FALSE(error_of("gamma0 = 1.0\n").empty());
  EXPECT_TRUE(error_of("allow_gamma0_one = true\ngamma0 = 1.0\n").empty());
  EXPECT_FALSE(error_of("", {"noequals"}).empty());
}

TEST(Config, ChannelProtocolAndRange) {
  const auto cfg = parse("protocol = greedy\nchannel = urban\nrange = 180\nspeed_kmh = 150\n");
  EXPECT_EQ(cfg.base.protocol, sim::Protocol::greedy);
  EXPECT_EQ(cfg.base.channel, channel::Model::urban);
  EXPECT_NEAR(channel::compute_r_tx(cfg.base.budget), 180.0, 1e-9);
  EXPECT_NEAR(cfg.base.speed, 150 / 3.6, 1e-12);
  EXPECT_FALSE(error_of("protocol = aodv\n").empty());
}

TEST(Config, SweepValidation) {
  const auto cfg = parse("sweep_param = alpha\nsweep_values = 0.05, 0.5,1.0\n");
  EXPECT_EQ(cfg.sweep_values, (std::vector<double>{0.05, 0.5, 1.0}));
  EXPECT_EQ(cfg.point_count(), 3U);

  CampaignConfig bad = cfg;
  bad.sweep_param = "payload";
  EXPECT_THROW(cell_scenario(bad, 0, 0), ConfigError);
  bad = cfg;
  bad.sweep_values = {0.5, 2.0};
  bad.runs = 1;
  EXPECT_THROW(cell_scenario(bad, 1, 0), ConfigError);
}

TEST(Seeds, DistinctPerCell) {
  std::set<std::uint64_t> seen;
  for (std::size_t p = 0; p < 4; ++p) {
    for (std::size_t r = 0; r < 25; ++r) seen.insert(derive_seed(1, p, r));
  }
  EXPECT_EQ(seen.size(), 100U);
  EXPECT_EQ(derive_seed(9, 2, 3), derive_seed(9, 2, 3));
}

TEST(Campaign, SinglePointRowAndDeterminism) {
  CampaignConfig cfg;
  cfg.base.duration = 40.0;
  cfg.base.warmup = 10.0;
  cfg.runs = 4;
  cfg.jobs = 2;
  const auto a = run_campaign(cfg);
  ASSERT_EQ(a.cells.size(), 4U);
  ASSERT_EQ(a.points.size(), 1U);
  std::set<std::uint64_t> seeds;
  for (const auto& c : a.cells) seeds.insert(c.seed);
  EXPECT_EQ(seeds.size(), 4U);

  cfg.jobs = 1;
  EXPECT_EQ(to_csv(a.points), to_csv(run_campaign(cfg).points));
}

TEST(Campaign, FailingPointIsIdentified) {
  CampaignConfig cfg;
  cfg.base.duration = 5.0;
  cfg.base.warmup = 1.0;
  cfg.runs = 1;
  cfg.sweep_param = "alpha";
  cfg.sweep_values = {0.5, 1.5};
  try {
    run_campaign(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("1.5"), std::string::npos) << what;
    EXPECT_NE(what.find("alpha"), std::string::npos) << what;
  }
}

TEST(Statistics, CiScalesWithSampleCount) {
  // Alternating +-1 keeps the sample variance essentially fixed.
  auto samples = [](std::size_t n) {
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(i % 2 ? 1.0 : -1.0);
    return v;
  };
  const double ci25 = mean_ci95(samples(26)).ci95;
  const double ci100 = mean_ci95(samples(104)).ci95;
  EXPECT_NEAR(ci25 / ci100, 2.0, 0.05);
  EXPECT_EQ(mean_ci95({0.7}).ci95, 0.0);
  EXPECT_NEAR(mean_ci95({1.0, 3.0}).ci95, 1.96 * std::sqrt(2.0) / std::sqrt(2.0), 1e-12);
}

TEST(Csv, HeaderAndFormat) {
  PointSummary p;
  p.sweep_value = 0.5;
  p.runs = 25;
  p.pdr = {0.9, 0.02};
  const std::string csv = to_csv({p});
  const auto nl = csv.find('\n');
  EXPECT_EQ(csv.substr(0, nl), kCsvHeader);
  EXPECT_EQ(kCsvHeader.substr(0, 40), "sweep_value,runs,pdr_mean,pdr_ci95,laten");
  EXPECT_NE(csv.find("0.500000,25,0.900000,0.020000,"), std::string::npos);
  EXPECT_EQ(format_number(-0.0), "0.000000");
  EXPECT_EQ(format_number(-1e-9), "0.000000");
  EXPECT_EQ(format_number(1234.5), "1234.500000");
}

TEST(Csv, RoundTrip) {
  PointSummary p;
  p.sweep_value = 2.5;
  p.runs = 3;
  p.pdr = {0.812345, 0.0125};
  p.latency = {0.0042, 0.0001};
  p.drops_queue = 7.25;
  const auto back = parse_csv(to_csv({p, p}));
  ASSERT_EQ(back.size(), 2U);
  EXPECT_EQ(back[1].runs, 3U);
  EXPECT_DOUBLE_EQ(back[1].pdr.mean, 0.812345);
  EXPECT_DOUBLE_EQ(back[1].drops_queue, 7.25);
  EXPECT_EQ(to_csv(back), to_csv({p, p}));
}

TEST(Csv, EmitRefusesEmptyAndReportsPath) {
  const auto dir = std::filesystem::temp_directory_path() / "parrot_csv_test";
  std::filesystem::create_directories(dir);
  EXPECT_THROW(emit_csv({}, dir / "x.csv"), ConfigError);
  try {
    emit_csv({PointSummary{}}, dir / "missing" / "x.csv");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
  emit_csv({PointSummary{}}, dir / "ok.csv");
  EXPECT_TRUE(std::filesystem::exists(dir / "ok.csv"));
  std::filesystem::remove_all(dir);
}
