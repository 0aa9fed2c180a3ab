#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "parrot/campaign.hpp"
#include "parrot/channel.hpp"
#include "parrot/errors.hpp"

namespace parrot::campaign {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(out)) {
    throw ConfigError("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_uint(std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError("expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected a boolean, got '" + std::string(v) + "'");
}

double positive(std::string_view v) {
  const double x = parse_double(v);
  if (!(x > 0.0)) throw ConfigError("must be > 0");
  return x;
}

double non_negative(std::string_view v) {
  const double x = parse_double(v);
  if (!(x >= 0.0)) throw ConfigError("must be >= 0");
  return x;
}

std::uint64_t at_least(std::string_view v, std::uint64_t lo) {
  const auto x = parse_uint(v);
  if (x < lo) throw ConfigError("must be >= " + std::to_string(lo));
  return x;
}

void set_chirp_interval(sim::Scenario& s, double interval) {
  s.routing.chirp_interval = interval;
  s.routing.neighbor_timeout = 3.0 * interval;
  s.routing.entry_timeout = 6.0 * interval;
  s.routing.cohesion_window = interval;
}

using Setter = std::function<void(CampaignConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      // learning
      {"alpha", [](CampaignConfig& c, std::string_view v) {
         const double a = parse_double(v);
         if (!(a > 0.0 && a <= 1.0)) throw ConfigError("must lie in (0,1]");
         c.base.routing.alpha = a;
       }},
      {"gamma0", [](CampaignConfig& c, std::string_view v) {
         const double g = parse_double(v);
         if (!(g > 0.0 && g <= 1.0)) throw ConfigError("must lie in (0,1]");
         c.base.routing.gamma0 = g;
       }},
      {"allow_gamma0_one",
       [](CampaignConfig& c, std::string_view v) { c.base.routing.allow_unit_gamma0 = parse_bool(v); }},
      {"learn_from_duplicates", [](CampaignConfig& c, std::string_view v) {
         c.base.routing.learn_from_duplicates = parse_bool(v);
       }},
      {"tau", [](CampaignConfig& c, std::string_view v) {
         const double t = non_negative(v);
         c.base.routing.tau = t;
         c.base.mobility.tau = t;
       }},
      {"chirp_interval",
       [](CampaignConfig& c, std::string_view v) { set_chirp_interval(c.base, positive(v)); }},
      {"neighbor_timeout",
       [](CampaignConfig& c, std::string_view v) { c.base.routing.neighbor_timeout = positive(v); }},
      {"entry_timeout",
       [](CampaignConfig& c, std::string_view v) { c.base.routing.entry_timeout = positive(v); }},
      {"cohesion_window",
       [](CampaignConfig& c, std::string_view v) { c.base.routing.cohesion_window = positive(v); }},
      {"initial_ttl", [](CampaignConfig& c, std::string_view v) {
         const auto t = at_least(v, 1);
         if (t > 0xFFFF) throw ConfigError("must fit in 16 bits");
         c.base.routing.initial_ttl = static_cast<std::uint16_t>(t);
       }},
      {"q_floor", [](CampaignConfig& c, std::string_view v) {
         const double q = non_negative(v);
         if (q >= 1.0) throw ConfigError("must lie in [0,1)");
         c.base.routing.q_floor = q;
       }},
      // mobility
      {"dt", [](CampaignConfig& c, std::string_view v) { c.base.mobility.dt = positive(v); }},
      {"waypoint_radius",
       [](CampaignConfig& c, std::string_view v) { c.base.mobility.r_w = positive(v); }},
      {"history", [](CampaignConfig& c, std::string_view v) {
         c.base.mobility.h = static_cast<std::size_t>(at_least(v, 2));
       }},
      {"speed", [](CampaignConfig& c, std::string_view v) { c.base.speed = non_negative(v); }},
      {"speed_kmh",
       [](CampaignConfig& c, std::string_view v) { c.base.speed = non_negative(v) / 3.6; }},
      // scenario
      {"nodes", [](CampaignConfig& c, std::string_view v) {
         c.base.nodes = static_cast<std::size_t>(at_least(v, 2));
       }},
      {"duration", [](CampaignConfig& c, std::string_view v) { c.base.duration = positive(v); }},
      {"warmup", [](CampaignConfig& c, std::string_view v) { c.base.warmup = non_negative(v); }},
      {"drain", [](CampaignConfig& c, std::string_view v) { c.base.drain = non_negative(v); }},
      {"box_x", [](CampaignConfig& c, std::string_view v) { c.base.box.extent.x = positive(v); }},
      {"box_y", [](CampaignConfig& c, std::string_view v) { c.base.box.extent.y = positive(v); }},
      {"box_z", [](CampaignConfig& c, std::string_view v) { c.base.box.extent.z = positive(v); }},
      {"cbr_rate",
       [](CampaignConfig& c, std::string_view v) { c.base.traffic.cbr_rate_bps = positive(v); }},
      {"payload", [](CampaignConfig& c, std::string_view v) {
         c.base.traffic.payload_bytes = static_cast<std::size_t>(at_least(v, 1));
       }},
      {"hop_budget", [](CampaignConfig& c, std::string_view v) {
         c.base.data_hop_budget = static_cast<std::uint32_t>(at_least(v, 1));
       }},
      {"protocol", [](CampaignConfig& c, std::string_view v) {
         if (v == "parrot") c.base.protocol = sim::Protocol::parrot;
         else if (v == "greedy") c.base.protocol = sim::Protocol::greedy;
         else if (v == "flood") c.base.protocol = sim::Protocol::flood;
         else throw ConfigError("expected parrot|greedy|flood, got '" + std::string(v) + "'");
       }},
      {"channel", [](CampaignConfig& c, std::string_view v) {
         if (v == "rural") c.base.channel = channel::Model::rural;
         else if (v == "urban") c.base.channel = channel::Model::urban;
         else throw ConfigError("expected rural|urban, got '" + std::string(v) + "'");
       }},
      // radio
      {"tx_power",
       [](CampaignConfig& c, std::string_view v) { c.base.budget.tx_power_dbm = parse_double(v); }},
      {"frequency",
       [](CampaignConfig& c, std::string_view v) { c.base.budget.frequency_hz = positive(v); }},
      {"path_loss_exponent",
       [](CampaignConfig& c, std::string_view v) { c.base.budget.path_loss_exponent = positive(v); }},
      {"d0", [](CampaignConfig& c, std::string_view v) { c.base.budget.d0 = positive(v); }},
      {"sensitivity", [](CampaignConfig& c, std::string_view v) {
         c.base.budget.sensitivity_dbm = parse_double(v);
       }},
      {"range", [](CampaignConfig& c, std::string_view v) {
         c.base.budget.sensitivity_dbm = channel::mean_rx_power(c.base.budget, positive(v));
       }},
      {"nakagami_m", [](CampaignConfig& c, std::string_view v) {
         const double m = parse_double(v);
         if (!(m >= 0.5)) throw ConfigError("must be >= 0.5");
         c.base.budget.nakagami_m = m;
       }},
      // mac
      {"link_rate",
       [](CampaignConfig& c, std::string_view v) { c.base.mac.link_rate_bps = positive(v); }},
      {"header_bytes", [](CampaignConfig& c, std::string_view v) {
         c.base.mac.header_bytes = static_cast<std::size_t>(parse_uint(v));
       }},
      {"queue_limit", [](CampaignConfig& c, std::string_view v) {
         c.base.mac.queue_limit = static_cast<std::size_t>(at_least(v, 1));
       }},
      {"unicast_retries", [](CampaignConfig& c, std::string_view v) {
         c.base.mac.unicast_retries = static_cast<int>(parse_uint(v));
       }},
      {"retry_backoff",
       [](CampaignConfig& c, std::string_view v) { c.base.mac.retry_backoff = non_negative(v); }},
      {"broadcast_jitter",
       [](CampaignConfig& c, std::string_view v) { c.base.mac.broadcast_jitter = non_negative(v); }},
      // campaign
      {"seed", [](CampaignConfig& c, std::string_view v) { c.base_seed = parse_uint(v); }},
      {"runs", [](CampaignConfig& c, std::string_view v) {
         c.runs = static_cast<std::size_t>(at_least(v, 1));
       }},
      {"jobs", [](CampaignConfig& c, std::string_view v) {
         c.jobs = static_cast<std::size_t>(parse_uint(v));
       }},
      {"sweep_param", [](CampaignConfig& c, std::string_view v) { c.sweep_param = std::string(v); }},
      {"sweep_values", [](CampaignConfig& c, std::string_view v) {
         c.sweep_values.clear();
         while (!v.empty()) {
           const auto comma = v.find(',');
           c.sweep_values.push_back(parse_double(trim(v.substr(0, comma))));
           if (comma == std::string_view::npos) break;
           v.remove_prefix(comma + 1);
         }
       }},
      {"output_dir", [](CampaignConfig& c, std::string_view v) { c.output_dir = std::string(v); }},
      {"trace", [](CampaignConfig& c, std::string_view v) { c.trace = parse_bool(v); }},
  };
  return table;
}

constexpr std::string_view kSweepable[] = {
    "alpha",    "gamma0",   "tau",        "chirp_interval", "nodes",
    "speed",    "speed_kmh", "duration",  "cbr_rate",       "nakagami_m",
    "path_loss_exponent", "waypoint_radius", "history", "range",
};

bool is_sweepable(std::string_view p) {
  return std::find(std::begin(kSweepable), std::end(kSweepable), p) != std::end(kSweepable);
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

}  // namespace

void apply_setting(CampaignConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  try {
    it->second(cfg, value);
  } catch (const ConfigError& e) {
    throw ConfigError("key '" + std::string(key) + "': " + e.what());
  }
}

void apply_sweep_value(sim::Scenario& scenario, std::string_view param, double value) {
  if (!is_sweepable(param)) {
    throw ConfigError("sweep_param '" + std::string(param) + "' is not sweepable");
  }
  CampaignConfig tmp;
  tmp.base = scenario;
  apply_setting(tmp, param, shortest(value));
  scenario = tmp.base;
}

void CampaignConfig::validate() const {
  if (runs < 1) throw ConfigError("key 'runs': must be >= 1");
  if (!sweep_values.empty() && sweep_param.empty()) {
    throw ConfigError("key 'sweep_values': given without sweep_param");
  }
  if (!sweep_param.empty() && sweep_values.empty()) {
    throw ConfigError("key 'sweep_values': sweep_param '" + sweep_param + "' needs values");
  }
  base.validate();
  for (double v : sweep_values) {
    sim::Scenario s = base;
    try {
      apply_sweep_value(s, sweep_param, v);
      s.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("key 'sweep_values': value " + shortest(v) + " for '" + sweep_param +
                        "': " + e.what());
    }
  }
}

void parse_config(std::istream& in, std::string_view source_name,
                  const std::vector<std::string>& overrides, CampaignConfig& cfg) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;

    const auto where = std::string(source_name) + ":" + std::to_string(line_no) + ": ";
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected 'key = value', got '" + std::string(view) + "'");
    }
    try {
      apply_setting(cfg, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }

  for (const std::string& o : overrides) {
    const std::string_view view = o;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("--set " + o + ": expected key=value");
    }
    try {
      apply_setting(cfg, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("--set " + o + ": " + e.what());
    }
  }
  cfg.validate();
}

CampaignConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  CampaignConfig cfg;
  if (path.empty()) {
    std::istringstream empty;
    parse_config(empty, "<defaults>", overrides, cfg);
    return cfg;
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  parse_config(in, path, overrides, cfg);
  return cfg;
}

}  // namespace parrot::campaign
