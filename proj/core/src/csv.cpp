#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "parrot/campaign.hpp"
#include "parrot/errors.hpp"

namespace parrot::campaign {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  std::string out(buf, res.ptr);
  if (out == "-0.000000") out.erase(0, 1);
  return out;
}

std::string to_csv(const std::vector<PointSummary>& points) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const PointSummary& p : points) {
    const double fields[] = {
        p.pdr.mean,      p.pdr.ci95,         p.latency.mean,      p.latency.ci95,
        p.latency_p99,   p.overhead_bytes,   p.optimal_bound_mean, p.drops_no_route,
        p.drops_ttl,     p.drops_collision,  p.drops_channel,     p.drops_queue,
    };
    out += format_number(p.sweep_value);
    out += ',';
    out += std::to_string(p.runs);
    for (double f : fields) {
      out += ',';
      out += format_number(f);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<PointSummary>& points, const std::filesystem::path& path) {
  if (points.empty()) throw ConfigError("refusing to write an empty result table");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string text = to_csv(points);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<PointSummary> parse_csv(std::string_view text) {
  std::vector<PointSummary> out;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw ConfigError("unexpected CSV header");
      header = false;
      continue;
    }

    std::vector<double> values;
    while (true) {
      const auto comma = line.find(',');
      const std::string_view cell = line.substr(0, comma);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw ConfigError("malformed CSV cell '" + std::string(cell) + "'");
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (values.size() != 14) throw ConfigError("CSV row must have 14 columns");

    PointSummary p;
    p.sweep_value = values[0];
    p.runs = static_cast<std::size_t>(values[1]);
    p.pdr = {values[2], values[3]};
    p.latency = {values[4], values[5]};
    p.latency_p99 = values[6];
    p.overhead_bytes = values[7];
    p.optimal_bound_mean = values[8];
    p.drops_no_route = values[9];
    p.drops_ttl = values[10];
    p.drops_collision = values[11];
    p.drops_channel = values[12];
    p.drops_queue = values[13];
    out.push_back(p);
  }
  return out;
}

}  // namespace parrot::campaign
