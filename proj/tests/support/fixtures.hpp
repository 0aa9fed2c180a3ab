#pragma once

#include <cctype>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "parrot/chirp.hpp"

namespace parrot::test {

/// Reads a whitespace-separated hex dump into bytes.
inline std::vector<std::byte> read_hex_fixture(const std::string& name) {
  std::ifstream in(std::string(PARROT_FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::string digits;
  for (char ch; in.get(ch);) {
    if (std::isxdigit(static_cast<unsigned char>(ch))) digits.push_back(ch);
  }
  if (digits.size() % 2 != 0) throw std::runtime_error("odd hex digit count in " + name);
  std::vector<std::byte> out;
  for (std::size_t i = 0; i < digits.size(); i += 2) {
    out.push_back(static_cast<std::byte>(std::stoi(digits.substr(i, 2), nullptr, 16)));
  }
  return out;
}

inline chirp::Chirp golden_chirp() {
  chirp::Chirp c;
  c.originator = 1;
  c.position = {1.0, 0.0, 0.0};
  c.predicted_position = {0.0, 0.0, 0.0};
  c.reward = 1.0F;
  c.cohesion = 1.0F;
  c.seq = 1;
  c.ttl = 16;
  return c;
}

/// Valid chirp with binary32-exact coordinates so the wire round trip is lossless.
inline chirp::Chirp random_chirp(std::mt19937_64& rng) {
  std::uniform_real_distribution<float> coord(-1e4F, 1e4F);
  std::uniform_real_distribution<float> unit(0.0F, 1.0F);
  std::uniform_int_distribution<std::uint32_t> u32;
  std::uniform_int_distribution<std::uint32_t> u16(0, 0xFFFF);
  chirp::Chirp c;
  c.originator = u32(rng);
  c.position = {coord(rng), coord(rng), coord(rng)};
  c.predicted_position = {coord(rng), coord(rng), coord(rng)};
  c.reward = unit(rng);
  c.cohesion = unit(rng);
  c.seq = static_cast<std::uint16_t>(u16(rng));
  c.ttl = static_cast<std::uint16_t>(u16(rng));
  return c;
}

}  // namespace parrot::test
