#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "parrot/vec3.hpp"

namespace parrot {

using NodeId = std::uint32_t;

}  // namespace parrot

namespace parrot::chirp {

inline constexpr std::size_t kFrameSize = 40;
inline constexpr std::uint16_t kDefaultInitialTtl = 16;

using Frame = std::array<std::byte, kFrameSize>;

/// Periodic routing beacon. Position fields describe the last forwarder, not
/// necessarily the originator.
struct Chirp {
  NodeId originator = 0;
  Vec3 position;
  Vec3 predicted_position;
  float reward = 0.0F;
  float cohesion = 0.0F;
  std::uint16_t seq = 0;
  std::uint16_t ttl = kDefaultInitialTtl;

  friend bool operator==(const Chirp&, const Chirp&) = default;
};

class ChirpError : public std::runtime_error {
 public:
  enum class Kind { malformed, semantic, invalid };

  ChirpError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Wire layout (big-endian, floats as IEEE-754 binary32):
///
///   0  originator       u32
///   4  position         3 x f32
///  16  predicted pos    3 x f32
///  28  reward V         f32
///  32  cohesion         f32
///  36  SEQ              u16
///  38  TTL              u16
///
/// Positions are narrowed to binary32 on the wire.
/// Throws ChirpError(invalid) when reward/cohesion leave [0,1] or a field is not finite.
Frame encode_chirp(const Chirp& c);

/// Throws ChirpError(malformed) on a length mismatch and ChirpError(semantic)
/// on non-finite floats or out-of-range reward/cohesion.
Chirp decode_chirp(std::span<const std::byte> frame);

/// Serial-number freshness: true iff 0 < (incoming - stored) mod 2^16 < 2^15.
constexpr bool seq_newer(std::uint16_t incoming, std::uint16_t stored) {
  const auto diff = static_cast<std::uint16_t>(incoming - stored);
  return diff != 0 && diff < 0x8000;
}

}  // namespace parrot::chirp
