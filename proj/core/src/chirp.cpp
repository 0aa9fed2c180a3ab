#include "parrot/chirp.hpp"

#include <bit>
#include <cmath>

namespace parrot::chirp {
namespace {

class Writer {
 public:
  explicit Writer(Frame& out) : out_(out) {}

  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
      out_[pos_++] = static_cast<std::byte>((v >> shift) & 0xFFU);
    }
  }
  void u16(std::uint16_t v) {
    out_[pos_++] = static_cast<std::byte>((v >> 8) & 0xFFU);
    out_[pos_++] = static_cast<std::byte>(v & 0xFFU);
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void vec(const Vec3& v) {
    f32(static_cast<float>(v.x));
    f32(static_cast<float>(v.y));
    f32(static_cast<float>(v.z));
  }

 private:
  Frame& out_;
  std::size_t pos_ = 0;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> in) : in_(in) {}

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | std::to_integer<std::uint32_t>(in_[pos_++]);
    return v;
  }
  std::uint16_t u16() {
    const auto hi = std::to_integer<std::uint16_t>(in_[pos_++]);
    const auto lo = std::to_integer<std::uint16_t>(in_[pos_++]);
    return static_cast<std::uint16_t>((hi << 8) | lo);
  }
  float f32() { return std::bit_cast<float>(u32()); }
  Vec3 vec() {
    const float x = f32();
    const float y = f32();
    const float z = f32();
    return {x, y, z};
  }

 private:
  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
};

bool unit_interval(float v) { return std::isfinite(v) && v >= 0.0F && v <= 1.0F; }

bool finite_as_f32(const Vec3& v) {
  return std::isfinite(static_cast<float>(v.x)) && std::isfinite(static_cast<float>(v.y)) &&
         std::isfinite(static_cast<float>(v.z));
}

}  // namespace

Frame encode_chirp(const Chirp& c) {
  if (!unit_interval(c.reward)) throw ChirpError(ChirpError::Kind::invalid, "reward outside [0,1]");
  if (!unit_interval(c.cohesion)) {
    throw ChirpError(ChirpError::Kind::invalid, "cohesion outside [0,1]");
  }
  if (!finite_as_f32(c.position) || !finite_as_f32(c.predicted_position)) {
    throw ChirpError(ChirpError::Kind::invalid, "position not representable as finite binary32");
  }

  Frame out{};
  Writer w(out);
  w.u32(c.originator);
  w.vec(c.position);
  w.vec(c.predicted_position);
  w.f32(c.reward);
  w.f32(c.cohesion);
  w.u16(c.seq);
  w.u16(c.ttl);
  return out;
}

Chirp decode_chirp(std::span<const std::byte> frame) {
  if (frame.size() != kFrameSize) {
    throw ChirpError(ChirpError::Kind::malformed,
                     "chirp frame must be 40 bytes, got " + std::to_string(frame.size()));
  }
  Reader r(frame);
  Chirp c;
  c.originator = r.u32();
  c.position = r.vec();
  c.predicted_position = r.vec();
  c.reward = r.f32();
  c.cohesion = r.f32();
  c.seq = r.u16();
  c.ttl = r.u16();

  if (!is_finite(c.position) || !is_finite(c.predicted_position)) {
    throw ChirpError(ChirpError::Kind::semantic, "non-finite position");
  }
  if (!unit_interval(c.reward)) throw ChirpError(ChirpError::Kind::semantic, "reward outside [0,1]");
  if (!unit_interval(c.cohesion)) {
    throw ChirpError(ChirpError::Kind::semantic, "cohesion outside [0,1]");
  }
  return c;
}

}  // namespace parrot::chirp
