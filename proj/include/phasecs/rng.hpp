#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace phasecs::rng {

// All randomness is counter-based: a (seed, stream, index) triple fully
// determines every value, independent of thread scheduling or call order.
// Streams are cheap value types; nothing is global.

std::uint64_t splitmix64(std::uint64_t x);

// Child seed derivation: folds each part into the master seed through
// splitmix64. Used for per-trial / per-restart substreams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts);

// Stream ids carry a domain tag in the top byte so the same index never
// collides across uses of one seed.
enum class Domain : std::uint8_t {
  Matrix = 1,
  SignalSupport = 2,
  SignalValues = 3,
  Trial = 4,
  Restart = 5,
  Sphere = 6,
  Points = 7,
  Misc = 8,
};

constexpr std::uint64_t stream_id(Domain d, std::uint64_t index) {
  return (static_cast<std::uint64_t>(d) << 56) | (index & 0x00ffffffffffffffULL);
}

// One 128-bit output block of the philox4x32-10 generator.
std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t block_index);

// Sequential/random-access stream of 64-bit words (two per block).
class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t word(std::uint64_t i) const;

  // [0, 1) with 53 random bits
  double u01(std::uint64_t i) const {
    return static_cast<double>(word(i) >> 11) * 0x1.0p-53;
  }

  // uniform in [0, bound) via 128-bit multiply-shift; bias below 2^-64
  std::uint64_t below(std::uint64_t bound, std::uint64_t i) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// Standard normal stream, two values per 128-bit block (Box-Muller). at(i) is
// pure random access; next() walks sequentially. The single-block cache only
// short-circuits recomputation, it never changes values.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  double at(std::uint64_t i) const;
  double next() { return at(cursor_++); }
  void reset(std::uint64_t cursor = 0) { cursor_ = cursor; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t cursor_ = 0;
  mutable std::uint64_t cached_block_ = ~0ULL;
  mutable double cached_[2] = {0.0, 0.0};
};

}  // namespace phasecs::rng
