#include "phasecs/rng.hpp"

#include <cmath>
#include <numbers>

namespace phasecs::rng {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t p : parts) s = splitmix64(s ^ (p + 0x9e3779b97f4a7c15ULL));
  return s;
}

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWey0 = 0x9E3779B9u;
constexpr std::uint32_t kWey1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
  std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  std::uint32_t n0 = hi1 ^ c[1] ^ k0;
  std::uint32_t n1 = lo1;
  std::uint32_t n2 = hi0 ^ c[3] ^ k1;
  std::uint32_t n3 = lo0;
  c[0] = n0;
  c[1] = n1;
  c[2] = n2;
  c[3] = n3;
}

}  // namespace

std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t block_index) {
  std::uint32_t c[4] = {
      static_cast<std::uint32_t>(block_index),
      static_cast<std::uint32_t>(block_index >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32),
  };
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  for (int r = 0; r < 10; ++r) {
    philox_round(c, k0, k1);
    k0 += kWey0;
    k1 += kWey1;
  }
  return {c[0], c[1], c[2], c[3]};
}

std::uint64_t UniformStream::word(std::uint64_t i) const {
  auto b = philox_block(seed_, stream_, i >> 1);
  if (i & 1) return (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
  return (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
}

std::uint64_t UniformStream::below(std::uint64_t bound, std::uint64_t i) const {
  // multiply-high maps the full 64-bit word into [0, bound)
  unsigned __int128 wide = static_cast<unsigned __int128>(word(i)) * bound;
  return static_cast<std::uint64_t>(wide >> 64);
}

double GaussianStream::at(std::uint64_t i) const {
  std::uint64_t blk = i >> 1;
  if (blk != cached_block_) {
    auto b = philox_block(seed_, stream_, blk);
    std::uint64_t wa = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
    std::uint64_t wb = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
    // u1 in (0, 1] keeps the log finite; u2 in [0, 1)
    double u1 = 1.0 - static_cast<double>(wa >> 11) * 0x1.0p-53;
    double u2 = static_cast<double>(wb >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    cached_[0] = r * std::cos(theta);
    cached_[1] = r * std::sin(theta);
    cached_block_ = blk;
  }
  return cached_[i & 1];
}

}  // namespace phasecs::rng
