#pragma once

#include <array>
#include <cstdint>

namespace qgalloy {

// Philox4x32-10 block function (Salmon et al., SC'11 constants).
// Pure: output depends only on (counter, key).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// One independent stream per (seed, trial, edge, tag).  Streams never
// interact: draw i of a stream is philox of the counter
//   (i_lo, i_hi | tag<<16, trial, edge)
// under the key (seed_lo, seed_hi), so results are reproducible for any
// scheduling of trials across workers.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint32_t trial, std::uint32_t edge,
               std::uint32_t tag = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        trial_(trial),
        edge_(edge),
        tag_(tag & 0xFFFFu) {}

  std::uint64_t next_bits() {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(index_),
        static_cast<std::uint32_t>((index_ >> 32) & 0xFFFFu) | (tag_ << 16),
        trial_, edge_};
    ++index_;
    const auto block = philox4x32(ctr, key_);
    return (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
  }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double uniform01() {
    return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t trial_;
  std::uint32_t edge_;
  std::uint32_t tag_;
  std::uint64_t index_ = 0;
};

}  // namespace qgalloy
