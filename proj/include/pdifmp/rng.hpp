#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pdifmp {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32-10 block: 10 rounds of the Salmon et al. bijection.
constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kMulA = 0xD2511F53u;
  constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t prod_a = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t prod_b = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const auto hi_a = static_cast<std::uint32_t>(prod_a >> 32);
    const auto lo_a = static_cast<std::uint32_t>(prod_a);
    const auto hi_b = static_cast<std::uint32_t>(prod_b >> 32);
    const auto lo_b = static_cast<std::uint32_t>(prod_b);
    ctr = {hi_b ^ ctr[1] ^ key[0], lo_b, hi_a ^ ctr[3] ^ key[1], lo_a};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

/// What a substream is consumed for. Each purpose gets its own counter space
/// so the number of jumps on a path never shifts the Wiener increments.
enum class StreamPurpose : std::uint32_t { Wiener = 1, JumpClock = 2, Kernel = 3 };

/// Counter-based 64-bit engine addressed by (seed, path index, purpose).
///
/// The key holds the seed; the upper two counter words hold the path index
/// and purpose; the lower two words count blocks. Satisfies
/// UniformRandomBitGenerator, so it plugs into <random> distributions.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  PhiloxStream(std::uint64_t seed, std::uint64_t path_index, StreamPurpose purpose)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_hi_{static_cast<std::uint32_t>(path_index),
                   (static_cast<std::uint32_t>(path_index >> 32) << 8) |
                       static_cast<std::uint32_t>(purpose)} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

  std::uint64_t blocks_consumed() const { return block_; }

 private:
  void refill() {
    const PhiloxCounter out = philox4x32_10(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         stream_hi_[0], stream_hi_[1]},
        key_);
    ++block_;
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    lane_ = 0;
  }

  PhiloxKey key_;
  std::array<std::uint32_t, 2> stream_hi_;
  std::uint64_t block_ = 0;
  std::array<result_type, 2> buffer_{};
  int lane_ = 2;
};

/// Uniform on the open interval (0, 1) with 53-bit resolution.
template <class Engine>
double uniform_open(Engine& engine) {
  // 52 bits so that the largest value, 1 - 2^-53, is still below 1.
  return (static_cast<double>(engine() >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace pdifmp
