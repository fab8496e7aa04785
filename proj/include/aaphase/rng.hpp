#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace aa {

// Counter-based RNG: Philox 4x32 with 10 rounds.  Stateless by design --
// every (key, counter) pair yields an independent 128-bit block -- so noise
// realizations can run in parallel and in any order while each consumes a
// reproducible stream indexed by (realization, step).
class Philox {
 public:
  explicit Philox(uint64_t key)
      : k0_(static_cast<uint32_t>(key)),
        k1_(static_cast<uint32_t>(key >> 32)) {}

  // counter = (index lo, index hi, stream, domain)
  std::array<uint32_t, 4> block(uint64_t index, uint32_t stream,
                                uint32_t domain) const {
    uint32_t c0 = static_cast<uint32_t>(index);
    uint32_t c1 = static_cast<uint32_t>(index >> 32);
    uint32_t c2 = stream;
    uint32_t c3 = domain;
    uint32_t k0 = k0_, k1 = k1_;
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = static_cast<uint64_t>(kMul0) * c0;
      const uint64_t p1 = static_cast<uint64_t>(kMul1) * c2;
      const uint32_t n0 = static_cast<uint32_t>(p1 >> 32) ^ c1 ^ k0;
      const uint32_t n1 = static_cast<uint32_t>(p1);
      const uint32_t n2 = static_cast<uint32_t>(p0 >> 32) ^ c3 ^ k1;
      const uint32_t n3 = static_cast<uint32_t>(p0);
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
  }

  // 53-bit uniform in the open interval (0, 1).
  static double uniform01(uint32_t hi, uint32_t lo) {
    const uint64_t x =
        (static_cast<uint64_t>(hi) << 21) | (static_cast<uint64_t>(lo) >> 11);
    return (static_cast<double>(x) + 0.5) * 0x1p-53;
  }

  // Two independent standard normal draws from one block (Box-Muller).
  std::array<double, 2> normal_pair(uint64_t index, uint32_t stream,
                                    uint32_t domain) const {
    const auto b = block(index, stream, domain);
    const double u1 = uniform01(b[0], b[1]);
    const double u2 = uniform01(b[2], b[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  uint32_t k0_, k1_;
};

}  // namespace aa
