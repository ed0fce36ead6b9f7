#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace didsens {

// Philox4x32-10 counter-based generator (Salmon et al. 2011 construction).
// Output depends only on (key, counter), so any draw can be generated
// independently of every other one.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += w0;
      key[1] += w1;
    }
    return ctr;
  }

  static Key key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }
};

// Uniform on (0, 1] from 53 random bits.
inline double unit_open_closed(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

// Uniform integer in [0, n) by 64x64 -> 128 multiply-shift.
inline std::uint64_t bounded_index(std::uint32_t hi, std::uint32_t lo, std::uint64_t n) {
  const std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
  // High word of x * n from 32-bit limbs.
  const std::uint64_t x0 = x & 0xFFFFFFFFu, x1 = x >> 32;
  const std::uint64_t n0 = n & 0xFFFFFFFFu, n1 = n >> 32;
  const std::uint64_t p00 = x0 * n0, p01 = x0 * n1, p10 = x1 * n0, p11 = x1 * n1;
  const std::uint64_t mid = (p00 >> 32) + (p01 & 0xFFFFFFFFu) + (p10 & 0xFFFFFFFFu);
  return p11 + (p01 >> 32) + (p10 >> 32) + (mid >> 32);
}

// Substream address for the bootstrap: (draw, cluster rank, attempt, purpose).
inline Philox4x32::Counter stream_counter(std::uint64_t draw, std::uint64_t cluster,
                                          std::uint32_t attempt, std::uint32_t purpose) {
  // Draw and cluster indices fit in 32 bits for any realistic run; the upper
  // halves are folded into the purpose word so distinct inputs stay distinct.
  return {static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(cluster), attempt,
          purpose ^ (static_cast<std::uint32_t>(draw >> 32) << 8) ^
              (static_cast<std::uint32_t>(cluster >> 32) << 20)};
}

inline double standard_exponential(std::uint64_t seed, std::uint64_t draw, std::uint64_t cluster,
                                   std::uint32_t attempt) {
  const auto out = Philox4x32::apply(stream_counter(draw, cluster, attempt, 0),
                                     Philox4x32::key_from_seed(seed));
  return -std::log(unit_open_closed(out[0], out[1]));
}

// Sequential uniforms for test fixtures and random instance generation.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed, std::uint32_t stream = 0)
      : key_(Philox4x32::key_from_seed(seed)), stream_(stream) {}

  double uniform() {
    const auto out = next();
    return unit_open_closed(out[0], out[1]) - 0x1.0p-53;  // [0, 1)
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t index(std::uint64_t n) {
    const auto out = next();
    return bounded_index(out[0], out[1], n);
  }
  double normal() {
    const auto out = next();
    const double u1 = unit_open_closed(out[0], out[1]);
    const double u2 = unit_open_closed(out[2], out[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  Philox4x32::Counter next() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(count_),
                                  static_cast<std::uint32_t>(count_ >> 32), stream_, 0xC0FFEEu};
    ++count_;
    return Philox4x32::apply(ctr, key_);
  }

  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint64_t count_ = 0;
};

}  // namespace didsens
