#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace decayalg {

// Seedable 64-bit generator with a fixed, documented algorithm so that
// experiments replay bit-for-bit on any platform or language:
//
//   state seeding: four successive outputs of SplitMix64 started from
//                  seed XOR (0xD1B54A32D192ED03 * (stream + 1))
//   SplitMix64:    z = (x += 0x9E3779B97F4A7C15);
//                  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                  z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                  return z ^ (z >> 31);
//   xoshiro256**:  result = rotl(s1 * 5, 7) * 9;
//                  t = s1 << 17;
//                  s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3;
//                  s2 ^= t; s3 = rotl(s3, 45);
//   uniform01:     (next() >> 11) * 2^-53, in [0,1)
//   normal:        Box-Muller, r = sqrt(-2 ln(1 - u1)), returns r cos(2 pi u2)
//                  (one uniform pair per normal; the sine branch is discarded)
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() noexcept;
  double uniform01() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [lo, hi] (inclusive), by rejection-free multiply-shift.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
  double normal() noexcept;
  /// Complex normal with independent standard normal real and imaginary parts.
  std::complex<double> complex_normal() noexcept { return {normal(), normal()}; }

private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace decayalg
