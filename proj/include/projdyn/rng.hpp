#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace projdyn {

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, index), so sample i of a stream is reproducible
/// regardless of evaluation order or worker count.
struct CounterRng {
  uint64_t seed = 0;

  uint64_t word(uint64_t stream, uint64_t index) const {
    uint64_t h = detail::splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL);
    h = detail::splitmix64(h ^ stream);
    return detail::splitmix64(h ^ (index + 0x632be59bd9b4e019ULL));
  }

  /// Uniform in (0, 1]; never returns 0 so logs are safe.
  double u01(uint64_t stream, uint64_t index) const {
    return static_cast<double>((word(stream, index) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (cosine branch).
  double normal(uint64_t stream, uint64_t index) const {
    const double u1 = u01(stream, 2 * index);
    const double u2 = u01(stream, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  std::complex<double> complex_normal(uint64_t stream, uint64_t index) const {
    return {normal(stream, 2 * index), normal(stream, 2 * index + 1)};
  }

  /// Uniform integer in [0, bound) by rejection-free scaling (bound << 2^64).
  uint64_t below(uint64_t stream, uint64_t index, uint64_t bound) const {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(word(stream, index)) * bound) >> 64);
  }
};

}  // namespace projdyn
