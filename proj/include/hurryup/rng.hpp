#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hurryup {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 is bit-exact by the standard; the distribution transforms are
// spelled out here because std::*_distribution is implementation-defined and
// would break the same-seed byte-identical replay contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Decorrelated named substream of a base seed.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(splitmix64(seed ^ splitmix64(stream_id)));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double exponential(double mean) {
    return -mean * std::log1p(-uniform01());
  }

  // Box-Muller without caching the second variate, so the draw count per
  // call is fixed and streams stay reproducible under reordering.
  double normal01() {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Lognormal with mean 1 and the given coefficient of variation.
  double lognormal_mean1(double cv) {
    if (cv <= 0.0) return 1.0;
    double sigma2 = std::log1p(cv * cv);
    return std::exp(-0.5 * sigma2 + std::sqrt(sigma2) * normal01());
  }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    int span = hi - lo + 1;
    int idx = static_cast<int>(uniform01() * span);
    if (idx >= span) idx = span - 1;
    return lo + idx;
  }

 private:
  std::mt19937_64 gen_;
};

// Named substreams of SimConfig::rng_seed. Keeping them separate is what
// pairs runs: the workload and per-request noise draws are identical across
// policies and mapper settings for a given seed.
enum : std::uint64_t {
  kStreamArrivals = 1,
  kStreamNoise = 2,
  kStreamPlacement = 3,
};

}  // namespace hurryup
