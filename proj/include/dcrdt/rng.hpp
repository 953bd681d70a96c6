#ifndef DCRDT_RNG_HPP
#define DCRDT_RNG_HPP

#include <cstdint>
#include <random>

namespace dcrdt {

// Seeded generator with draw helpers defined directly on the engine output,
// so sequences are identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  // Uniform in [lo, hi], inclusive.
  uint64_t in_range(uint64_t lo, uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  // Uniform in [0, 1) with 53 bits.
  double unit() {
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
  }

  bool chance(double p) { return p > 0.0 && unit() < p; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 step; used to derive independent seeds from one scenario seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dcrdt

#endif  // DCRDT_RNG_HPP
