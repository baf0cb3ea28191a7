#pragma once

#include <cstdint>
#include <random>

namespace covform {

// Thin wrapper over std::mt19937_64 that derives doubles and bounded ints
// from raw engine output directly. std::uniform_real_distribution is
// implementation-defined, so logs seeded through this class stay identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Independent child stream: restart/agent substreams derived from one
  // mission seed. Streams with distinct indices never collide in practice.
  static Rng child(std::uint64_t seed, std::uint64_t stream) {
    return Rng(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], rejection-sampled for exact uniformity.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return lo + static_cast<int>(v % span);
  }

  bool coin(double p = 0.5) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace covform
