#if !defined(ELENE_RNG_HPP)
#define ELENE_RNG_HPP

#include <cstdint>

namespace elene {

// splitmix64. Standard-library distributions are implementation-defined, so
// seeded graph generation goes through this to stay reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform draw from [0, bound); bound > 0. Lemire's multiply-shift with a
  // rejection pass to remove modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t cutoff = (-bound) % bound;
    while (true) {
      __uint128_t m = static_cast<__uint128_t>(next()) * bound;
      if (static_cast<std::uint64_t>(m) >= cutoff) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace elene

#endif
