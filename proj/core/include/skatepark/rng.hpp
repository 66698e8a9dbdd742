#pragma once

#include <cstdint>
#include <random>

namespace skatepark {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for batch `index` of a run seeded with `seed`. Batches never share streams.
inline std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

// mt19937_64 with a portable uniform in [0, 1) built from the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace skatepark
