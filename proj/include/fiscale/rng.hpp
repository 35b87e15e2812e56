#pragma once

#include <cstdint>
#include <random>

namespace fiscale {

// splitmix64 finalizer; used to hash replicate indices into substream seeds.
inline constexpr std::uint64_t hash64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Substream seed for replicate `index` of a master seed. Independent of
// evaluation order, so any worker assignment reproduces the same streams.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return master ^ hash64(index);
}

// Deterministic uniform stream. mt19937_64 output is fully specified by the
// standard; the [0,1) mapping below avoids implementation-defined library
// distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform on (0,1); never returns an exact endpoint, safe for inverse CDFs
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fiscale
