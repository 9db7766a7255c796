#pragma once

#include <cstdint>

namespace sshwg {

// Counter-based stream generator: each (seed, stream) pair yields an
// independent, reproducible sequence, so ensemble samples can be generated
// in any order or in parallel. splitmix64 core; fully portable (no
// library-defined distributions involved).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) {
    state_ = mix(mix(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [-amplitude, +amplitude]; exactly zero for zero amplitude.
  double uniform_pm(double amplitude) {
    return amplitude * (2.0 * next_double() - 1.0);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace sshwg
