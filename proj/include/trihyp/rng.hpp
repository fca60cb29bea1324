#pragma once

#include <cstdint>
#include <random>

namespace trihyp {

/// Deterministic RNG: mt19937_64 with hand-rolled distributions so that
/// identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {
    return (gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t bits() { return gen_(); }
  int index(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace trihyp
