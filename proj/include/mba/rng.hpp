#pragma once

#include <cstdint>
#include <random>

namespace mba {

// Deterministic random source for instance generation.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard, so identical seeds reproduce identical streams on every platform.
// Bounded draws use mask rejection (draw, mask down to the next power of two,
// retry while out of range) instead of modulo, which would bias low values.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound), bound >= 1.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t r;
    do {
      r = engine_() & mask;
    } while (r >= bound);
    return r;
  }

  // Uniform in [1, hi].
  std::int64_t uniform_1_to(std::int64_t hi) {
    return 1 + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi)));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mba
