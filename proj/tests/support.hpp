#pragma once

#include <chrono>
#include <cstdint>
#include <random>

#include "radhough/images.hpp"

namespace radhough::testing {

/// Seeded uniform source built on mt19937_64 with explicit 53-bit conversion,
/// so sequences do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

inline PixelImage random_image(std::size_t w, std::size_t h, Rng& rng, double lo = 0.0, double hi = 1.0) {
  PixelImage img(w, h);
  for (double& v : img.values()) v = rng.uniform(lo, hi);
  return img;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace radhough::testing
