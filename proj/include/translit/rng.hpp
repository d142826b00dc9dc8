#pragma once

#include <cstdint>
#include <vector>

namespace translit {

// Seedable, portable random number generator used everywhere the
// toolkit needs randomness (vocabulary transfer, corpus mixing,
// bootstrap resampling). The algorithm is pinned so that reports are
// reproducible across platforms and implementations:
//
//   state' = state + 0x9E3779B97F4A7C15
//   z = state'; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)
//
// (splitmix64). bounded(n) draws as next() % n; shuffle() is a
// Fisher-Yates pass from the last element down, swapping index i with
// bounded(i + 1).
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform-enough draw in [0, n). n must be > 0.
  uint64_t bounded(uint64_t n) { return next() % n; }

  // In-place Fisher-Yates shuffle with the draw order fixed above.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (size_t i = v.size() - 1; i > 0; --i) {
      size_t j = static_cast<size_t>(bounded(i + 1));
      using std::swap;
      swap(v[i], v[j]);
    }
  }

private:
  uint64_t state_;
};

}  // namespace translit
