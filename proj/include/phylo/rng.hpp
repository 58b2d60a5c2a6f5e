#pragma once

#include <cstdint>

namespace phylo {

// SplitMix64: the single entropy source for the whole artifact. Every stream
// derives from one user seed; child streams split off deterministically, so a
// run is reproducible from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased uniform draw in [0, n); n > 0.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  SplitMix64 split() { return SplitMix64(next() ^ 0x5851f42d4c957f2dULL); }

 private:
  std::uint64_t state_;
};

// Stable combiner for deriving per-task seeds from (seed, indices).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 s(a ^ (b * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL));
  return s.next();
}

}  // namespace phylo
