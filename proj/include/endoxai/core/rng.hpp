#pragma once

#include <cstdint>
#include <vector>

namespace endoxai::rng {

// Stream tags keep independent random decisions from colliding on the
// same master seed.
enum : std::uint64_t {
  kStreamSplit = 0x5350'4c49'5400'0001ull,
  kStreamInit = 0x494e'4954'0000'0002ull,
  kStreamFlip = 0x464c'4950'0000'0003ull,
  kStreamDropout = 0x44524f'50'0000'0004ull,
  kStreamPerturb = 0x50455254'0000'0005ull,
  kStreamOrder = 0x4f52'4445'5200'0006ull,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(a, b), c);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                            std::uint64_t d) {
  return mix(mix(a, b, c), d);
}

/// Map a 64-bit word to a double in [0, 1).
constexpr double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Counter-based uniform draw: identical for identical keys, independent of
/// evaluation order or threading.
constexpr double unit_at(std::uint64_t stream, std::uint64_t seed,
                         std::uint64_t a, std::uint64_t b) {
  return to_unit(mix(stream, seed, a, b));
}

// Sequential splitmix64 generator for shuffles and weight initialization.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  /// Uniform in [0, 1).
  double next_unit() { return to_unit(next()); }

  /// Uniform in [lo, hi).
  double next_range(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Fisher-Yates, iterating i = n-1 .. 1, j = next_below(i + 1). This exact
// procedure is part of the split-manifest contract: regenerating a manifest
// replays it verbatim.
template <typename T>
void shuffle(std::vector<T>& v, Stream& stream) {
  if (v.size() < 2) return;
  for (std::size_t i = v.size() - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(stream.next_below(i + 1));
    std::swap(v[i], v[j]);
  }
}

}  // namespace endoxai::rng
