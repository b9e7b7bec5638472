#pragma once

#include <cstdint>

// Counter-based random streams. A stream is fully determined by the
// (master seed, stream id, sample index, campaign index) tuple, so any
// worker can regenerate any substream without coordination.

namespace balex::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (mix64(v + kGolden) + (h << 6) + (h >> 2)));
}

class Stream {
 public:
  Stream() = default;
  explicit Stream(std::uint64_t key) : state_(key) {}

  static Stream make(std::uint64_t master, std::uint64_t stream_id,
                     std::uint64_t sample, std::uint64_t campaign) {
    std::uint64_t k = combine(master, stream_id);
    k = combine(k, sample);
    k = combine(k, campaign);
    return Stream(k);
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += kGolden);
    return mix64(z);
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // uniform integer in [0, bound)
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace balex::rng
