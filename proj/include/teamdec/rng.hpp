#pragma once

#include <cstdint>

namespace teamdec {

// Counter-based splitmix64. Streams are keyed by (seed, a, b, c) so any part
// of a simulation can be regenerated independently of evaluation order, and
// outputs are bit-identical across platforms and thread schedules (the
// standard library's distributions carry no such guarantee).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
      : state_(mix(mix(mix(splitmix64(seed ^ 0x2545f4914f6cdd1dULL), a), b), c)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state_);
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); Lemire's multiply-shift reduction.
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64() >> 32) * n) >> 32);
  }

  // Uniform in [lo, hi).
  double next_range(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Draws an index from unnormalized nonnegative weights.
  template <typename Seq>
  int next_weighted(const Seq& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = next_double() * total;
    int last = 0;
    int i = 0;
    for (double w : weights) {
      if (w > 0.0) {
        last = i;
        if (u < w) return i;
        u -= w;
      }
      ++i;
    }
    return last;  // numeric tail: fall back to the last positive slot
  }

 private:
  static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  }

  std::uint64_t state_;
};

}  // namespace teamdec
