#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace teamdec {

inline constexpr const char* kVersion = "0.1.0";

// Teams are fixed at four humans and four agents throughout.
inline constexpr int kMembers = 4;
inline constexpr int kAgents = 4;
inline constexpr int kOptions = 4;

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

// Probabilities entering logs or divisions are pinned away from 0 and 1 so
// downstream transforms stay finite.
inline constexpr double kProbFloor = 1e-9;

inline double clamp_prob(double p) {
  return std::clamp(p, kProbFloor, 1.0 - kProbFloor);
}

inline double sum(const Vec4& v) { return v[0] + v[1] + v[2] + v[3]; }

// Normalizes in place; a zero-mass vector falls back to uniform.
inline Vec4 normalized(Vec4 v) {
  double s = sum(v);
  if (s <= 0.0) return {0.25, 0.25, 0.25, 0.25};
  for (double& x : v) x /= s;
  return v;
}

template <typename Seq>
inline std::size_t argmax_index(const Seq& v) {
  return static_cast<std::size_t>(
      std::max_element(std::begin(v), std::end(v)) - std::begin(v));
}

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// Runs fn(i) for i in [0, n); results must be written to pre-sized slots so
// the merge order is fixed by index, never by completion order.
template <typename Fn>
inline void parallel_for_index(std::size_t n, Fn&& fn, unsigned max_threads = 0) {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned want = max_threads == 0 ? hw : std::min(hw, max_threads);
  if (want <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned workers = std::min<std::size_t>(want, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace teamdec
