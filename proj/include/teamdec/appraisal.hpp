#pragma once

#include <cmath>
#include <stdexcept>

#include "teamdec/common.hpp"

namespace teamdec {

// Conjugate accuracy tracker. Humans live on [0,1]; agents are promised to be
// right at least half the time, so their beta is affinely mapped onto [0.5,1].
struct BetaAppraisal {
  enum class Support { Unit, Upper };

  double a = 1.0;
  double b = 1.0;
  Support support = Support::Unit;

  double mean() const {
    double m = a / (a + b);
    return support == Support::Unit ? m : 0.5 + 0.5 * m;
  }
};

inline BetaAppraisal init_human_appraisal() { return {1.0, 1.0, BetaAppraisal::Support::Unit}; }
inline BetaAppraisal init_agent_appraisal() { return {1.0, 1.0, BetaAppraisal::Support::Upper}; }

inline BetaAppraisal observe(BetaAppraisal appraisal, bool correct) {
  (correct ? appraisal.a : appraisal.b) += 1.0;
  return appraisal;
}

struct CentralityResult {
  Vec4 delta{};
  int iterations = 0;
  bool damped = false;  // true if the damping fallback was needed to converge
};

namespace detail {

inline void require_row_stochastic(const Mat4& w) {
  for (const auto& row : w) {
    double s = 0.0;
    for (double x : row) {
      if (!(x >= 0.0)) throw std::domain_error("influence matrix has a negative entry");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw std::domain_error("influence matrix row does not sum to 1");
  }
}

// One step of v^T W.
inline Vec4 left_multiply(const Vec4& v, const Mat4& w) {
  Vec4 out{};
  for (int j = 0; j < 4; ++j)
    out[j] = v[0] * w[0][j] + v[1] * w[1][j] + v[2] * w[2][j] + v[3] * w[3][j];
  return out;
}

inline bool power_iterate(const Mat4& w, Vec4& v, int max_iters, int& used) {
  for (used = 0; used < max_iters; ++used) {
    Vec4 next = left_multiply(v, w);
    next = normalized(next);
    double dist = std::abs(next[0] - v[0]) + std::abs(next[1] - v[1]) +
                  std::abs(next[2] - v[2]) + std::abs(next[3] - v[3]);
    v = next;
    if (dist <= 1e-12) return true;
  }
  return false;
}

}  // namespace detail

// Normalized left eigenvector of W for eigenvalue 1 (power iteration from
// uniform). Reducible or periodic matrices that fail to converge are retried
// on a lightly damped copy; that event is reported in the result.
inline CentralityResult centrality_full(const Mat4& w) {
  detail::require_row_stochastic(w);
  CentralityResult result;
  result.delta = {0.25, 0.25, 0.25, 0.25};
  if (detail::power_iterate(w, result.delta, 10000, result.iterations)) return result;

  Mat4 damped;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) damped[i][j] = 0.99 * w[i][j] + 0.01 * 0.25;
  result.delta = {0.25, 0.25, 0.25, 0.25};
  result.damped = true;
  if (detail::power_iterate(damped, result.delta, 10000, result.iterations)) return result;
  throw std::runtime_error("centrality power iteration did not converge");
}

inline Vec4 centrality(const Mat4& w) { return centrality_full(w).delta; }

struct InfluenceState {
  Mat4 w{};
  Vec4 delta{};
};

inline InfluenceState make_influence_state(const Mat4& w) {
  return {w, centrality(w)};
}

inline InfluenceState uniform_influence_state() {
  Mat4 w;
  for (auto& row : w) row = {0.25, 0.25, 0.25, 0.25};
  return {w, {0.25, 0.25, 0.25, 0.25}};
}

// Team-level appraisal of each agent: centrality-weighted average of the
// members' individual ratings (column-wise).
inline Vec4 aggregate_agent_appraisal(const Vec4& delta, const Mat4& ratings) {
  Vec4 out{};
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) out[j] += delta[i] * ratings[i][j];
  return out;
}

inline Vec4 degroot_step(const Mat4& w, const Vec4& x) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i)
    out[i] = w[i][0] * x[0] + w[i][1] * x[1] + w[i][2] * x[2] + w[i][3] * x[3];
  return out;
}

// Iterates x <- Wx to its limit (consensus when W is irreducible aperiodic).
inline Vec4 degroot_converge(const Mat4& w, const Vec4& x0, double tol = 1e-10) {
  detail::require_row_stochastic(w);
  Vec4 x = x0;
  for (int k = 0; k < 10000; ++k) {
    Vec4 next = degroot_step(w, x);
    double dist = 0.0;
    for (int i = 0; i < 4; ++i) dist = std::max(dist, std::abs(next[i] - x[i]));
    x = next;
    if (dist <= tol) return x;
  }
  throw std::runtime_error("opinion update did not converge");
}

}  // namespace teamdec
