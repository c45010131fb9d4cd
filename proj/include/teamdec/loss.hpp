#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "teamdec/common.hpp"

namespace teamdec {

enum class LossKind { L1, L2, Binary };

inline const char* loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::L1: return "l1";
    case LossKind::L2: return "l2";
    case LossKind::Binary: return "binary";
  }
  throw std::domain_error("unknown loss kind");
}

inline std::optional<LossKind> parse_loss_name(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "l1") return LossKind::L1;
  if (s == "l2") return LossKind::L2;
  if (s == "binary") return LossKind::Binary;
  return std::nullopt;
}

namespace detail {

inline void require_distribution(const std::vector<double>& q, std::size_t i) {
  if (q.empty() || i >= q.size()) throw std::domain_error("action index out of range");
  double s = 0.0;
  for (double x : q) {
    if (!(x >= 0.0)) throw std::domain_error("distribution has a negative entry");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-6) throw std::domain_error("distribution does not sum to 1");
}

// Indices of q sorted by decreasing probability, excluding index i.
inline std::vector<std::size_t> others_by_descending_prob(const std::vector<double>& q,
                                                          std::size_t i) {
  std::vector<std::size_t> order;
  order.reserve(q.size() - 1);
  for (std::size_t k = 0; k < q.size(); ++k)
    if (k != i) order.push_back(k);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });
  return order;
}

}  // namespace detail

// -ln q at the observed action.
inline double binary_loss(const std::vector<double>& q, std::size_t i) {
  detail::require_distribution(q, i);
  return -std::log(clamp_prob(q[i]));
}

inline double entropy(const std::vector<double>& q) {
  double h = 0.0;
  for (double x : q)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

// -sum_k q_k ln p_k, skipping zero-mass q terms.
inline double cross_entropy_qp(const std::vector<double>& q, const std::vector<double>& p) {
  double h = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (q[k] > 0.0) h -= q[k] * std::log(clamp_prob(p[k]));
  return h;
}

// -sum_k p_k ln q_k, skipping zero-mass p terms.
inline double cross_entropy_pq(const std::vector<double>& p, const std::vector<double>& q) {
  double h = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] > 0.0) h -= p[k] * std::log(clamp_prob(q[k]));
  return h;
}

// Data distribution p closest to the model's q (in -sum q ln p) among those
// where the observed action i is weakly dominant. Water-filling: pool i with
// the largest remaining entries while they exceed the running pooled average;
// pooled entries share the average, everything else keeps its q value.
inline std::vector<double> l1_minimizer(const std::vector<double>& q, std::size_t i) {
  detail::require_distribution(q, i);
  auto order = detail::others_by_descending_prob(q, i);
  double pooled_mass = q[i];
  std::size_t pooled_count = 1;
  std::size_t taken = 0;
  while (taken < order.size() && q[order[taken]] * pooled_count > pooled_mass) {
    pooled_mass += q[order[taken]];
    ++pooled_count;
    ++taken;
  }
  std::vector<double> p = q;
  double level = pooled_mass / static_cast<double>(pooled_count);
  p[i] = level;
  for (std::size_t t = 0; t < taken; ++t) p[order[t]] = level;
  return p;
}

inline double l1_loss(const std::vector<double>& q, std::size_t i) {
  return cross_entropy_qp(q, l1_minimizer(q, i));
}

struct MinimizerResult {
  std::vector<double> p;
  double loss = 0.0;
};

namespace detail {

inline MinimizerResult uniform_over(const std::vector<double>& q,
                                    const std::vector<std::size_t>& support) {
  MinimizerResult out;
  out.p.assign(q.size(), 0.0);
  double share = 1.0 / static_cast<double>(support.size());
  for (std::size_t k : support) {
    out.p[k] = share;
    out.loss -= share * std::log(clamp_prob(q[k]));
  }
  return out;
}

}  // namespace detail

// First closed-form candidate for the -sum p ln q minimizer: spread p
// uniformly over every entry at least as probable as the observed one.
inline MinimizerResult l2_candidate_dominant_set(const std::vector<double>& q, std::size_t i) {
  detail::require_distribution(q, i);
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (k == i || q[k] >= q[i]) support.push_back(k);
  return detail::uniform_over(q, support);
}

// Second closed-form candidate: pair the observed entry with the argmax and
// any entry whose probability exceeds the geometric mean of the two.
inline MinimizerResult l2_candidate_pair_threshold(const std::vector<double>& q, std::size_t i) {
  detail::require_distribution(q, i);
  std::size_t j = argmax_index(q);
  std::vector<std::size_t> support;
  if (q[i] >= q[j]) {
    // Observed action already dominant: all mass on the tied argmax set.
    for (std::size_t k = 0; k < q.size(); ++k)
      if (q[k] >= q[i]) support.push_back(k);
    return detail::uniform_over(q, support);
  }
  double threshold = std::sqrt(clamp_prob(q[i]) * clamp_prob(q[j]));
  for (std::size_t k = 0; k < q.size(); ++k)
    if (k == i || k == j || q[k] > threshold) support.push_back(k);
  return detail::uniform_over(q, support);
}

// Exact minimizer of -sum_k p_k ln q_k under the dominance constraint. The
// objective is linear in p and the feasible polytope's vertices are uniform
// distributions over supports containing i, so the optimum is uniform over
// {i} plus the m most probable other entries for the best m; scan all m.
inline MinimizerResult l2_minimizer_full(const std::vector<double>& q, std::size_t i) {
  detail::require_distribution(q, i);
  auto order = detail::others_by_descending_prob(q, i);
  double cost_sum = -std::log(clamp_prob(q[i]));
  std::size_t count = 1;
  std::size_t best_m = 0;
  double best_avg = cost_sum;
  for (std::size_t m = 0; m < order.size(); ++m) {
    cost_sum += -std::log(clamp_prob(q[order[m]]));
    ++count;
    double avg = cost_sum / static_cast<double>(count);
    if (avg < best_avg - 1e-15) {
      best_avg = avg;
      best_m = m + 1;
    }
  }
  std::vector<std::size_t> support{i};
  for (std::size_t m = 0; m < best_m; ++m) support.push_back(order[m]);
  // Absorb entries tied with the final average (cosmetic: averages ties at
  // the argmax instead of an arbitrary single index).
  for (std::size_t m = best_m; m < order.size(); ++m) {
    if (std::abs(-std::log(clamp_prob(q[order[m]])) - best_avg) <= 1e-12)
      support.push_back(order[m]);
    else
      break;
  }
  return detail::uniform_over(q, support);
}

inline std::vector<double> l2_minimizer(const std::vector<double>& q, std::size_t i) {
  return l2_minimizer_full(q, i).p;
}

inline double l2_loss(const std::vector<double>& q, std::size_t i) {
  return l2_minimizer_full(q, i).loss;
}

inline double action_loss(LossKind kind, const std::vector<double>& q, std::size_t i) {
  switch (kind) {
    case LossKind::L1: return l1_loss(q, i);
    case LossKind::L2: return l2_loss(q, i);
    case LossKind::Binary: return binary_loss(q, i);
  }
  throw std::domain_error("unknown loss kind");
}

// Allocation-free twin of action_loss for hot loops (grid search evaluates
// millions of distributions). n <= 8. Kept behaviorally identical to the
// vector API; a property test pins the two together.
inline double action_loss_span(LossKind kind, const double* q, std::size_t n, std::size_t i) {
  if (kind == LossKind::Binary) return -std::log(clamp_prob(q[i]));

  std::size_t order[8];
  std::size_t m = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (k != i) order[m++] = k;
  std::sort(order, order + m, [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });

  if (kind == LossKind::L1) {
    double pooled_mass = q[i];
    std::size_t pooled_count = 1;
    std::size_t taken = 0;
    while (taken < m && q[order[taken]] * pooled_count > pooled_mass) {
      pooled_mass += q[order[taken]];
      ++pooled_count;
      ++taken;
    }
    double level = pooled_mass / static_cast<double>(pooled_count);
    double loss = pooled_mass > 0.0 ? -pooled_mass * std::log(clamp_prob(level)) : 0.0;
    for (std::size_t t = taken; t < m; ++t) {
      double qk = q[order[t]];
      if (qk > 0.0) loss -= qk * std::log(clamp_prob(qk));
    }
    return loss;
  }

  // L2: best average cost over {i} + top-m prefix.
  double cost_sum = -std::log(clamp_prob(q[i]));
  double best = cost_sum;
  double count = 1.0;
  for (std::size_t t = 0; t < m; ++t) {
    cost_sum += -std::log(clamp_prob(q[order[t]]));
    count += 1.0;
    best = std::min(best, cost_sum / count);
  }
  return best;
}

// --- Brute-force simplex oracle ----------------------------------------------

enum class CrossEntropyDirection { QP, PQ };  // QP: -sum q ln p; PQ: -sum p ln q

struct OracleResult {
  std::vector<double> p;
  double loss = 0.0;
};

namespace detail {

struct LatticePoint {
  std::vector<int> counts;
  double loss = std::numeric_limits<double>::infinity();
};

// Evaluates every lattice distribution (counts/denominator) within the given
// per-coordinate count bounds, subject to counts[i] >= counts[k] for all k,
// and offers each to `visit`. Coordinate i is assigned first so its value caps
// the rest.
class LatticeEnumerator {
 public:
  LatticeEnumerator(const std::vector<double>& q, std::size_t i, CrossEntropyDirection dir,
                    int denom)
      : q_(q), i_(i), dir_(dir), denom_(denom), n_(q.size()) {
    order_.push_back(i_);
    for (std::size_t k = 0; k < n_; ++k)
      if (k != i_) order_.push_back(k);
    log_table_.resize(denom_ + 1);
    log_table_[0] = 0.0;  // never read for feasible points
    for (int c = 1; c <= denom_; ++c)
      log_table_[c] = std::log(static_cast<double>(c) / static_cast<double>(denom_));
    if (dir_ == CrossEntropyDirection::PQ) {
      cost_.resize(n_);
      for (std::size_t k = 0; k < n_; ++k) cost_[k] = -std::log(clamp_prob(q_[k]));
    }
    counts_.assign(n_, 0);
  }

  template <typename Visit>
  void run(const std::vector<int>& lo, const std::vector<int>& hi, Visit&& visit) {
    lo_ = &lo;
    hi_ = &hi;
    // Suffix sums of upper bounds let us prune branches that cannot absorb
    // the remaining mass.
    hi_suffix_.assign(n_ + 1, 0);
    for (std::size_t d = n_; d-- > 0;)
      hi_suffix_[d] = hi_suffix_[d + 1] + (*hi_)[order_[d]];
    descend(0, denom_, 0.0, std::forward<Visit>(visit));
  }

 private:
  template <typename Visit>
  void descend(std::size_t depth, int remaining, double partial, Visit&& visit) {
    std::size_t coord = order_[depth];
    int cap = static_cast<int>(depth == 0 ? remaining : counts_[i_]);
    int hi = std::min({(*hi_)[coord], cap, remaining});
    int lo = std::max((*lo_)[coord], remaining - hi_suffix_[depth + 1]);
    if (depth + 1 == n_) {
      if (lo <= remaining && remaining <= hi) {
        counts_[coord] = remaining;
        double loss = partial + term(coord, remaining);
        if (std::isfinite(loss)) visit(counts_, loss);
      }
      return;
    }
    for (int c = hi; c >= lo; --c) {
      counts_[coord] = c;
      double t = term(coord, c);
      if (!std::isfinite(t)) continue;
      descend(depth + 1, remaining - c, partial + t, visit);
    }
  }

  double term(std::size_t coord, int c) const {
    if (dir_ == CrossEntropyDirection::PQ)
      return static_cast<double>(c) / denom_ * cost_[coord];
    if (q_[coord] <= 0.0) return 0.0;
    if (c == 0) return std::numeric_limits<double>::infinity();
    return -q_[coord] * log_table_[c];
  }

  const std::vector<double>& q_;
  std::size_t i_;
  CrossEntropyDirection dir_;
  int denom_;
  std::size_t n_;
  std::vector<std::size_t> order_;
  std::vector<double> log_table_;
  std::vector<double> cost_;
  std::vector<int> counts_;
  const std::vector<int>* lo_ = nullptr;
  const std::vector<int>* hi_ = nullptr;
  std::vector<int> hi_suffix_;
};

// Keeps the best `cap` distinct points seen, ordered by loss.
struct TopList {
  std::size_t cap;
  std::vector<LatticePoint> items;

  void offer(const std::vector<int>& counts, double loss) {
    if (items.size() == cap && loss >= items.back().loss) return;
    for (const auto& it : items)
      if (it.counts == counts) return;
    LatticePoint pt{counts, loss};
    auto pos = std::upper_bound(items.begin(), items.end(), loss,
                                [](double l, const LatticePoint& x) { return l < x.loss; });
    items.insert(pos, std::move(pt));
    if (items.size() > cap) items.pop_back();
  }
};

inline OracleResult full_lattice_search(const std::vector<double>& q, std::size_t i,
                                        CrossEntropyDirection dir, int denom) {
  LatticeEnumerator enumerator(q, i, dir, denom);
  std::vector<int> lo(q.size(), 0), hi(q.size(), denom);
  LatticePoint best;
  enumerator.run(lo, hi, [&](const std::vector<int>& counts, double loss) {
    if (loss < best.loss) best = {counts, loss};
  });
  OracleResult out;
  out.loss = best.loss;
  out.p.resize(q.size());
  for (std::size_t k = 0; k < q.size(); ++k)
    out.p[k] = static_cast<double>(best.counts[k]) / denom;
  return out;
}

}  // namespace detail

// Brute-force search over lattice distributions (step <= resolution) under
// the dominance constraint. Both objectives are convex over the feasible
// polytope, so the search enumerates the full lattice at a coarse step and
// then exhaustively enumerates shrinking boxes around the best points down to
// the final step; a unit test validates this against the literal full-lattice
// enumeration at resolutions where that is tractable. The final denominator
// is a multiple of 840 = lcm(2..8) so that every uniform-over-subset point
// (the vertices of the feasible polytope) is exactly representable.
inline OracleResult oracle_min_cross_entropy(const std::vector<double>& q, std::size_t i,
                                             CrossEntropyDirection direction, double resolution) {
  detail::require_distribution(q, i);
  if (q.size() > 8) throw std::domain_error("oracle limited to dimension 8");
  if (!(resolution >= 1e-3)) throw std::domain_error("oracle resolution must be >= 1e-3");

  const std::size_t n = q.size();
  const int denom_final =
      840 * static_cast<int>(std::ceil(1.0 / (840.0 * resolution) - 1e-12));
  const int denom_start = n <= 4 ? 24 : 12;
  if (denom_final <= denom_start) return detail::full_lattice_search(q, i, direction, denom_final);

  detail::LatticeEnumerator coarse(q, i, direction, denom_start);
  detail::TopList top{6, {}};
  std::vector<int> lo(n, 0), hi(n, denom_start);
  coarse.run(lo, hi, [&](const std::vector<int>& counts, double loss) { top.offer(counts, loss); });

  int denom_prev = denom_start;
  while (denom_prev < denom_final) {
    int denom = std::min(denom_prev * 2, denom_final);
    double margin = 1.5 / static_cast<double>(denom_prev);
    detail::LatticeEnumerator fine(q, i, direction, denom);
    detail::TopList next{6, {}};
    for (const auto& center : top.items) {
      for (std::size_t k = 0; k < n; ++k) {
        double c = static_cast<double>(center.counts[k]) / denom_prev;
        lo[k] = std::max(0, static_cast<int>(std::floor((c - margin) * denom)));
        hi[k] = std::min(denom, static_cast<int>(std::ceil((c + margin) * denom)));
      }
      fine.run(lo, hi,
               [&](const std::vector<int>& counts, double loss) { next.offer(counts, loss); });
    }
    top = std::move(next);
    denom_prev = denom;
  }

  if (top.items.empty()) throw std::runtime_error("oracle search found no feasible point");
  OracleResult out;
  out.loss = top.items.front().loss;
  out.p.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    out.p[k] = static_cast<double>(top.items.front().counts[k]) / denom_final;
  return out;
}

}  // namespace teamdec
