#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace teamdec {

enum class Alternative { TwoSided, Less, Greater };

struct WilcoxonResult {
  double statistic = 0.0;  // W = min(W+, W-)
  double p_value = 1.0;
  int n_effective = 0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  bool exact = false;
};

namespace detail {

// Tie-averaged ranks of |d|, doubled so they are exact integers.
inline std::vector<std::int64_t> doubled_ranks(const std::vector<double>& abs_d) {
  const std::size_t n = abs_d.size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });
  std::vector<std::int64_t> rank2(n);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos;
    while (end + 1 < n && abs_d[order[end + 1]] == abs_d[order[pos]]) ++end;
    // Ranks pos+1..end+1 tie; average doubled = (pos+1) + (end+1).
    std::int64_t avg2 = static_cast<std::int64_t>(pos + 1 + end + 1);
    for (std::size_t k = pos; k <= end; ++k) rank2[order[k]] = avg2;
    pos = end + 1;
  }
  return rank2;
}

// P(W+_doubled <= s) under the null: every sign pattern equally likely.
// Subset-sum counting over the doubled ranks.
inline double exact_cdf_le(const std::vector<std::int64_t>& rank2, std::int64_t s) {
  std::int64_t total = 0;
  for (auto r : rank2) total += r;
  if (s < 0) return 0.0;
  if (s >= total) return 1.0;
  std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
  count[0] = 1.0;
  std::int64_t reach = 0;
  for (auto r : rank2) {
    reach = std::min(total, reach + r);
    for (std::int64_t v = reach; v >= r; --v)
      count[static_cast<std::size_t>(v)] += count[static_cast<std::size_t>(v - r)];
    // (values below r are unchanged: the new rank is either excluded or
    //  pushes the sum past them)
  }
  double below = 0.0, all = 0.0;
  for (std::int64_t v = 0; v <= total; ++v) {
    all += count[static_cast<std::size_t>(v)];
    if (v <= s) below += count[static_cast<std::size_t>(v)];
  }
  return below / all;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace detail

// Paired signed-rank test. Zero differences are dropped; |differences| are
// ranked with average ranks on ties. Exact null distribution for up to 25
// effective pairs, normal approximation (tie-corrected variance, continuity
// correction) beyond.
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                           const std::vector<double>& y,
                                           Alternative alternative = Alternative::TwoSided) {
  if (x.size() != y.size()) throw std::domain_error("paired samples differ in length");
  if (x.size() < 5) throw std::domain_error("need at least 5 pairs");

  std::vector<double> abs_d;
  std::vector<bool> positive;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double d = x[k] - y[k];
    if (d == 0.0) continue;
    abs_d.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }

  WilcoxonResult result;
  result.n_effective = static_cast<int>(abs_d.size());
  if (abs_d.empty()) {
    result.exact = true;
    return result;  // no evidence either way: W = 0, p = 1
  }

  auto rank2 = detail::doubled_ranks(abs_d);
  std::int64_t w_plus2 = 0, total2 = 0;
  for (std::size_t k = 0; k < rank2.size(); ++k) {
    total2 += rank2[k];
    if (positive[k]) w_plus2 += rank2[k];
  }
  std::int64_t w_minus2 = total2 - w_plus2;
  result.w_plus = static_cast<double>(w_plus2) / 2.0;
  result.w_minus = static_cast<double>(w_minus2) / 2.0;
  result.statistic = std::min(result.w_plus, result.w_minus);

  const std::size_t n = abs_d.size();
  if (n <= 25) {
    result.exact = true;
    std::int64_t stat2;
    switch (alternative) {
      case Alternative::TwoSided:
        stat2 = std::min(w_plus2, w_minus2);
        // The null distribution is symmetric (flipping every sign maps W+ to
        // total - W+), so the two tails have equal mass.
        result.p_value = std::min(1.0, 2.0 * detail::exact_cdf_le(rank2, stat2));
        break;
      case Alternative::Less:
        result.p_value = detail::exact_cdf_le(rank2, w_plus2);
        break;
      case Alternative::Greater:
        result.p_value = detail::exact_cdf_le(rank2, w_minus2);
        break;
    }
    return result;
  }

  double nn = static_cast<double>(n);
  double mean = nn * (nn + 1.0) / 4.0;
  double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
  // Tie correction: subtract sum(t^3 - t)/48 over tie groups.
  std::size_t pos = 0;
  std::vector<double> sorted = abs_d;
  std::sort(sorted.begin(), sorted.end());
  while (pos < sorted.size()) {
    std::size_t end = pos;
    while (end + 1 < sorted.size() && sorted[end + 1] == sorted[pos]) ++end;
    double t = static_cast<double>(end - pos + 1);
    var -= (t * t * t - t) / 48.0;
    pos = end + 1;
  }
  double sd = std::sqrt(var);
  auto lower_tail_p = [&](double w) {
    return detail::normal_cdf((w - mean + 0.5) / sd);
  };
  switch (alternative) {
    case Alternative::TwoSided:
      result.p_value = std::min(1.0, 2.0 * lower_tail_p(result.statistic));
      break;
    case Alternative::Less: result.p_value = lower_tail_p(result.w_plus); break;
    case Alternative::Greater: result.p_value = lower_tail_p(result.w_minus); break;
  }
  return result;
}

}  // namespace teamdec
