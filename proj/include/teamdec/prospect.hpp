#pragma once

#include <cmath>
#include <stdexcept>

#include "teamdec/models.hpp"

namespace teamdec {

// Two-outcome prospect-theory parameters. Identity values (all 1) reduce the
// valuation to plain expected value.
struct PTParams {
  double alpha = 1.0;        // gain sensitivity, [0,1]
  double beta = 1.0;         // loss sensitivity, [0,1]; fitted tied to alpha
  double loss_aversion = 1.0;  // lambda, [0,10]
  double gamma_gain = 1.0;   // distortion on gain probabilities, (0,1]
  double gamma_loss = 1.0;   // distortion on loss probabilities, (0,1]

  static PTParams identity() { return {}; }

  bool operator==(const PTParams&) const = default;
};

// A gamble paying `gain` (>= 0) with probability p_gain, else `loss` (<= 0).
struct Gamble {
  double gain = 0.0;
  double p_gain = 0.0;
  double loss = 0.0;
};

// Inverse-S probability distortion: w(p) = exp(-(ln 1/p)^gamma). Fixes e^-1,
// identity at gamma = 1.
inline double weight(double p, double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("distortion exponent must be positive");
  p = clamp_prob(p);
  return std::exp(-std::pow(std::log(1.0 / p), gamma));
}

inline double pt_value(const Gamble& g, const PTParams& params) {
  if (!(g.p_gain >= 0.0 && g.p_gain <= 1.0)) throw std::domain_error("gamble probability outside [0,1]");
  if (g.gain < 0.0 || g.loss > 0.0) throw std::domain_error("gamble outcomes out of order");
  double gain_part = std::pow(g.gain, params.alpha) * weight(g.p_gain, params.gamma_gain);
  double loss_part =
      params.loss_aversion * std::pow(-g.loss, params.beta) * weight(1.0 - g.p_gain, params.gamma_loss);
  return gain_part - loss_part;
}

inline Gamble option_gamble(double p_correct, const RewardScheme& scheme = {}) {
  return {scheme.c1, p_correct, -scheme.c2};
}

inline Gamble agent_gamble(double p_correct, const RewardScheme& scheme = {}) {
  return {scheme.c1 - scheme.c3, p_correct, -(scheme.c2 + scheme.c3)};
}

// PT variant of the first decision: the same eight gambles as the base model,
// valued subjectively before the softmax.
inline ActionDistribution pt_dt1_distribution(const Vec4& option_post, const Vec4& agent_success,
                                              const PTParams& params,
                                              const RewardScheme& scheme = {}) {
  std::vector<double> values(8);
  for (int k = 0; k < 4; ++k) values[k] = pt_value(option_gamble(option_post[k], scheme), params);
  for (int j = 0; j < 4; ++j)
    values[4 + j] = pt_value(agent_gamble(agent_success[j], scheme), params);
  return softmax(values);
}

}  // namespace teamdec
