#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>

#include "teamdec/appraisal.hpp"
#include "teamdec/core.hpp"

namespace teamdec {

// Snapshot of everything a team is believed to believe at one point in time.
struct TeamBeliefState {
  std::array<BetaAppraisal, 4> human_appraisals{init_human_appraisal(), init_human_appraisal(),
                                                init_human_appraisal(), init_human_appraisal()};
  std::array<BetaAppraisal, 4> agent_appraisals{init_agent_appraisal(), init_agent_appraisal(),
                                                init_agent_appraisal(), init_agent_appraisal()};
  InfluenceState influence = uniform_influence_state();
  Mat4 agent_ratings{Vec4{0.75, 0.75, 0.75, 0.75}, Vec4{0.75, 0.75, 0.75, 0.75},
                     Vec4{0.75, 0.75, 0.75, 0.75}, Vec4{0.75, 0.75, 0.75, 0.75}};
  RewardScheme scheme{};
};

// Inputs to the second decision: the members' first-phase answers plus the
// consulted agent's answer.
struct Dt2Context {
  Responses responses{};
  int agent_id = 1;        // 1-based
  int agent_response = 1;  // 1-based option
};

enum class ModelKind { NB, CENT, PT_NB, PT_CENT, NB_H, NB_A, CENT_H, CENT_A, RANDOM };

inline std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::NB: return "NB";
    case ModelKind::CENT: return "CENT";
    case ModelKind::PT_NB: return "PT-NB";
    case ModelKind::PT_CENT: return "PT-CENT";
    case ModelKind::NB_H: return "NB-H";
    case ModelKind::NB_A: return "NB-A";
    case ModelKind::CENT_H: return "CENT-H";
    case ModelKind::CENT_A: return "CENT-A";
    case ModelKind::RANDOM: return "RANDOM";
  }
  throw std::domain_error("unknown model kind");
}

inline std::optional<ModelKind> parse_model_name(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "nb") return ModelKind::NB;
  if (s == "cent") return ModelKind::CENT;
  if (s == "pt-nb") return ModelKind::PT_NB;
  if (s == "pt-cent") return ModelKind::PT_CENT;
  if (s == "nb-h") return ModelKind::NB_H;
  if (s == "nb-a") return ModelKind::NB_A;
  if (s == "cent-h") return ModelKind::CENT_H;
  if (s == "cent-a") return ModelKind::CENT_A;
  if (s == "random") return ModelKind::RANDOM;
  return std::nullopt;
}

namespace detail {

// Per-option product of member likelihoods: a member who answered option k
// contributes their accuracy mean there and (1-mean)/3 to the other options.
// Abstaining members contribute nothing. The uniform class prior cancels in
// every normalization, so it is omitted.
inline Vec4 nb_likelihood_products(const TeamBeliefState& state, const Responses& responses) {
  Vec4 mass{1.0, 1.0, 1.0, 1.0};
  for (int m = 0; m < 4; ++m) {
    if (!responses[m]) continue;
    double mean = state.human_appraisals[m].mean();
    for (int k = 0; k < 4; ++k)
      mass[k] *= (*responses[m] == k + 1) ? mean : (1.0 - mean) / 3.0;
  }
  return mass;
}

inline Vec4 smoothed_indicator(int option_1based, double mean) {
  Vec4 out{};
  for (int k = 0; k < 4; ++k)
    out[k] = (option_1based == k + 1) ? mean : (1.0 - mean) / 3.0;
  return normalized(out);
}

}  // namespace detail

// --- Independence-pooling (NB) model -----------------------------------------

inline Vec4 nb_option_posterior(const TeamBeliefState& state, const Responses& responses) {
  return normalized(detail::nb_likelihood_products(state, responses));
}

// Raw per-agent success beliefs; these feed agent rewards directly.
inline Vec4 agent_success_means(const TeamBeliefState& state) {
  return {state.agent_appraisals[0].mean(), state.agent_appraisals[1].mean(),
          state.agent_appraisals[2].mean(), state.agent_appraisals[3].mean()};
}

inline Vec4 nb_agent_probs(const TeamBeliefState& state) {
  return normalized(agent_success_means(state));
}

// First decision: softmax over the eight expected rewards (four options, then
// four agents). agent_success holds each agent's raw believed accuracy.
inline ActionDistribution dt1_distribution(const Vec4& option_post, const Vec4& agent_success,
                                           const RewardScheme& scheme = {}) {
  std::vector<double> rewards(8);
  for (int k = 0; k < 4; ++k) rewards[k] = reward_for_option(option_post[k], scheme);
  for (int j = 0; j < 4; ++j) rewards[4 + j] = reward_for_agent(agent_success[j], scheme);
  return softmax(rewards);
}

// Second decision: the consult fee is sunk, so every option carries the same
// gain/loss pair and only the posterior varies.
inline ActionDistribution dt2_distribution(const Vec4& posterior, const RewardScheme& scheme = {}) {
  std::vector<double> rewards(4);
  for (int k = 0; k < 4; ++k)
    rewards[k] =
        (scheme.c1 - scheme.c3) * posterior[k] - (scheme.c2 + scheme.c3) * (1.0 - posterior[k]);
  return softmax(rewards);
}

// Posterior over options after folding the consulted agent's answer in as one
// more conditionally independent voter.
inline Vec4 nb_dt2_posterior(const TeamBeliefState& state, const Dt2Context& ctx) {
  Vec4 mass = detail::nb_likelihood_products(state, ctx.responses);
  double mean = state.agent_appraisals[ctx.agent_id - 1].mean();
  for (int k = 0; k < 4; ++k)
    mass[k] *= (ctx.agent_response == k + 1) ? mean : (1.0 - mean) / 3.0;
  return normalized(mass);
}

// --- Centrality-weighted (CENT) model ----------------------------------------

// Option mass = total centrality of the members who chose it, renormalized
// when abstentions removed mass. All-abstain degrades to uniform.
inline Vec4 cent_option_probs(const TeamBeliefState& state, const Responses& responses) {
  Vec4 mass{};
  for (int m = 0; m < 4; ++m)
    if (responses[m]) mass[*responses[m] - 1] += state.influence.delta[m];
  return normalized(mass);
}

inline Vec4 cent_agent_aggregate(const TeamBeliefState& state) {
  return aggregate_agent_appraisal(state.influence.delta, state.agent_ratings);
}

inline Vec4 cent_agent_probs(const TeamBeliefState& state) {
  return normalized(cent_agent_aggregate(state));
}

// Second-decision posterior: trust weight w on the agent's answer (scaled by
// its aggregate rating), 1-w on the centrality vote mass.
inline Vec4 cent_dt2_posterior(const TeamBeliefState& state, const Dt2Context& ctx, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("trust weight outside [0,1]");
  double pi_j = cent_agent_aggregate(state)[ctx.agent_id - 1];
  Vec4 mass{};
  for (int m = 0; m < 4; ++m)
    if (ctx.responses[m]) mass[*ctx.responses[m] - 1] += state.influence.delta[m] * (1.0 - w);
  mass[ctx.agent_response - 1] += pi_j * w;
  return normalized(mass);
}

// --- DT2 ablations and the random baseline -----------------------------------

inline ActionDistribution dt2_human_only(ModelKind kind, const TeamBeliefState& state,
                                         const Dt2Context& ctx) {
  Vec4 posterior;
  switch (kind) {
    case ModelKind::NB:
    case ModelKind::NB_H:
      posterior = nb_option_posterior(state, ctx.responses);
      break;
    case ModelKind::CENT:
    case ModelKind::CENT_H:
      posterior = cent_option_probs(state, ctx.responses);
      break;
    default:
      throw std::domain_error("human-only ablation requires NB or CENT");
  }
  return dt2_distribution(posterior, state.scheme);
}

inline ActionDistribution dt2_agent_only(ModelKind kind, const TeamBeliefState& state,
                                         const Dt2Context& ctx) {
  double mean;
  switch (kind) {
    case ModelKind::NB:
    case ModelKind::NB_A:
      mean = state.agent_appraisals[ctx.agent_id - 1].mean();
      break;
    case ModelKind::CENT:
    case ModelKind::CENT_A:
      mean = cent_agent_aggregate(state)[ctx.agent_id - 1];
      break;
    default:
      throw std::domain_error("agent-only ablation requires NB or CENT");
  }
  return dt2_distribution(detail::smoothed_indicator(ctx.agent_response, mean), state.scheme);
}

inline ActionDistribution random_baseline(int n_actions) {
  if (n_actions != 4 && n_actions != 8) throw std::domain_error("baseline supports 4 or 8 actions");
  ActionDistribution out;
  out.probs.assign(static_cast<std::size_t>(n_actions), 1.0 / n_actions);
  return out;
}

}  // namespace teamdec
