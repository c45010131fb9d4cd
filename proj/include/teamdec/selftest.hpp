#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "teamdec/fit_eval.hpp"
#include "teamdec/loss.hpp"
#include "teamdec/models.hpp"
#include "teamdec/prospect.hpp"
#include "teamdec/sim.hpp"

namespace teamdec::selftest {

namespace detail {

inline void expect_near(const char* what, double got, double want, double tol) {
  if (!(std::abs(got - want) <= tol)) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "%s: got %.17g, expected %.17g (tol %g)", what, got, want, tol);
    throw std::runtime_error(buf);
  }
}

template <typename A, typename B>
inline void expect_near_all(const char* what, const A& got, const B& want, double tol) {
  for (std::size_t k = 0; k < want.size(); ++k) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s[%zu]", what, k);
    expect_near(buf, got[k], want[k], tol);
  }
}

// Four members whose accuracy beliefs are 0.5, 0.4, 0.8, 0.6.
inline TeamBeliefState mixed_vote_state() {
  TeamBeliefState state;
  state.human_appraisals = {BetaAppraisal{1, 1}, BetaAppraisal{2, 3}, BetaAppraisal{4, 1},
                            BetaAppraisal{3, 2}};
  return state;
}

// Centrality 0.4/0.3/0.2/0.1 with a fixed agent-rating table.
inline TeamBeliefState rated_agents_state() {
  TeamBeliefState state;
  state.influence.delta = {0.4, 0.3, 0.2, 0.1};
  state.agent_ratings = {Vec4{0.45, 0.67, 0.85, 0.6}, Vec4{0.6, 0.75, 0.9, 0.55},
                         Vec4{0.8, 0.65, 0.7, 0.5}, Vec4{0.75, 0.75, 0.95, 0.1}};
  return state;
}

inline Responses make_responses(int r1, int r2, int r3, int r4) {
  return Responses{r1, r2, r3, r4};
}

}  // namespace detail

struct Check {
  const char* name;
  std::function<void()> run;
};

inline std::vector<Check> checks() {
  using namespace detail;
  std::vector<Check> out;

  out.push_back({"nb-posterior-mixed-votes", [] {
    Vec4 post = nb_option_posterior(mixed_vote_state(), make_responses(1, 2, 1, 3));
    expect_near_all("posterior", post,
                    Vec4{0.82758620689655172, 0.045977011494252874, 0.10344827586206897,
                         0.022988505747126437},
                    1e-12);
  }});

  out.push_back({"nb-rewards-mixed-votes", [] {
    TeamBeliefState state = mixed_vote_state();
    Vec4 post = nb_option_posterior(state, make_responses(1, 2, 1, 3));
    Vec4 rewards;
    for (int k = 0; k < 4; ++k) rewards[k] = reward_for_option(post[k], state.scheme);
    expect_near_all("option reward", rewards,
                    Vec4{3.1379310344827586, -0.77011494252873563, -0.48275862068965517,
                         -0.88505747126436782},
                    1e-12);
    Vec4 agent_means = agent_success_means(state);
    for (int j = 0; j < 4; ++j)
      expect_near("agent reward", reward_for_agent(agent_means[j], state.scheme), 1.75, 1e-12);
  }});

  out.push_back({"nb-action-distribution-mixed-votes", [] {
    TeamBeliefState state = mixed_vote_state();
    auto dist = dt1_distribution(nb_option_posterior(state, make_responses(1, 2, 1, 3)),
                                 agent_success_means(state), state.scheme);
    const double want[8] = {0.4847056068565517,    0.009732742663006742, 0.012972763643269937,
                            0.0086759358998397623, 0.12097823773433296,  0.12097823773433296,
                            0.12097823773433296,   0.12097823773433296};
    for (int s = 0; s < 8; ++s) expect_near("action probability", dist.probs[s], want[s], 1e-12);
  }});

  out.push_back({"nb-posterior-split-votes", [] {
    TeamBeliefState state;  // fresh team: all accuracy beliefs at 1/2
    Vec4 post = nb_option_posterior(state, make_responses(3, 3, 4, 4));
    expect_near_all("posterior", post, Vec4{0.05, 0.05, 0.45, 0.45}, 1e-12);
    Vec4 rewards;
    for (int k = 0; k < 4; ++k) rewards[k] = reward_for_option(post[k], state.scheme);
    expect_near_all("option reward", rewards, Vec4{-0.75, -0.75, 1.25, 1.25}, 1e-12);
    auto dist = dt1_distribution(post, agent_success_means(state), state.scheme);
    const double want[8] = {0.015265290590973764, 0.015265290590973764, 0.11279608854318336,
                            0.11279608854318336,  0.18596931043292144,  0.18596931043292144,
                            0.18596931043292144,  0.18596931043292144};
    for (int s = 0; s < 8; ++s) expect_near("action probability", dist.probs[s], want[s], 1e-12);
  }});

  out.push_back({"beta-update-one-observation", [] {
    QuestionRecord q;
    q.index = 1;
    q.responses = make_responses(3, 3, 4, 4);
    q.team_action = TeamAction::option(4);
    q.correct_option = 4;
    BeliefTracker tracker;
    tracker.observe_question(q);
    Vec4 means;
    for (int m = 0; m < 4; ++m) means[m] = tracker.state.human_appraisals[m].mean();
    expect_near_all("updated accuracy belief", means,
                    Vec4{1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0}, 1e-12);
    for (int j = 0; j < 4; ++j)
      expect_near("unconsulted agent belief", tracker.state.agent_appraisals[j].mean(), 0.75,
                  1e-12);
  }});

  out.push_back({"agent-belief-after-correct-consult", [] {
    BetaAppraisal agent = observe(init_agent_appraisal(), true);
    expect_near("agent mean", agent.mean(), 0.5 + 0.5 * (2.0 / 3.0), 1e-12);
  }});

  out.push_back({"centrality-weighted-agent-aggregates", [] {
    TeamBeliefState state = rated_agents_state();
    Vec4 pi = cent_agent_aggregate(state);
    expect_near_all("aggregate rating", pi, Vec4{0.595, 0.698, 0.845, 0.515}, 1e-12);
    Vec4 rewards;
    for (int j = 0; j < 4; ++j) rewards[j] = reward_for_agent(pi[j], state.scheme);
    expect_near_all("agent reward", rewards, Vec4{0.975, 1.49, 2.225, 0.575}, 1e-12);
  }});

  out.push_back({"centrality-option-rewards", [] {
    TeamBeliefState state = rated_agents_state();
    Vec4 probs = cent_option_probs(state, make_responses(1, 2, 1, 3));
    Vec4 rewards;
    for (int k = 0; k < 4; ++k) rewards[k] = reward_for_option(probs[k], state.scheme);
    expect_near_all("option reward", rewards, Vec4{2.0, 0.5, -0.5, -1.0}, 1e-12);
  }});

  out.push_back({"centrality-trust-blend-second-stage", [] {
    TeamBeliefState state = rated_agents_state();
    Dt2Context ctx{make_responses(1, 2, 1, 3), 3, 4};
    Vec4 post = cent_dt2_posterior(state, ctx, 0.9);
    expect_near_all("posterior", post,
                    Vec4{0.069726902963393376, 0.034863451481696688, 0.011621150493898896,
                         0.88378849506101104},
                    1e-12);
  }});

  out.push_back({"probability-weighting-small-p", [] {
    expect_near("w(0.05, 0.5)", weight(0.05, 0.5), 0.17713938284503428, 1e-12);
    expect_near("w(p, 1) identity", weight(0.37, 1.0), 0.37, 1e-12);
  }});

  out.push_back({"prospect-value-risky-gamble", [] {
    PTParams params{0.88, 0.88, 2.25, 0.61, 0.61};
    expect_near("value", pt_value(Gamble{4.0, 0.45, -1.0}, params), 0.33292531377274135, 1e-12);
  }});

  out.push_back({"prospect-identity-is-expectation", [] {
    PTParams id = PTParams::identity();
    const Gamble gambles[3] = {{4.0, 0.05, -1.0}, {4.0, 0.45, -1.0}, {3.0, 0.75, -2.0}};
    for (const Gamble& g : gambles)
      expect_near("expected value", pt_value(g, id), g.p_gain * g.gain + (1 - g.p_gain) * g.loss,
                  1e-12);
  }});

  out.push_back({"loss-random-baselines", [] {
    std::vector<double> u8(8, 0.125), u4(4, 0.25);
    expect_near("dominant-data loss, 8 actions", l1_loss(u8, 0), 2.0794415416798359, 1e-9);
    expect_near("dominant-model loss, 8 actions", l2_loss(u8, 5), 2.0794415416798359, 1e-9);
    expect_near("pick loss, 8 actions", binary_loss(u8, 3), 2.0794415416798359, 1e-9);
    expect_near("dominant-data loss, 4 actions", l1_loss(u4, 2), 1.3862943611198906, 1e-9);
  }});

  out.push_back({"loss-closed-forms", [] {
    expect_near("pooled-average loss", l1_loss({0.6, 0.3, 0.1}, 1), 0.94891543589539902, 1e-12);
    expect_near("dominant-set candidate", l2_candidate_dominant_set({0.5, 0.3, 0.2}, 2).loss,
                1.1688526324399939, 1e-12);
    expect_near("threshold candidate", l2_candidate_pair_threshold({0.5, 0.3, 0.2}, 2).loss,
                1.1512925464970228, 1e-12);
    expect_near("vertex-scan loss", l2_loss({0.5, 0.3, 0.2}, 2), 1.1512925464970228, 1e-12);
  }});

  out.push_back({"loss-oracle-spot-check", [] {
    const std::vector<double> q{0.5, 0.3, 0.2};
    auto qp = oracle_min_cross_entropy(q, 2, CrossEntropyDirection::QP, 1e-3);
    auto pq = oracle_min_cross_entropy(q, 2, CrossEntropyDirection::PQ, 1e-3);
    expect_near("search vs closed form, data direction", qp.loss, l1_loss(q, 2), 2e-3);
    expect_near("search vs closed form, model direction", pq.loss, l2_loss(q, 2), 2e-3);
  }});

  out.push_back({"explore-exploit-expected-score", [] {
    expect_near("expectation", expected_score_explore_exploit({0.5, 0.6, 0.7, 0.8}, 6, 45), 72.0,
                1e-9);
    expect_near("certain agent, no exploration",
                expected_score_explore_exploit({1.0, 1.0, 1.0, 1.0}, 0, 45), 135.0, 1e-9);
  }});

  out.push_back({"signed-rank-textbook-pairs", [] {
    std::vector<double> x{2, 4, 6, 8, 10}, y{1, 2, 3, 4, 5};
    auto r = wilcoxon_signed_rank(x, y);
    expect_near("statistic", r.statistic, 0.0, 1e-12);
    expect_near("two-sided p", r.p_value, 0.0625, 1e-12);
    auto same = wilcoxon_signed_rank(y, y);
    expect_near("identical samples p", same.p_value, 1.0, 1e-12);
  }});

  out.push_back({"perfect-team-realized-score", [] {
    SessionLog log;
    log.team_id = "fixture";
    for (int q = 1; q <= 45; ++q) {
      QuestionRecord record;
      record.index = q;
      record.responses = make_responses(2, 2, 2, 2);
      record.team_action = TeamAction::option(2);
      record.correct_option = 2;
      log.questions.push_back(record);
    }
    expect_near("total score", realized_score(log), 180.0, 1e-12);
  }});

  return out;
}

// Runs every named fixture; prints one line per check. Returns the number of
// failures (0 = all good).
inline int run(std::ostream& out) {
  int failures = 0;
  for (const Check& check : checks()) {
    try {
      check.run();
      out << "[pass] " << check.name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      out << "[FAIL] " << check.name << ": " << e.what() << "\n";
    }
  }
  return failures;
}

}  // namespace teamdec::selftest
