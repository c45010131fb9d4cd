#pragma once

#include <string>
#include <vector>

#include "teamdec/models.hpp"
#include "teamdec/prospect.hpp"

namespace teamdec {

// Evolves a TeamBeliefState through a session exactly as a live team would
// see it: survey data applies from the question after it was taken, and a
// question's revealed answer updates appraisals only for later questions.
// The simulator drives the same tracker, so fitting sees generation-time
// beliefs.
struct BeliefTracker {
  TeamBeliefState state;
  std::size_t surveys_applied = 0;

  explicit BeliefTracker(const RewardScheme& scheme = {}) { state.scheme = scheme; }

  void apply_surveys_before(const std::vector<SurveyRecord>& surveys, int question_index) {
    while (surveys_applied < surveys.size() &&
           surveys[surveys_applied].after_question < question_index) {
      const SurveyRecord& s = surveys[surveys_applied];
      state.influence = make_influence_state(s.influence);
      state.agent_ratings = s.agent_ratings;
      ++surveys_applied;
    }
  }

  void observe_question(const QuestionRecord& q) {
    for (int m = 0; m < 4; ++m) {
      if (q.responses[m])
        state.human_appraisals[m] =
            observe(state.human_appraisals[m], *q.responses[m] == q.correct_option);
    }
    if (q.consulted) {
      int j = q.consulted->agent - 1;
      state.agent_appraisals[j] =
          observe(state.agent_appraisals[j], q.consulted->response == q.correct_option);
    }
  }
};

// Model-ready inputs for one first-stage decision, for both model families.
struct Dt1Event {
  int question_index = 0;
  std::size_t observed = 0;  // 0..3 option, 4..7 agent
  Vec4 nb_option_post{};
  Vec4 nb_agent_success{};
  Vec4 cent_option_post{};
  Vec4 cent_agent_success{};
};

// Model-ready inputs for one second-stage decision.
struct Dt2Event {
  int question_index = 0;
  std::size_t observed = 0;  // final option, 0-based
  int agent_id = 1;
  int agent_response = 1;
  Vec4 nb_posterior{};        // humans + agent folded in
  Vec4 nb_human_posterior{};  // humans only
  double nb_agent_mean = 0.75;
  Vec4 cent_human_mass{};     // centrality mass per option, scaled by (1-w) later
  Vec4 cent_human_probs{};    // the same mass normalized (human-only model)
  double cent_pi = 0.75;      // aggregate rating of the consulted agent
};

struct TeamTrace {
  std::string team_id;
  int n_questions = 0;
  std::vector<Dt1Event> dt1;
  std::vector<Dt2Event> dt2;
};

inline std::size_t dt1_action_index(const TeamAction& action) {
  if (action.kind == TeamAction::Kind::Option) return static_cast<std::size_t>(action.id - 1);
  if (action.kind == TeamAction::Kind::ConsultAgent)
    return static_cast<std::size_t>(4 + action.id - 1);
  throw std::domain_error("no scored action for a no-consensus question");
}

// One pass over a session, snapshotting every scored decision's model inputs.
// Questions without a scored action (no consensus) produce no event.
inline TeamTrace build_team_trace(const SessionLog& log, const RewardScheme& scheme = {}) {
  TeamTrace trace;
  trace.team_id = log.team_id;
  trace.n_questions = log.questions.empty() ? 0 : log.questions.back().index;
  BeliefTracker tracker(scheme);
  for (const QuestionRecord& q : log.questions) {
    tracker.apply_surveys_before(log.surveys, q.index);
    const TeamBeliefState& state = tracker.state;

    if (q.team_action.kind != TeamAction::Kind::NoConsensus) {
      Dt1Event e;
      e.question_index = q.index;
      e.observed = dt1_action_index(q.team_action);
      e.nb_option_post = nb_option_posterior(state, q.responses);
      e.nb_agent_success = agent_success_means(state);
      e.cent_option_post = cent_option_probs(state, q.responses);
      e.cent_agent_success = cent_agent_aggregate(state);
      trace.dt1.push_back(e);
    }

    if (q.consulted && q.consulted->final_option) {
      Dt2Context ctx{q.responses, q.consulted->agent, q.consulted->response};
      Dt2Event e;
      e.question_index = q.index;
      e.observed = static_cast<std::size_t>(*q.consulted->final_option - 1);
      e.agent_id = ctx.agent_id;
      e.agent_response = ctx.agent_response;
      e.nb_posterior = nb_dt2_posterior(state, ctx);
      e.nb_human_posterior = nb_option_posterior(state, ctx.responses);
      e.nb_agent_mean = state.agent_appraisals[ctx.agent_id - 1].mean();
      Vec4 mass{};
      for (int m = 0; m < 4; ++m)
        if (ctx.responses[m]) mass[*ctx.responses[m] - 1] += state.influence.delta[m];
      e.cent_human_mass = mass;
      e.cent_human_probs = normalized(mass);
      e.cent_pi = cent_agent_aggregate(state)[ctx.agent_id - 1];
      trace.dt2.push_back(e);
    }

    tracker.observe_question(q);
  }
  return trace;
}

// Second-stage posterior for the trust-weighted model, rebuilt from trace
// components so a grid over w needs no replay.
inline Vec4 cent_dt2_from_event(const Dt2Event& e, double w) {
  Vec4 mass;
  for (int k = 0; k < 4; ++k) mass[k] = e.cent_human_mass[k] * (1.0 - w);
  mass[e.agent_response - 1] += e.cent_pi * w;
  return normalized(mass);
}

// NB-A / CENT-A posterior from trace components.
inline Vec4 agent_only_posterior_from_event(const Dt2Event& e, bool cent) {
  double mean = cent ? e.cent_pi : e.nb_agent_mean;
  Vec4 out{};
  for (int k = 0; k < 4; ++k)
    out[k] = (e.agent_response == k + 1) ? mean : (1.0 - mean) / 3.0;
  return normalized(out);
}

struct ModelParams {
  PTParams pt = PTParams::identity();
  double cent_w = 0.9;
};

// The model's distribution for a first-stage event.
inline ActionDistribution dt1_event_distribution(ModelKind kind, const Dt1Event& e,
                                                 const ModelParams& params,
                                                 const RewardScheme& scheme) {
  switch (kind) {
    case ModelKind::NB: return dt1_distribution(e.nb_option_post, e.nb_agent_success, scheme);
    case ModelKind::CENT:
      return dt1_distribution(e.cent_option_post, e.cent_agent_success, scheme);
    case ModelKind::PT_NB:
      return pt_dt1_distribution(e.nb_option_post, e.nb_agent_success, params.pt, scheme);
    case ModelKind::PT_CENT:
      return pt_dt1_distribution(e.cent_option_post, e.cent_agent_success, params.pt, scheme);
    case ModelKind::RANDOM: return random_baseline(8);
    default: throw std::domain_error(model_name(kind) + " is not a first-stage model");
  }
}

// The model's distribution for a second-stage event. The PT variants coincide
// with their base models here: all four options share one gain/loss pair, so
// the subjective transform preserves the base ordering and the fitted model
// family collapses.
inline ActionDistribution dt2_event_distribution(ModelKind kind, const Dt2Event& e,
                                                 const ModelParams& params,
                                                 const RewardScheme& scheme) {
  switch (kind) {
    case ModelKind::NB:
    case ModelKind::PT_NB: return dt2_distribution(e.nb_posterior, scheme);
    case ModelKind::CENT:
    case ModelKind::PT_CENT:
      return dt2_distribution(cent_dt2_from_event(e, params.cent_w), scheme);
    case ModelKind::NB_H: return dt2_distribution(e.nb_human_posterior, scheme);
    case ModelKind::CENT_H: return dt2_distribution(e.cent_human_probs, scheme);
    case ModelKind::NB_A:
      return dt2_distribution(agent_only_posterior_from_event(e, false), scheme);
    case ModelKind::CENT_A:
      return dt2_distribution(agent_only_posterior_from_event(e, true), scheme);
    case ModelKind::RANDOM: return random_baseline(4);
  }
  throw std::domain_error("unknown model kind");
}

}  // namespace teamdec
