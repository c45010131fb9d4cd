#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "teamdec/json_io.hpp"
#include "teamdec/replay.hpp"
#include "teamdec/rng.hpp"

namespace teamdec {

enum class ConsultPolicy { ModelDriven, FixedProbability };

inline const char* consult_policy_name(ConsultPolicy p) {
  return p == ConsultPolicy::ModelDriven ? "model" : "fixed";
}

inline std::optional<ConsultPolicy> parse_consult_policy(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "model") return ConsultPolicy::ModelDriven;
  if (s == "fixed") return ConsultPolicy::FixedProbability;
  return std::nullopt;
}

struct SimConfig {
  int n_teams = 30;
  int n_questions = 45;
  std::array<double, kMembers> human_accuracies{0.55, 0.65, 0.75, 0.85};
  std::array<double, kAgents> agent_accuracies{0.6, 0.7, 0.8, 0.9};
  ModelKind generative_model = ModelKind::NB;
  PTParams pt = PTParams::identity();  // used by the PT generative models
  double dt2_trust_w = 0.9;            // used by the CENT family's second stage
  ConsultPolicy consult_policy = ConsultPolicy::ModelDriven;
  double consult_probability = 0.4;  // FixedProbability mode only
  double dt1_no_consensus_rate = 0.02;
  double dt2_no_consensus_rate = 0.18;
  int survey_period = 5;
  double survey_noise = 0.05;
  RewardScheme scheme{};
  std::uint64_t seed = 0;

  void require_valid() const {
    if (n_teams < 1 || n_questions < 1) throw std::domain_error("need at least one team/question");
    for (double a : human_accuracies)
      if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("human accuracy outside (0, 1]");
    for (double a : agent_accuracies)
      if (!(a >= 0.5 && a <= 1.0)) throw std::domain_error("agent accuracy outside [0.5, 1]");
    switch (generative_model) {
      case ModelKind::NB:
      case ModelKind::CENT:
      case ModelKind::PT_NB:
      case ModelKind::PT_CENT:
        break;
      default:
        throw std::domain_error("generative model must be nb, cent, pt-nb or pt-cent");
    }
    if (!(dt2_trust_w >= 0.0 && dt2_trust_w <= 1.0))
      throw std::domain_error("dt2_trust_w outside [0, 1]");
    if (!(consult_probability >= 0.0 && consult_probability <= 1.0))
      throw std::domain_error("consult_probability outside [0, 1]");
    if (!(dt1_no_consensus_rate >= 0.0 && dt1_no_consensus_rate <= 1.0) ||
        !(dt2_no_consensus_rate >= 0.0 && dt2_no_consensus_rate <= 1.0))
      throw std::domain_error("no-consensus rates outside [0, 1]");
    if (survey_period < 1) throw std::domain_error("survey_period must be positive");
    if (!(survey_noise >= 0.0)) throw std::domain_error("survey_noise must be nonnegative");
    if (!scheme.valid()) throw std::domain_error("invalid reward scheme");
  }
};

inline json sim_config_to_json(const SimConfig& c) {
  return json{{"n_teams", c.n_teams},
              {"n_questions", c.n_questions},
              {"human_accuracies", c.human_accuracies},
              {"agent_accuracies", c.agent_accuracies},
              {"generative_model", model_name(c.generative_model)},
              {"pt_params", to_json(c.pt)},
              {"dt2_trust_w", c.dt2_trust_w},
              {"consult_policy", consult_policy_name(c.consult_policy)},
              {"consult_probability", c.consult_probability},
              {"dt1_no_consensus_rate", c.dt1_no_consensus_rate},
              {"dt2_no_consensus_rate", c.dt2_no_consensus_rate},
              {"survey_period", c.survey_period},
              {"survey_noise", c.survey_noise},
              {"reward_scheme", json::array({c.scheme.c1, c.scheme.c2, c.scheme.c3})},
              {"seed", c.seed}};
}

inline SimConfig sim_config_from_json(const json& j) {
  SimConfig c;
  if (j.contains("n_teams")) c.n_teams = j.at("n_teams").get<int>();
  if (j.contains("n_questions")) c.n_questions = j.at("n_questions").get<int>();
  if (j.contains("human_accuracies"))
    c.human_accuracies = j.at("human_accuracies").get<std::array<double, kMembers>>();
  if (j.contains("agent_accuracies"))
    c.agent_accuracies = j.at("agent_accuracies").get<std::array<double, kAgents>>();
  if (j.contains("generative_model")) {
    auto kind = parse_model_name(j.at("generative_model").get<std::string>());
    if (!kind) throw std::domain_error("unknown generative_model");
    c.generative_model = *kind;
  }
  if (j.contains("pt_params")) c.pt = pt_params_from_json(j.at("pt_params"));
  if (j.contains("dt2_trust_w")) c.dt2_trust_w = j.at("dt2_trust_w").get<double>();
  if (j.contains("consult_policy")) {
    auto policy = parse_consult_policy(j.at("consult_policy").get<std::string>());
    if (!policy) throw std::domain_error("unknown consult_policy");
    c.consult_policy = *policy;
  }
  if (j.contains("consult_probability"))
    c.consult_probability = j.at("consult_probability").get<double>();
  if (j.contains("dt1_no_consensus_rate"))
    c.dt1_no_consensus_rate = j.at("dt1_no_consensus_rate").get<double>();
  if (j.contains("dt2_no_consensus_rate"))
    c.dt2_no_consensus_rate = j.at("dt2_no_consensus_rate").get<double>();
  if (j.contains("survey_period")) c.survey_period = j.at("survey_period").get<int>();
  if (j.contains("survey_noise")) c.survey_noise = j.at("survey_noise").get<double>();
  if (j.contains("reward_scheme")) {
    auto v = j.at("reward_scheme").get<std::vector<double>>();
    if (v.size() != 3) throw std::domain_error("reward_scheme needs three values");
    c.scheme = RewardScheme{v[0], v[1], v[2]};
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  c.require_valid();
  return c;
}

namespace stream {
// Purpose keys for derived random streams; every draw site owns a stream keyed
// by (seed, purpose, team, question) so logs are order-independent.
constexpr std::uint64_t kTeamSetup = 1;
constexpr std::uint64_t kCorrectOption = 2;
constexpr std::uint64_t kResponses = 3;
constexpr std::uint64_t kNoConsensus = 4;
constexpr std::uint64_t kDt1Action = 5;
constexpr std::uint64_t kAgentResponse = 6;
constexpr std::uint64_t kDt2Action = 7;
constexpr std::uint64_t kSurvey = 8;
}  // namespace stream

namespace detail {

// Correct answer with probability `accuracy`, otherwise uniform over the rest.
inline int draw_response(Rng& rng, int correct_option, double accuracy) {
  if (rng.next_double() < accuracy) return correct_option;
  int wrong = static_cast<int>(rng.next_below(3));  // 0..2 among the other three
  for (int option = 1; option <= 4; ++option) {
    if (option == correct_option) continue;
    if (wrong == 0) return option;
    --wrong;
  }
  return 4;  // unreachable
}

inline int majority_response(Rng& rng, const Responses& responses) {
  int counts[4] = {0, 0, 0, 0};
  for (const auto& r : responses)
    if (r) ++counts[*r - 1];
  int best = 0;
  for (int k = 1; k < 4; ++k)
    if (counts[k] > counts[best]) best = k;
  std::vector<int> modes;
  for (int k = 0; k < 4; ++k)
    if (counts[k] == counts[best]) modes.push_back(k + 1);
  return modes[rng.next_below(static_cast<std::uint32_t>(modes.size()))];
}

inline std::vector<double> dt2_generative_probs(const TeamBeliefState& state,
                                                const Dt2Context& ctx, ModelKind kind,
                                                double trust_w) {
  // The prospect transform is the identity on the second stage (equal stakes
  // across all four options), so the PT variants share their base model here.
  bool cent = kind == ModelKind::CENT || kind == ModelKind::PT_CENT;
  Vec4 posterior = cent ? cent_dt2_posterior(state, ctx, trust_w) : nb_dt2_posterior(state, ctx);
  return dt2_distribution(posterior, state.scheme).probs;
}

}  // namespace detail

struct SimResult {
  std::vector<SessionLog> logs;
  std::vector<double> incremental_scores;  // running totals kept during generation
};

// Follows the rule: +c1 when the final answer is correct, -c2 when it is wrong
// or no consensus was reached, and an extra -c3 whenever an agent was consulted.
inline double realized_score(const SessionLog& log, const RewardScheme& scheme = {}) {
  double total = 0.0;
  for (const QuestionRecord& q : log.questions) {
    bool correct = false;
    if (q.team_action.kind == TeamAction::Kind::Option)
      correct = q.team_action.id == q.correct_option;
    else if (q.team_action.kind == TeamAction::Kind::ConsultAgent)
      correct = q.consulted && q.consulted->final_option &&
                *q.consulted->final_option == q.correct_option;
    total += correct ? scheme.c1 : -scheme.c2;
    if (q.team_action.kind == TeamAction::Kind::ConsultAgent) total -= scheme.c3;
  }
  return total;
}

inline SimResult generate(const SimConfig& config) {
  config.require_valid();
  SimResult result;
  result.logs.reserve(static_cast<std::size_t>(config.n_teams));

  for (int team = 0; team < config.n_teams; ++team) {
    char name[16];
    std::snprintf(name, sizeof name, "team_%03d", team + 1);

    SessionLog log;
    log.team_id = name;
    log.n_members = kMembers;
    log.n_agents = kAgents;
    log.agent_true_accuracies = config.agent_accuracies;

    // Fixed ground-truth influence matrix with strictly positive rows.
    Rng setup(config.seed, stream::kTeamSetup, static_cast<std::uint64_t>(team), 0);
    Mat4 w_true;
    for (auto& row : w_true) {
      double row_sum = 0.0;
      for (double& v : row) {
        v = 0.05 + setup.next_double();
        row_sum += v;
      }
      for (double& v : row) v /= row_sum;
    }

    BeliefTracker tracker(config.scheme);
    Mat4 ratings_reported;  // last reported ratings, drifting toward observed
    for (auto& row : ratings_reported) row.fill(0.75);
    std::array<int, kAgents> consults{};
    std::array<int, kAgents> consult_hits{};
    double score = 0.0;

    for (int q = 1; q <= config.n_questions; ++q) {
      const auto tq = static_cast<std::uint64_t>(team) * 100000u + static_cast<std::uint64_t>(q);
      tracker.apply_surveys_before(log.surveys, q);

      Rng rng_correct(config.seed, stream::kCorrectOption, tq, 0);
      int correct = 1 + static_cast<int>(rng_correct.next_below(4));

      Rng rng_resp(config.seed, stream::kResponses, tq, 0);
      Responses responses;
      for (int m = 0; m < kMembers; ++m)
        responses[m] = detail::draw_response(rng_resp, correct, config.human_accuracies[m]);

      QuestionRecord record;
      record.index = q;
      record.responses = responses;
      record.correct_option = correct;

      Rng rng_nc(config.seed, stream::kNoConsensus, tq, 0);
      if (rng_nc.next_double() < config.dt1_no_consensus_rate) {
        record.team_action = TeamAction::no_consensus();
        score -= config.scheme.c2;
      } else {
        Dt1Event view;
        view.question_index = q;
        view.nb_option_post = nb_option_posterior(tracker.state, responses);
        view.nb_agent_success = agent_success_means(tracker.state);
        view.cent_option_post = cent_option_probs(tracker.state, responses);
        view.cent_agent_success = cent_agent_aggregate(tracker.state);
        ModelParams params;
        params.pt = config.pt;
        params.cent_w = config.dt2_trust_w;
        auto dist = dt1_event_distribution(config.generative_model, view, params, config.scheme);

        Rng rng_act(config.seed, stream::kDt1Action, tq, 0);
        int slot;
        if (config.consult_policy == ConsultPolicy::ModelDriven) {
          slot = rng_act.next_weighted(dist.probs);
        } else if (rng_act.next_double() < config.consult_probability) {
          std::array<double, kAgents> agent_slots;
          for (int j = 0; j < kAgents; ++j) agent_slots[j] = dist.probs[4 + j];
          slot = 4 + rng_act.next_weighted(agent_slots);
        } else {
          slot = detail::majority_response(rng_act, responses) - 1;
        }

        if (slot < 4) {
          record.team_action = TeamAction::option(slot + 1);
          score += slot + 1 == correct ? config.scheme.c1 : -config.scheme.c2;
        } else {
          int agent = slot - 4 + 1;
          Rng rng_agent(config.seed, stream::kAgentResponse, tq, 0);
          int agent_response =
              detail::draw_response(rng_agent, correct, config.agent_accuracies[agent - 1]);
          record.team_action = TeamAction::consult(agent);
          ConsultRecord consult;
          consult.agent = agent;
          consult.response = agent_response;

          Rng rng_dt2(config.seed, stream::kDt2Action, tq, 0);
          if (rng_dt2.next_double() < config.dt2_no_consensus_rate) {
            score -= config.scheme.c2 + config.scheme.c3;  // fee paid, no answer
          } else {
            Dt2Context ctx{responses, agent, agent_response};
            std::vector<double> probs = detail::dt2_generative_probs(tracker.state, ctx,
                                                      config.generative_model, config.dt2_trust_w);
            int final_option = 1 + rng_dt2.next_weighted(probs);
            consult.final_option = final_option;
            score += (final_option == correct ? config.scheme.c1 : -config.scheme.c2) -
                     config.scheme.c3;
          }
          record.consulted = consult;
          ++consults[agent - 1];
          if (agent_response == correct) ++consult_hits[agent - 1];
        }
      }

      log.questions.push_back(record);
      tracker.observe_question(record);

      if (q % config.survey_period == 0) {
        Rng rng_survey(config.seed, stream::kSurvey, tq, 0);
        SurveyRecord survey;
        survey.after_question = q;
        for (int i = 0; i < kMembers; ++i) {
          double row_sum = 0.0;
          for (int k = 0; k < kMembers; ++k) {
            survey.influence[i][k] = w_true[i][k] + config.survey_noise * rng_survey.next_double();
            row_sum += survey.influence[i][k];
          }
          for (int k = 0; k < kMembers; ++k) survey.influence[i][k] /= row_sum;
        }
        for (int i = 0; i < kMembers; ++i)
          for (int j = 0; j < kAgents; ++j) {
            double observed =
                consults[j] > 0 ? static_cast<double>(consult_hits[j]) / consults[j] : 0.75;
            double noise = config.survey_noise * (rng_survey.next_double() - 0.5);
            double r = ratings_reported[i][j] + 0.5 * (observed - ratings_reported[i][j]) + noise;
            ratings_reported[i][j] = std::clamp(r, 0.0, 1.0);
            survey.agent_ratings[i][j] = ratings_reported[i][j];
          }
        log.surveys.push_back(survey);
      }
    }

    result.logs.push_back(std::move(log));
    result.incremental_scores.push_back(score);
  }
  return result;
}

// Expected total reward of the explore-then-exploit consulting strategy: try
// every agent a fixed number of times, then stick with the most accurate one.
inline double expected_score_explore_exploit(const std::array<double, kAgents>& agent_accuracies,
                                             int consults_per_agent, int n_questions,
                                             const RewardScheme& scheme = {}) {
  if (consults_per_agent < 0 || n_questions < 0)
    throw std::domain_error("counts must be nonnegative");
  if (consults_per_agent * kAgents > n_questions)
    throw std::domain_error("exploration exceeds the number of questions");
  double total = 0.0;
  double best = 0.0;
  for (double acc : agent_accuracies) {
    total += consults_per_agent * reward_for_agent(acc, scheme);
    best = std::max(best, acc);
  }
  total += (n_questions - consults_per_agent * kAgents) * reward_for_agent(best, scheme);
  return total;
}

}  // namespace teamdec
