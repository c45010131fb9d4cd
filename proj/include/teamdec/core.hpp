#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teamdec/common.hpp"

namespace teamdec {

// Scoring scheme for one question: +c1 for a correct team answer, -c2 for an
// incorrect one, and a flat -c3 whenever an agent is consulted.
struct RewardScheme {
  double c1 = 4.0;
  double c2 = 1.0;
  double c3 = 1.0;

  bool valid() const { return c1 > 0.0 && c2 >= 0.0 && c3 >= 0.0; }
};

struct TeamAction {
  enum class Kind { Option, ConsultAgent, NoConsensus };

  Kind kind = Kind::NoConsensus;
  int id = 0;  // option number or agent number, 1-based; unused for NoConsensus

  static TeamAction option(int k) { return {Kind::Option, k}; }
  static TeamAction consult(int j) { return {Kind::ConsultAgent, j}; }
  static TeamAction no_consensus() { return {Kind::NoConsensus, 0}; }

  bool operator==(const TeamAction&) const = default;
};

struct ConsultRecord {
  int agent = 0;                     // 1-based agent id
  int response = 0;                  // agent's option choice, 1-based
  std::optional<int> final_option;   // empty = the second vote failed too
};

// One member response per slot; empty = abstained.
using Responses = std::array<std::optional<int>, 4>;

struct QuestionRecord {
  int index = 0;  // 1-based position in the session
  Responses responses{};
  TeamAction team_action{};
  std::optional<ConsultRecord> consulted;
  int correct_option = 0;
};

struct SurveyRecord {
  int after_question = 0;  // survey taken after this question was scored
  Mat4 influence{};        // row i = how member i weighs members 1..4
  Mat4 agent_ratings{};    // [i][j] = member i's rating of agent j in [0,1]
};

struct SessionLog {
  std::string team_id;
  int n_members = kMembers;
  int n_agents = kAgents;
  std::vector<QuestionRecord> questions;
  std::vector<SurveyRecord> surveys;
  std::optional<Vec4> agent_true_accuracies;  // simulated logs only
};

// A probability distribution over team actions: 8 slots for the first
// decision (options 1..4 then agents 1..4), 4 slots for the second.
struct ActionDistribution {
  std::vector<double> probs;

  bool valid(double tol = 1e-9) const {
    double s = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0)) return false;
      s += p;
    }
    return std::abs(s - 1.0) <= tol;
  }
};

struct Violation {
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

inline bool in_range_1_4(int v) { return v >= 1 && v <= 4; }

inline void check_matrix_rows(const Mat4& m, bool stochastic, const std::string& where,
                              const char* name, ValidationReport& report) {
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    bool nonneg = true;
    bool in_unit = true;
    for (double x : m[i]) {
      s += x;
      nonneg = nonneg && x >= 0.0;
      in_unit = in_unit && x >= 0.0 && x <= 1.0;
    }
    if (stochastic) {
      if (!nonneg || std::abs(s - 1.0) > 1e-9) {
        report.violations.push_back(
            {where, "row " + std::to_string(i + 1) + " of " + name + " not stochastic"});
      }
    } else if (!in_unit) {
      report.violations.push_back(
          {where, "row " + std::to_string(i + 1) + " of " + name + " outside [0,1]"});
    }
  }
}

}  // namespace detail

inline ValidationReport validate_session(const SessionLog& log) {
  ValidationReport report;
  if (log.n_members != kMembers)
    report.violations.push_back({"session", "n_members must be 4"});
  if (log.n_agents != kAgents)
    report.violations.push_back({"session", "n_agents must be 4"});

  int prev_index = 0;
  for (const auto& q : log.questions) {
    std::string where = "question " + std::to_string(q.index);
    if (q.index <= prev_index)
      report.violations.push_back({where, "question indices must be strictly increasing"});
    prev_index = q.index;

    for (int m = 0; m < 4; ++m) {
      if (q.responses[m] && !detail::in_range_1_4(*q.responses[m]))
        report.violations.push_back(
            {where, "member " + std::to_string(m + 1) + " response outside 1..4"});
    }
    if (!detail::in_range_1_4(q.correct_option))
      report.violations.push_back({where, "correct_option outside 1..4"});

    switch (q.team_action.kind) {
      case TeamAction::Kind::Option:
        if (!detail::in_range_1_4(q.team_action.id))
          report.violations.push_back({where, "team option outside 1..4"});
        if (q.consulted)
          report.violations.push_back({where, "consulted record present without a consult"});
        break;
      case TeamAction::Kind::ConsultAgent:
        if (!detail::in_range_1_4(q.team_action.id))
          report.violations.push_back({where, "consulted agent outside 1..4"});
        if (!q.consulted)
          report.violations.push_back({where, "consult action without consulted record"});
        else {
          if (q.consulted->agent != q.team_action.id)
            report.violations.push_back({where, "consulted agent id mismatch"});
          if (!detail::in_range_1_4(q.consulted->response))
            report.violations.push_back({where, "agent response outside 1..4"});
          if (q.consulted->final_option && !detail::in_range_1_4(*q.consulted->final_option))
            report.violations.push_back({where, "final option outside 1..4"});
        }
        break;
      case TeamAction::Kind::NoConsensus:
        if (q.consulted)
          report.violations.push_back({where, "consulted record present without a consult"});
        break;
    }
  }

  int prev_after = 0;
  for (const auto& s : log.surveys) {
    std::string where = "survey " + std::to_string(s.after_question);
    if (s.after_question <= prev_after)
      report.violations.push_back({where, "survey positions must be strictly increasing"});
    prev_after = s.after_question;
    if (s.after_question < 1 ||
        (!log.questions.empty() && s.after_question > log.questions.back().index))
      report.violations.push_back({where, "survey position outside the session"});
    detail::check_matrix_rows(s.influence, /*stochastic=*/true, where, "influence", report);
    detail::check_matrix_rows(s.agent_ratings, /*stochastic=*/false, where, "agent_ratings",
                              report);
  }

  if (log.agent_true_accuracies) {
    for (double a : *log.agent_true_accuracies) {
      if (a < 0.0 || a > 1.0) {
        report.violations.push_back({"session", "agent_true_accuracies outside [0,1]"});
        break;
      }
    }
  }
  return report;
}

inline void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("probability outside [0,1]: " + std::to_string(p));
}

// Expected points for answering with an option the team believes is correct
// with probability p.
inline double reward_for_option(double p_correct, const RewardScheme& scheme = {}) {
  require_probability(p_correct);
  return scheme.c1 * p_correct - scheme.c2 * (1.0 - p_correct);
}

// Expected points for consulting an agent believed correct with probability p;
// the consult fee applies whether or not the agent is right.
inline double reward_for_agent(double p_correct, const RewardScheme& scheme = {}) {
  require_probability(p_correct);
  return (scheme.c1 - scheme.c3) * p_correct - (scheme.c2 + scheme.c3) * (1.0 - p_correct);
}

inline ActionDistribution softmax(const std::vector<double>& values) {
  if (values.empty()) throw std::domain_error("softmax of empty vector");
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (std::isnan(v)) throw std::domain_error("softmax of NaN");
    m = std::max(m, v);
  }
  ActionDistribution out;
  out.probs.resize(values.size());
  double z = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.probs[i] = std::exp(values[i] - m);
    z += out.probs[i];
  }
  for (double& p : out.probs) p /= z;
  return out;
}

}  // namespace teamdec
