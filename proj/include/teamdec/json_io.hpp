#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "teamdec/core.hpp"
#include "teamdec/prospect.hpp"

namespace teamdec {

using json = nlohmann::ordered_json;

// --- serialization ------------------------------------------------------------

inline json to_json(const TeamAction& action) {
  switch (action.kind) {
    case TeamAction::Kind::Option: return json{{"kind", "option"}, {"id", action.id}};
    case TeamAction::Kind::ConsultAgent: return json{{"kind", "consult_agent"}, {"id", action.id}};
    case TeamAction::Kind::NoConsensus: return json{{"kind", "no_consensus"}};
  }
  throw std::domain_error("unknown team action");
}

inline json to_json(const QuestionRecord& q) {
  json responses = json::array();
  for (const auto& r : q.responses)
    responses.push_back(r ? json(*r) : json(nullptr));
  json out{{"index", q.index},
           {"responses", std::move(responses)},
           {"team_action", to_json(q.team_action)}};
  if (q.consulted) {
    out["consulted"] = json{{"agent", q.consulted->agent},
                            {"response", q.consulted->response},
                            {"final_option", q.consulted->final_option
                                                 ? json(*q.consulted->final_option)
                                                 : json(nullptr)}};
  }
  out["correct_option"] = q.correct_option;
  return out;
}

inline json to_json(const Mat4& m) {
  json rows = json::array();
  for (const auto& row : m) rows.push_back(row);
  return rows;
}

inline json to_json(const SurveyRecord& s) {
  return json{{"after_question", s.after_question},
              {"influence", to_json(s.influence)},
              {"agent_ratings", to_json(s.agent_ratings)}};
}

inline json to_json(const SessionLog& log) {
  json questions = json::array();
  for (const auto& q : log.questions) questions.push_back(to_json(q));
  json surveys = json::array();
  for (const auto& s : log.surveys) surveys.push_back(to_json(s));
  json out{{"team_id", log.team_id},
           {"n_members", log.n_members},
           {"n_agents", log.n_agents},
           {"questions", std::move(questions)},
           {"surveys", std::move(surveys)}};
  if (log.agent_true_accuracies) out["agent_true_accuracies"] = *log.agent_true_accuracies;
  return out;
}

inline json to_json(const ValidationReport& report) {
  json out = json::array();
  for (const auto& v : report.violations)
    out.push_back(json{{"where", v.where}, {"message", v.message}});
  return out;
}

inline json to_json(const PTParams& params) {
  return json{{"alpha", params.alpha},
              {"beta", params.beta},
              {"lambda", params.loss_aversion},
              {"gamma_plus", params.gamma_gain},
              {"gamma_minus", params.gamma_loss}};
}

// --- parsing ------------------------------------------------------------------

inline TeamAction team_action_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "option") return TeamAction::option(j.at("id").get<int>());
  if (kind == "consult_agent") return TeamAction::consult(j.at("id").get<int>());
  if (kind == "no_consensus") return TeamAction::no_consensus();
  throw std::invalid_argument("unknown team_action kind: " + kind);
}

inline Mat4 mat4_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("expected a 4x4 matrix");
  Mat4 m{};
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 4) throw std::invalid_argument("expected 4 columns");
    for (int k = 0; k < 4; ++k) m[i][k] = j[i][k].get<double>();
  }
  return m;
}

// Survey rows arrive on whatever scale the instrument used (often percent);
// any positive row is rescaled to sum 1 and an all-zero row becomes uniform.
inline Mat4 normalize_influence_rows(Mat4 m) {
  for (auto& row : m) {
    double s = row[0] + row[1] + row[2] + row[3];
    if (s > 0.0)
      for (double& x : row) x /= s;
    else
      row = {0.25, 0.25, 0.25, 0.25};
  }
  return m;
}

inline SurveyRecord survey_from_json(const json& j) {
  SurveyRecord s;
  s.after_question = j.at("after_question").get<int>();
  s.influence = normalize_influence_rows(mat4_from_json(j.at("influence")));
  s.agent_ratings = mat4_from_json(j.at("agent_ratings"));
  return s;
}

inline QuestionRecord question_from_json(const json& j) {
  QuestionRecord q;
  q.index = j.at("index").get<int>();
  const json& responses = j.at("responses");
  if (!responses.is_array() || responses.size() != 4)
    throw std::invalid_argument("expected 4 member responses");
  for (int m = 0; m < 4; ++m)
    if (!responses[m].is_null()) q.responses[m] = responses[m].get<int>();
  q.team_action = team_action_from_json(j.at("team_action"));
  if (j.contains("consulted") && !j.at("consulted").is_null()) {
    const json& c = j.at("consulted");
    ConsultRecord rec;
    rec.agent = c.at("agent").get<int>();
    rec.response = c.at("response").get<int>();
    if (c.contains("final_option") && !c.at("final_option").is_null())
      rec.final_option = c.at("final_option").get<int>();
    q.consulted = rec;
  }
  q.correct_option = j.at("correct_option").get<int>();
  return q;
}

inline SessionLog session_from_json(const json& j) {
  SessionLog log;
  log.team_id = j.at("team_id").get<std::string>();
  log.n_members = j.at("n_members").get<int>();
  log.n_agents = j.at("n_agents").get<int>();
  for (const auto& q : j.at("questions")) log.questions.push_back(question_from_json(q));
  for (const auto& s : j.at("surveys")) log.surveys.push_back(survey_from_json(s));
  if (j.contains("agent_true_accuracies") && !j.at("agent_true_accuracies").is_null()) {
    Vec4 acc{};
    const json& a = j.at("agent_true_accuracies");
    if (!a.is_array() || a.size() != 4) throw std::invalid_argument("expected 4 agent accuracies");
    for (int k = 0; k < 4; ++k) acc[k] = a[k].get<double>();
    log.agent_true_accuracies = acc;
  }
  return log;
}

inline PTParams pt_params_from_json(const json& j) {
  PTParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.loss_aversion = j.at("lambda").get<double>();
  p.gamma_gain = j.at("gamma_plus").get<double>();
  p.gamma_loss = j.at("gamma_minus").get<double>();
  return p;
}

// --- file helpers ---------------------------------------------------------------

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

// Write via temp file + rename so readers never observe a partial file.
inline void write_file_atomic(const std::string& path, const std::string& contents) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
    if (!out.good()) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

inline void write_json_atomic(const std::string& path, const json& j, int indent = 2) {
  write_file_atomic(path, j.dump(indent) + "\n");
}

}  // namespace teamdec
