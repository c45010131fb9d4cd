#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "teamdec/json_io.hpp"
#include "teamdec/loss.hpp"
#include "teamdec/replay.hpp"
#include "teamdec/rng.hpp"
#include "teamdec/wilcoxon.hpp"

namespace teamdec {

enum class Task { DT1, DT2 };

inline const char* task_name(Task task) { return task == Task::DT1 ? "dt1" : "dt2"; }

inline std::optional<Task> parse_task_name(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "dt1") return Task::DT1;
  if (s == "dt2") return Task::DT2;
  return std::nullopt;
}

struct FitConfig {
  int train_questions = 30;
  double grid_alpha_step = 0.1;
  double grid_gamma_step = 0.1;
  double grid_lambda_step = 1.0;
  double w_step = 0.1;
  int w_train_teams = 20;
  std::uint64_t seed = 0;

  void require_valid() const {
    if (!(grid_alpha_step > 0.0 && grid_gamma_step > 0.0 && grid_lambda_step > 0.0 &&
          w_step > 0.0))
      throw std::domain_error("grid steps must be positive");
    if (train_questions < 1) throw std::domain_error("train_questions must be positive");
  }
};

struct EvalOptions {
  int first_question = 1;
  int last_question = std::numeric_limits<int>::max();
  double cent_w = 0.9;
  std::map<std::string, PTParams> pt_by_team;  // per-team fitted parameters
  PTParams pt_shared = PTParams::identity();   // fallback when a team is absent
  RewardScheme scheme{};
  unsigned max_threads = 0;  // 0 = hardware default
};

struct EvalReport {
  ModelKind model_kind = ModelKind::RANDOM;
  LossKind loss_kind = LossKind::L1;
  Task task = Task::DT1;
  std::map<std::string, double> per_team_losses;
  std::map<std::string, int> per_team_events;
  double mean = 0.0;
  double std_dev = 0.0;
};

namespace detail {

inline ModelParams team_params(const EvalOptions& options, const std::string& team_id) {
  ModelParams params;
  params.cent_w = options.cent_w;
  auto it = options.pt_by_team.find(team_id);
  params.pt = it != options.pt_by_team.end() ? it->second : options.pt_shared;
  return params;
}

inline void finalize_report(EvalReport& report) {
  std::vector<double> losses;
  losses.reserve(report.per_team_losses.size());
  for (const auto& [team, loss] : report.per_team_losses) losses.push_back(loss);
  report.mean = mean_of(losses);
  report.std_dev = sample_std(losses);
}

}  // namespace detail

// Scores one model against every trace, averaging per team over the selected
// question window and then across teams with equal team weights.
inline EvalReport evaluate_traces(const std::vector<TeamTrace>& traces, ModelKind model,
                                  LossKind loss, Task task, const EvalOptions& options = {}) {
  EvalReport report;
  report.model_kind = model;
  report.loss_kind = loss;
  report.task = task;

  std::vector<std::pair<std::string, std::pair<double, int>>> slots(traces.size());
  parallel_for_index(
      traces.size(),
      [&](std::size_t t) {
        const TeamTrace& trace = traces[t];
        ModelParams params = detail::team_params(options, trace.team_id);
        double total = 0.0;
        int count = 0;
        if (task == Task::DT1) {
          for (const Dt1Event& e : trace.dt1) {
            if (e.question_index < options.first_question ||
                e.question_index > options.last_question)
              continue;
            auto dist = dt1_event_distribution(model, e, params, options.scheme);
            total += action_loss(loss, dist.probs, e.observed);
            ++count;
          }
        } else {
          for (const Dt2Event& e : trace.dt2) {
            if (e.question_index < options.first_question ||
                e.question_index > options.last_question)
              continue;
            auto dist = dt2_event_distribution(model, e, params, options.scheme);
            total += action_loss(loss, dist.probs, e.observed);
            ++count;
          }
        }
        slots[t] = {trace.team_id, {count > 0 ? total / count : 0.0, count}};
      },
      options.max_threads);

  for (auto& [team_id, entry] : slots) {
    if (entry.second == 0) continue;  // nothing scored in the window
    report.per_team_losses[team_id] = entry.first;
    report.per_team_events[team_id] = entry.second;
  }
  detail::finalize_report(report);
  return report;
}

inline std::vector<TeamTrace> build_traces(const std::vector<SessionLog>& logs,
                                           const RewardScheme& scheme = {}) {
  std::vector<TeamTrace> traces;
  traces.reserve(logs.size());
  for (const auto& log : logs) traces.push_back(build_team_trace(log, scheme));
  return traces;
}

inline EvalReport evaluate(const std::vector<SessionLog>& logs, ModelKind model, LossKind loss,
                           Task task, const EvalOptions& options = {}) {
  return evaluate_traces(build_traces(logs, options.scheme), model, loss, task, options);
}

// --- Prospect-theory grid fit ---------------------------------------------------

namespace detail {

struct PtGrid {
  std::vector<double> alphas;
  std::vector<double> gammas;
  std::vector<double> lambdas;
};

inline PtGrid make_pt_grid(const FitConfig& config) {
  PtGrid grid;
  for (double a = 0.0; a <= 1.0 + 1e-9; a += config.grid_alpha_step)
    grid.alphas.push_back(std::min(a, 1.0));
  for (double g = 0.0; g <= 1.0 + 1e-9; g += config.grid_gamma_step)
    grid.gammas.push_back(g < 1e-12 ? 0.01 : std::min(g, 1.0));  // 0 is degenerate
  for (double l = 0.0; l <= 10.0 + 1e-9; l += config.grid_lambda_step)
    grid.lambdas.push_back(std::min(l, 10.0));
  return grid;
}

// Cached per-event slot probabilities and per-gamma distortion tables.
struct PtFitEvent {
  double p[8];
  std::size_t observed;
  // weight_gain[gi][s], weight_loss[gi][s] for gamma index gi
  std::vector<std::array<double, 8>> weight_gain;
  std::vector<std::array<double, 8>> weight_loss;
};

inline PTParams fit_pt_single_team(const std::vector<Dt1Event>& events, bool cent,
                                   LossKind loss_kind, const PtGrid& grid,
                                   const RewardScheme& scheme) {
  if (events.empty()) throw std::domain_error("empty training set for grid fit");

  std::vector<PtFitEvent> cache;
  cache.reserve(events.size());
  for (const Dt1Event& e : events) {
    PtFitEvent fe;
    const Vec4& post = cent ? e.cent_option_post : e.nb_option_post;
    const Vec4& agents = cent ? e.cent_agent_success : e.nb_agent_success;
    for (int k = 0; k < 4; ++k) fe.p[k] = post[k];
    for (int j = 0; j < 4; ++j) fe.p[4 + j] = agents[j];
    fe.observed = e.observed;
    fe.weight_gain.resize(grid.gammas.size());
    fe.weight_loss.resize(grid.gammas.size());
    for (std::size_t gi = 0; gi < grid.gammas.size(); ++gi)
      for (int s = 0; s < 8; ++s) {
        fe.weight_gain[gi][s] = weight(fe.p[s], grid.gammas[gi]);
        fe.weight_loss[gi][s] = weight(1.0 - fe.p[s], grid.gammas[gi]);
      }
    cache.push_back(std::move(fe));
  }

  double best_loss = std::numeric_limits<double>::infinity();
  PTParams best;
  const double n_events = static_cast<double>(cache.size());
  for (double alpha : grid.alphas) {
    // Gains/loss magnitudes per slot family, already exponentiated.
    const double gain_pow[2] = {std::pow(scheme.c1, alpha), std::pow(scheme.c1 - scheme.c3, alpha)};
    const double loss_pow[2] = {std::pow(scheme.c2, alpha),
                                std::pow(scheme.c2 + scheme.c3, alpha)};
    for (std::size_t gp = 0; gp < grid.gammas.size(); ++gp)
      for (std::size_t gm = 0; gm < grid.gammas.size(); ++gm)
        for (double lambda : grid.lambdas) {
          double total = 0.0;
          for (const PtFitEvent& fe : cache) {
            double values[8];
            for (int s = 0; s < 8; ++s) {
              int fam = s < 4 ? 0 : 1;
              values[s] = gain_pow[fam] * fe.weight_gain[gp][s] -
                          lambda * loss_pow[fam] * fe.weight_loss[gm][s];
            }
            double vmax = values[0];
            for (int s = 1; s < 8; ++s) vmax = std::max(vmax, values[s]);
            double probs[8];
            double z = 0.0;
            for (int s = 0; s < 8; ++s) {
              probs[s] = std::exp(values[s] - vmax);
              z += probs[s];
            }
            for (int s = 0; s < 8; ++s) probs[s] /= z;
            total += action_loss_span(loss_kind, probs, 8, fe.observed);
          }
          if (total / n_events < best_loss - 1e-12) {
            best_loss = total / n_events;
            best = PTParams{alpha, alpha, lambda, grid.gammas[gp], grid.gammas[gm]};
          }
        }
  }
  return best;
}

}  // namespace detail

// Per-team exhaustive grid search over (alpha=beta, gamma+, gamma-, lambda),
// minimizing mean training loss over the first train_questions questions.
// Ties keep the lexicographically smallest parameters (the loop order).
inline std::map<std::string, PTParams> fit_pt(const std::vector<SessionLog>& logs,
                                              ModelKind model_kind, LossKind loss_kind,
                                              const FitConfig& config,
                                              const RewardScheme& scheme = {},
                                              unsigned max_threads = 0) {
  config.require_valid();
  bool cent;
  if (model_kind == ModelKind::NB || model_kind == ModelKind::PT_NB)
    cent = false;
  else if (model_kind == ModelKind::CENT || model_kind == ModelKind::PT_CENT)
    cent = true;
  else
    throw std::domain_error("grid fit applies to the NB/CENT families");

  for (const SessionLog& log : logs)
    if (!log.questions.empty() && log.questions.back().index <= config.train_questions)
      throw std::domain_error("train_questions must leave held-out questions for team " +
                              log.team_id);

  detail::PtGrid grid = detail::make_pt_grid(config);
  std::vector<TeamTrace> traces = build_traces(logs, scheme);
  std::vector<std::pair<std::string, PTParams>> slots(traces.size());
  parallel_for_index(
      traces.size(),
      [&](std::size_t t) {
        std::vector<Dt1Event> train;
        for (const Dt1Event& e : traces[t].dt1)
          if (e.question_index <= config.train_questions) train.push_back(e);
        slots[t] = {traces[t].team_id,
                    detail::fit_pt_single_team(train, cent, loss_kind, grid, scheme)};
      },
      max_threads);

  std::map<std::string, PTParams> fitted;
  for (auto& [team_id, params] : slots) fitted[team_id] = params;
  return fitted;
}

// Grid search for the agent-trust weight of the centrality model's second
// stage, pooled over every consult event in the given (training) teams.
inline double fit_w(const std::vector<SessionLog>& logs, LossKind loss_kind,
                    const FitConfig& config = {}, const RewardScheme& scheme = {}) {
  config.require_valid();
  std::vector<TeamTrace> traces = build_traces(logs, scheme);
  std::vector<const Dt2Event*> events;
  for (const auto& trace : traces)
    for (const Dt2Event& e : trace.dt2) events.push_back(&e);
  if (events.empty()) throw std::domain_error("no consult events to fit the trust weight");

  double best_w = 0.0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (double w = 0.0; w <= 1.0 + 1e-9; w += config.w_step) {
    w = std::min(w, 1.0);
    double total = 0.0;
    for (const Dt2Event* e : events) {
      auto dist = dt2_distribution(cent_dt2_from_event(*e, w), scheme);
      total += action_loss(loss_kind, dist.probs, e->observed);
    }
    if (total / static_cast<double>(events.size()) < best_loss - 1e-12) {
      best_loss = total / static_cast<double>(events.size());
      best_w = w;
    }
  }
  return best_w;
}

// Seeded split of teams into a training prefix and held-out remainder.
inline std::pair<std::vector<SessionLog>, std::vector<SessionLog>> split_teams(
    const std::vector<SessionLog>& logs, int n_train, std::uint64_t seed) {
  std::vector<std::size_t> idx(logs.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  Rng rng(seed, 0x7ea5, 0, 0);
  for (std::size_t k = idx.size(); k > 1; --k)
    std::swap(idx[k - 1], idx[rng.next_below(static_cast<std::uint32_t>(k))]);
  std::pair<std::vector<SessionLog>, std::vector<SessionLog>> out;
  for (std::size_t k = 0; k < idx.size(); ++k)
    (static_cast<int>(k) < n_train ? out.first : out.second).push_back(logs[idx[k]]);
  return out;
}

// --- Summaries and emitters ----------------------------------------------------

struct SummaryRow {
  std::string model;
  double mean = 0.0;
  double std_dev = 0.0;
  int n_teams = 0;
};

struct Summary {
  LossKind loss_kind = LossKind::L1;
  Task task = Task::DT1;
  std::vector<SummaryRow> rows;                // in the caller's model order
  std::vector<std::vector<double>> p_matrix;   // pairwise Wilcoxon, diag 1.0
};

// Mean/std table plus the pairwise signed-rank matrix over shared teams.
inline Summary summarize(const std::vector<EvalReport>& reports,
                         Alternative alternative = Alternative::TwoSided) {
  Summary summary;
  if (reports.empty()) return summary;
  summary.loss_kind = reports.front().loss_kind;
  summary.task = reports.front().task;
  for (const auto& r : reports)
    if (r.loss_kind != summary.loss_kind || r.task != summary.task)
      throw std::domain_error("summary requires a shared loss and task");

  for (const auto& r : reports) {
    summary.rows.push_back({model_name(r.model_kind), r.mean, r.std_dev,
                            static_cast<int>(r.per_team_losses.size())});
  }

  summary.p_matrix.assign(reports.size(), std::vector<double>(reports.size(), 1.0));
  for (std::size_t a = 0; a < reports.size(); ++a)
    for (std::size_t b = a + 1; b < reports.size(); ++b) {
      std::vector<double> xs, ys;
      for (const auto& [team, loss] : reports[a].per_team_losses) {
        auto it = reports[b].per_team_losses.find(team);
        if (it == reports[b].per_team_losses.end()) continue;
        xs.push_back(loss);
        ys.push_back(it->second);
      }
      double p = 1.0;
      if (xs.size() >= 5) p = wilcoxon_signed_rank(xs, ys, alternative).p_value;
      summary.p_matrix[a][b] = summary.p_matrix[b][a] = p;
    }
  return summary;
}

namespace detail {

// RFC 4180: CRLF records, quotes only where needed.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

inline std::string report_to_csv(const EvalReport& report) {
  std::string out = "team_id,mean_loss,n_events\r\n";
  for (const auto& [team, loss] : report.per_team_losses) {
    out += detail::csv_field(team) + "," + detail::fmt_double(loss) + "," +
           std::to_string(report.per_team_events.at(team)) + "\r\n";
  }
  return out;
}

inline json report_to_json(const EvalReport& report) {
  json teams = json::object();
  for (const auto& [team, loss] : report.per_team_losses)
    teams[team] = json{{"mean_loss", loss}, {"n_events", report.per_team_events.at(team)}};
  return json{{"model", model_name(report.model_kind)},
              {"loss", loss_name(report.loss_kind)},
              {"task", task_name(report.task)},
              {"mean", report.mean},
              {"std", report.std_dev},
              {"per_team", std::move(teams)}};
}

inline std::string summary_to_csv(const Summary& summary) {
  std::string out = "model,mean,std,n_teams\r\n";
  for (const auto& row : summary.rows)
    out += detail::csv_field(row.model) + "," + detail::fmt_double(row.mean) + "," +
           detail::fmt_double(row.std_dev) + "," + std::to_string(row.n_teams) + "\r\n";
  return out;
}

inline std::string p_matrix_to_csv(const Summary& summary) {
  std::string out = "model";
  for (const auto& row : summary.rows) out += "," + detail::csv_field(row.model);
  out += "\r\n";
  for (std::size_t a = 0; a < summary.rows.size(); ++a) {
    out += detail::csv_field(summary.rows[a].model);
    for (std::size_t b = 0; b < summary.rows.size(); ++b)
      out += "," + detail::fmt_double(summary.p_matrix[a][b]);
    out += "\r\n";
  }
  return out;
}

inline json summary_to_json(const Summary& summary) {
  json rows = json::array();
  for (const auto& row : summary.rows)
    rows.push_back(json{{"model", row.model},
                        {"mean", row.mean},
                        {"std", row.std_dev},
                        {"n_teams", row.n_teams}});
  json matrix = json::array();
  for (const auto& r : summary.p_matrix) matrix.push_back(r);
  return json{{"loss", loss_name(summary.loss_kind)},
              {"task", task_name(summary.task)},
              {"models", std::move(rows)},
              {"wilcoxon_p", std::move(matrix)}};
}

// Plot-ready data: cumulative mean loss (averaged across teams per question,
// summed over questions) for each model, one row per question index. Options
// are per model so differently fitted parameter sets can share a plot.
inline std::string cumulative_loss_csv(const std::vector<TeamTrace>& traces,
                                       const std::vector<ModelKind>& models, LossKind loss,
                                       Task task,
                                       const std::vector<EvalOptions>& options_per_model) {
  if (options_per_model.size() != models.size())
    throw std::domain_error("one options block per model is required");
  int max_q = 0;
  for (const auto& t : traces) max_q = std::max(max_q, t.n_questions);
  int first = 1, last = max_q;
  for (const auto& o : options_per_model) {
    first = std::max(first, o.first_question);
    last = std::min(last, o.last_question);
  }

  std::string out = "question";
  for (ModelKind m : models) out += "," + detail::csv_field(model_name(m));
  out += "\r\n";

  std::vector<double> cumulative(models.size(), 0.0);
  for (int q = first; q <= last; ++q) {
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      const EvalOptions& options = options_per_model[mi];
      double total = 0.0;
      int count = 0;
      for (const auto& trace : traces) {
        ModelParams params = detail::team_params(options, trace.team_id);
        if (task == Task::DT1) {
          for (const Dt1Event& e : trace.dt1) {
            if (e.question_index != q) continue;
            auto dist = dt1_event_distribution(models[mi], e, params, options.scheme);
            total += action_loss(loss, dist.probs, e.observed);
            ++count;
          }
        } else {
          for (const Dt2Event& e : trace.dt2) {
            if (e.question_index != q) continue;
            auto dist = dt2_event_distribution(models[mi], e, params, options.scheme);
            total += action_loss(loss, dist.probs, e.observed);
            ++count;
          }
        }
      }
      if (count > 0) cumulative[mi] += total / count;
    }
    out += std::to_string(q);
    for (double c : cumulative) out += "," + detail::fmt_double(c);
    out += "\r\n";
  }
  return out;
}

inline std::string cumulative_loss_csv(const std::vector<TeamTrace>& traces,
                                       const std::vector<ModelKind>& models, LossKind loss,
                                       Task task, const EvalOptions& options = {}) {
  return cumulative_loss_csv(traces, models, loss, task,
                             std::vector<EvalOptions>(models.size(), options));
}

}  // namespace teamdec
