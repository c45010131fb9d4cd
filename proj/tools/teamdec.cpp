// Command-line front end: simulate sessions, fit parameters, evaluate models,
// and run the built-in fixture checks.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teamdec/fit_eval.hpp"
#include "teamdec/json_io.hpp"
#include "teamdec/selftest.hpp"
#include "teamdec/sim.hpp"

namespace fs = std::filesystem;
using namespace teamdec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSelftest = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string iso_utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json make_manifest(const std::string& command, const json& config, std::uint64_t seed,
                   const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                   const std::string& started_at) {
  return json{{"command", command},       {"version", kVersion},
              {"seed", seed},             {"config_hash", config_hash(config)},
              {"inputs", inputs},         {"outputs", outputs},
              {"started_at", started_at}, {"finished_at", iso_utc_now()}};
}

void write_json_or_die(const std::string& path, const json& j) {
  try {
    write_json_atomic(path, j);
  } catch (const std::exception& e) {
    throw IoError(std::string("cannot write ") + path + ": " + e.what());
  }
}

void write_text_or_die(const std::string& path, const std::string& text) {
  try {
    write_file_atomic(path, text);
  } catch (const std::exception& e) {
    throw IoError(std::string("cannot write ") + path + ": " + e.what());
  }
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
}

json load_json_or_usage(const std::string& path, const char* what) {
  try {
    return load_json_file(path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot load ") + what + " '" + path + "': " + e.what());
  }
}

RewardScheme parse_scheme(const std::vector<double>& values) {
  if (values.empty()) return RewardScheme{};
  if (values.size() != 3) throw UsageError("--scheme expects three values: c1,c2,c3");
  RewardScheme scheme{values[0], values[1], values[2]};
  if (!scheme.valid()) throw UsageError("--scheme values must be positive");
  return scheme;
}

LossKind parse_loss_or_usage(const std::string& name) {
  auto loss = parse_loss_name(name);
  if (!loss) throw UsageError("unknown loss '" + name + "' (valid: l1, l2, binary)");
  return *loss;
}

std::vector<SessionLog> load_logs(const std::string& dir) {
  if (!fs::is_directory(dir)) throw UsageError("log directory '" + dir + "' does not exist");
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == ".json" && name != "manifest.json" &&
        name.find("manifest") == std::string::npos)
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw UsageError("no session files found in " + dir);

  std::vector<SessionLog> logs;
  for (const auto& path : paths) {
    SessionLog log;
    try {
      log = session_from_json(load_json_file(path));
    } catch (const std::exception& e) {
      throw UsageError("cannot parse session '" + path + "': " + e.what());
    }
    ValidationReport report = validate_session(log);
    if (!report.ok())
      throw UsageError("invalid session '" + path + "': " + report.violations.front().message);
    logs.push_back(std::move(log));
  }
  std::sort(logs.begin(), logs.end(),
            [](const SessionLog& a, const SessionLog& b) { return a.team_id < b.team_id; });
  return logs;
}

std::vector<ModelKind> parse_model_list(const std::string& csv) {
  std::vector<ModelKind> models;
  std::string token;
  std::istringstream stream(csv);
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    auto kind = parse_model_name(token);
    if (!kind)
      throw UsageError("unknown model '" + token +
                       "' (valid: nb, cent, pt-nb, pt-cent, nb-h, nb-a, cent-h, cent-a, random)");
    models.push_back(*kind);
  }
  if (models.empty()) throw UsageError("--models needs at least one model name");
  return models;
}

// --- simulate -----------------------------------------------------------------

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::optional<std::uint64_t>& seed_override,
                 const std::vector<double>& scheme_values) {
  const std::string started_at = iso_utc_now();
  SimConfig config;
  try {
    config = sim_config_from_json(load_json_or_usage(config_path, "simulation config"));
    if (seed_override) config.seed = *seed_override;
    if (!scheme_values.empty()) config.scheme = parse_scheme(scheme_values);
    config.require_valid();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad simulation config: ") + e.what());
  }

  SimResult result = generate(config);
  ensure_out_dir(out_dir);

  std::vector<std::string> outputs;
  json team_stats = json::array();
  for (std::size_t t = 0; t < result.logs.size(); ++t) {
    const SessionLog& log = result.logs[t];
    std::string path = (fs::path(out_dir) / (log.team_id + ".json")).string();
    write_json_or_die(path, to_json(log));
    outputs.push_back(path);

    int consults = 0, correct = 0;
    for (const QuestionRecord& q : log.questions) {
      if (q.consulted) ++consults;
      bool right = q.team_action.kind == TeamAction::Kind::Option
                       ? q.team_action.id == q.correct_option
                       : q.consulted && q.consulted->final_option &&
                             *q.consulted->final_option == q.correct_option;
      if (right) ++correct;
    }
    team_stats.push_back(json{{"team_id", log.team_id},
                              {"questions", log.questions.size()},
                              {"consults", consults},
                              {"correct", correct},
                              {"realized_score", result.incremental_scores[t]}});
  }

  json manifest = make_manifest("simulate", sim_config_to_json(config), config.seed,
                                {config_path}, outputs, started_at);
  manifest["teams"] = std::move(team_stats);
  write_json_or_die((fs::path(out_dir) / "manifest.json").string(), manifest);
  std::cout << "wrote " << result.logs.size() << " session files to " << out_dir << "\n";
  return kExitOk;
}

// --- fit ----------------------------------------------------------------------

int cmd_fit(const std::string& logs_dir, const std::string& model_name_raw,
            const std::string& loss_name_raw, const std::string& out_file, int train_questions,
            std::uint64_t seed, int w_train_teams, const std::vector<double>& scheme_values) {
  const std::string started_at = iso_utc_now();
  LossKind loss = parse_loss_or_usage(loss_name_raw);
  RewardScheme scheme = parse_scheme(scheme_values);
  std::vector<SessionLog> logs = load_logs(logs_dir);

  FitConfig config;
  config.train_questions = train_questions;
  config.seed = seed;
  config.w_train_teams = w_train_teams;
  try {
    config.require_valid();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }

  std::string lowered = model_name_raw;
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  json out;
  if (lowered == "cent-w") {
    int n_train = std::min<int>(config.w_train_teams, static_cast<int>(logs.size()));
    auto [train, rest] = split_teams(logs, n_train, config.seed);
    double w;
    try {
      w = fit_w(train, loss, config, scheme);
    } catch (const std::exception& e) {
      throw UsageError(std::string("cannot fit trust weight: ") + e.what());
    }
    json team_ids = json::array();
    for (const auto& log : train) team_ids.push_back(log.team_id);
    out = json{{"model", "cent-w"}, {"loss", loss_name(loss)}, {"w", w},
               {"train_teams", std::move(team_ids)}};
  } else {
    auto kind = parse_model_name(model_name_raw);
    if (!kind || (*kind != ModelKind::PT_NB && *kind != ModelKind::PT_CENT))
      throw UsageError("unknown fit model '" + model_name_raw +
                       "' (valid: pt-nb, pt-cent, cent-w)");
    std::map<std::string, PTParams> fitted;
    try {
      fitted = fit_pt(logs, *kind, loss, config, scheme);
    } catch (const std::exception& e) {
      throw UsageError(std::string("cannot fit parameters: ") + e.what());
    }
    json params = json::object();
    for (const auto& [team, pt] : fitted) params[team] = to_json(pt);
    out = json{{"model", model_name(*kind)},
               {"loss", loss_name(loss)},
               {"train_questions", config.train_questions},
               {"params", std::move(params)}};
  }

  if (out_file.find('/') != std::string::npos)
    ensure_out_dir(fs::path(out_file).parent_path().string());
  write_json_or_die(out_file, out);
  json manifest = make_manifest("fit", out, config.seed, {logs_dir}, {out_file}, started_at);
  write_json_or_die(out_file + ".manifest.json", manifest);
  std::cout << "wrote " << out_file << "\n";
  return kExitOk;
}

// --- evaluate -------------------------------------------------------------------

int cmd_evaluate(const std::string& logs_dir, const std::string& models_csv,
                 const std::string& loss_name_raw, const std::string& task_name_raw,
                 const std::vector<std::string>& params_paths, std::optional<double> w_override,
                 int train_questions, const std::string& split, const std::string& alternative_raw,
                 const std::string& out_dir, const std::vector<double>& scheme_values,
                 std::uint64_t seed) {
  const std::string started_at = iso_utc_now();
  std::vector<ModelKind> models = parse_model_list(models_csv);
  LossKind loss = parse_loss_or_usage(loss_name_raw);
  auto task = parse_task_name(task_name_raw);
  if (!task) throw UsageError("unknown task '" + task_name_raw + "' (valid: dt1, dt2)");
  RewardScheme scheme = parse_scheme(scheme_values);

  Alternative alternative = Alternative::TwoSided;
  if (alternative_raw == "less")
    alternative = Alternative::Less;
  else if (alternative_raw == "greater")
    alternative = Alternative::Greater;
  else if (alternative_raw != "two-sided")
    throw UsageError("unknown alternative '" + alternative_raw +
                     "' (valid: two-sided, less, greater)");

  // Fitted-parameter files: each one names the model it belongs to.
  std::map<ModelKind, std::map<std::string, PTParams>> fitted;
  std::optional<double> fitted_w;
  for (const auto& path : params_paths) {
    json j = load_json_or_usage(path, "params file");
    std::string for_model = j.value("model", "");
    if (j.contains("w")) {
      fitted_w = j.at("w").get<double>();
    }
    if (j.contains("params")) {
      auto kind = parse_model_name(for_model);
      if (!kind) throw UsageError("params file '" + path + "' names unknown model '" + for_model + "'");
      std::map<std::string, PTParams> by_team;
      for (const auto& [team, pj] : j.at("params").items())
        by_team[team] = pt_params_from_json(pj);
      fitted[*kind] = std::move(by_team);
    }
  }

  EvalOptions base_options;
  base_options.scheme = scheme;
  if (w_override) {
    if (!(*w_override >= 0.0 && *w_override <= 1.0))
      throw UsageError("--w must lie in [0, 1]");
    base_options.cent_w = *w_override;
  } else if (fitted_w) {
    base_options.cent_w = *fitted_w;
  }

  if (split == "train") {
    base_options.first_question = 1;
    base_options.last_question = train_questions;
  } else if (split == "test") {
    base_options.first_question = train_questions + 1;
  } else if (split != "all") {
    throw UsageError("unknown split '" + split + "' (valid: train, test, all)");
  }

  std::vector<SessionLog> logs = load_logs(logs_dir);
  std::vector<TeamTrace> traces = build_traces(logs, scheme);

  std::vector<EvalReport> reports;
  std::vector<EvalOptions> options_per_model;
  for (ModelKind model : models) {
    EvalOptions options = base_options;
    if (model == ModelKind::PT_NB || model == ModelKind::PT_CENT) {
      auto it = fitted.find(model);
      if (it == fitted.end())
        throw UsageError(std::string("model ") + model_name(model) +
                         " needs fitted parameters (--params file from 'fit')");
      options.pt_by_team = it->second;
    }
    reports.push_back(evaluate_traces(traces, model, loss, *task, options));
    options_per_model.push_back(std::move(options));
  }
  Summary summary = summarize(reports, alternative);

  ensure_out_dir(out_dir);
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& text) {
    std::string path = (fs::path(out_dir) / name).string();
    write_text_or_die(path, text);
    outputs.push_back(path);
  };

  std::string per_team = "model,team_id,mean_loss,n_events\r\n";
  for (const auto& report : reports)
    for (const auto& [team, team_loss] : report.per_team_losses)
      per_team += std::string(model_name(report.model_kind)) + "," + team + "," +
                  teamdec::detail::fmt_double(team_loss) + "," +
                  std::to_string(report.per_team_events.at(team)) + "\r\n";
  emit("per_team.csv", per_team);
  emit("summary.csv", summary_to_csv(summary));
  emit("wilcoxon.csv", p_matrix_to_csv(summary));
  emit("cumulative_loss.csv",
       cumulative_loss_csv(traces, models, loss, *task, options_per_model));

  json summary_json = summary_to_json(summary);
  json report_list = json::array();
  for (const auto& report : reports) report_list.push_back(report_to_json(report));
  summary_json["reports"] = std::move(report_list);
  {
    std::string path = (fs::path(out_dir) / "summary.json").string();
    write_json_or_die(path, summary_json);
    outputs.push_back(path);
  }

  json settings{{"models", models_csv}, {"loss", loss_name(loss)},   {"task", task_name(*task)},
                {"split", split},       {"train_questions", train_questions},
                {"cent_w", base_options.cent_w}};
  json manifest = make_manifest("evaluate", settings, seed, {logs_dir}, outputs, started_at);
  write_json_or_die((fs::path(out_dir) / "manifest.json").string(), manifest);

  for (const auto& row : summary.rows)
    std::cout << row.model << ": " << row.mean << " +/- " << row.std_dev << " (" << row.n_teams
              << " teams)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human-AI team decision models: simulate, fit, evaluate"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate synthetic session logs");
  std::string sim_config_path, sim_out_dir;
  std::optional<std::uint64_t> sim_seed;
  std::vector<double> sim_scheme;
  sim->add_option("--config", sim_config_path, "Simulation config JSON")->required();
  sim->add_option("--out", sim_out_dir, "Output directory")->required();
  sim->add_option("--seed", sim_seed, "Override the config seed");
  sim->add_option("--scheme", sim_scheme, "Reward constants c1,c2,c3")->delimiter(',');

  // fit
  auto* fit = app.add_subcommand("fit", "Fit model parameters from session logs");
  std::string fit_logs, fit_model, fit_loss = "l1", fit_out;
  int fit_train_questions = 30, fit_w_teams = 20;
  std::uint64_t fit_seed = 0;
  std::vector<double> fit_scheme;
  fit->add_option("--logs", fit_logs, "Directory of session JSON files")->required();
  fit->add_option("--model", fit_model, "pt-nb | pt-cent | cent-w")->required();
  fit->add_option("--loss", fit_loss, "l1 | l2 | binary");
  fit->add_option("--out", fit_out, "Output params JSON")->required();
  fit->add_option("--train-questions", fit_train_questions, "Training window size");
  fit->add_option("--seed", fit_seed, "Seed for the team split (cent-w)");
  fit->add_option("--w-train-teams", fit_w_teams, "Teams in the trust-weight training split");
  fit->add_option("--scheme", fit_scheme, "Reward constants c1,c2,c3")->delimiter(',');

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score models against session logs");
  std::string ev_logs, ev_models, ev_loss = "l1", ev_task = "dt1", ev_out;
  std::string ev_split = "test", ev_alternative = "two-sided";
  std::vector<std::string> ev_params;
  std::optional<double> ev_w;
  int ev_train_questions = 30;
  std::uint64_t ev_seed = 0;
  std::vector<double> ev_scheme;
  ev->add_option("--logs", ev_logs, "Directory of session JSON files")->required();
  ev->add_option("--models", ev_models, "Comma-separated model list")->required();
  ev->add_option("--loss", ev_loss, "l1 | l2 | binary");
  ev->add_option("--task", ev_task, "dt1 | dt2");
  ev->add_option("--out", ev_out, "Output directory")->required();
  ev->add_option("--params", ev_params, "Fitted params JSON (repeatable)");
  ev->add_option("--w", ev_w, "Trust weight for the centrality second stage");
  ev->add_option("--train-questions", ev_train_questions, "Boundary for --split");
  ev->add_option("--split", ev_split, "train | test | all");
  ev->add_option("--alternative", ev_alternative, "Wilcoxon sidedness");
  ev->add_option("--seed", ev_seed, "Recorded in the manifest");
  ev->add_option("--scheme", ev_scheme, "Reward constants c1,c2,c3")->delimiter(',');

  // selftest
  auto* self = app.add_subcommand("selftest", "Run built-in fixture checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_config_path, sim_out_dir, sim_seed, sim_scheme);
    if (fit->parsed())
      return cmd_fit(fit_logs, fit_model, fit_loss, fit_out, fit_train_questions, fit_seed,
                     fit_w_teams, fit_scheme);
    if (ev->parsed())
      return cmd_evaluate(ev_logs, ev_models, ev_loss, ev_task, ev_params, ev_w,
                          ev_train_questions, ev_split, ev_alternative, ev_out, ev_scheme,
                          ev_seed);
    if (self->parsed()) {
      int failures = selftest::run(std::cout);
      if (failures > 0) {
        std::cout << failures << " fixture check(s) failed\n";
        return kExitSelftest;
      }
      std::cout << "all fixture checks passed\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
