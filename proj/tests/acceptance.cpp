// Acceptance checks for the decision-model library. Each numbered check
// prints exactly one timed PASS/FAIL line (informational lines are marked
// "info") and the process exits with the number of failed checks. Run with
// no arguments for all checks or with a single number to run one of them.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "teamdec/fit_eval.hpp"
#include "teamdec/sim.hpp"

using namespace teamdec;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> info;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

void require(Outcome& out, bool condition, const std::string& label) {
  if (!condition && out.pass) {
    out.pass = false;
    out.detail = label;
  }
}

Vec4 random_simplex4(Rng& rng) {
  Vec4 v;
  double total = 0.0;
  for (double& x : v) {
    x = 0.02 + rng.next_double();
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

std::vector<double> random_distribution(Rng& rng, std::size_t n) {
  std::vector<double> q(n);
  double total = 0.0;
  for (double& x : q) {
    x = 0.01 + rng.next_double();
    total += x;
  }
  for (double& x : q) x /= total;
  return q;
}

double paired_p(const EvalReport& a, const EvalReport& b) {
  std::vector<double> xs, ys;
  for (const auto& [team, loss] : a.per_team_losses) {
    auto it = b.per_team_losses.find(team);
    if (it == b.per_team_losses.end()) continue;
    xs.push_back(loss);
    ys.push_back(it->second);
  }
  return wilcoxon_signed_rank(xs, ys).p_value;
}

// --- 1: published worked examples ---------------------------------------------

Outcome check_worked_examples() {
  Outcome out;
  const double rounded = 1e-2;  // the published values are printed rounded
  const double exact = 1e-9;

  {  // mixed votes under accuracy beliefs 0.5 / 0.4 / 0.8 / 0.6
    TeamBeliefState state;
    state.human_appraisals = {BetaAppraisal{1, 1}, BetaAppraisal{2, 3}, BetaAppraisal{4, 1},
                              BetaAppraisal{3, 2}};
    Vec4 post = nb_option_posterior(state, Responses{1, 2, 1, 3});
    const double want_post[4] = {0.828, 0.046, 0.103, 0.023};
    const double want_reward[4] = {3.14, -0.77, -0.485, -0.885};
    for (int k = 0; k < 4; ++k) {
      require(out, std::abs(post[k] - want_post[k]) <= rounded, fmt("pooled posterior[%d]", k));
      require(out, std::abs(reward_for_option(post[k], state.scheme) - want_reward[k]) <= rounded,
              fmt("option reward[%d]", k));
    }
    Vec4 means = agent_success_means(state);
    for (int j = 0; j < 4; ++j)
      require(out, std::abs(reward_for_agent(means[j], state.scheme) - 1.75) <= exact,
              fmt("agent reward[%d]", j));
  }

  {  // split votes on a fresh team, answer revealed afterwards
    TeamBeliefState state;
    Vec4 post = nb_option_posterior(state, Responses{3, 3, 4, 4});
    const double want_post[4] = {0.05, 0.05, 0.45, 0.45};
    const double want_reward[4] = {-0.75, -0.75, 1.25, 1.25};
    for (int k = 0; k < 4; ++k) {
      require(out, std::abs(post[k] - want_post[k]) <= exact, fmt("split posterior[%d]", k));
      require(out, std::abs(reward_for_option(post[k], state.scheme) - want_reward[k]) <= exact,
              fmt("split reward[%d]", k));
    }
    QuestionRecord q;
    q.index = 1;
    q.responses = Responses{3, 3, 4, 4};
    q.team_action = TeamAction::option(4);
    q.correct_option = 4;
    BeliefTracker tracker;
    tracker.observe_question(q);
    require(out, std::abs(tracker.state.human_appraisals[0].mean() - 0.33) <= rounded,
            "wrong member belief update");
    require(out, std::abs(tracker.state.human_appraisals[2].mean() - 0.67) <= rounded,
            "right member belief update");
  }

  {  // centrality-weighted aggregates over a fixed rating table
    TeamBeliefState state;
    state.influence.delta = {0.4, 0.3, 0.2, 0.1};
    state.agent_ratings = {Vec4{0.45, 0.67, 0.85, 0.6}, Vec4{0.6, 0.75, 0.9, 0.55},
                           Vec4{0.8, 0.65, 0.7, 0.5}, Vec4{0.75, 0.75, 0.95, 0.1}};
    Vec4 pi = cent_agent_aggregate(state);
    const double want_pi[4] = {0.595, 0.698, 0.845, 0.515};
    const double want_agent_reward[4] = {0.975, 1.49, 2.225, 0.575};
    for (int j = 0; j < 4; ++j) {
      require(out, std::abs(pi[j] - want_pi[j]) <= exact, fmt("aggregate rating[%d]", j));
      require(out,
              std::abs(reward_for_agent(pi[j], state.scheme) - want_agent_reward[j]) <= exact,
              fmt("aggregate agent reward[%d]", j));
    }
    Vec4 probs = cent_option_probs(state, Responses{1, 2, 1, 3});
    const double want_option_reward[4] = {2.0, 0.5, -0.5, -1.0};
    for (int k = 0; k < 4; ++k)
      require(out,
              std::abs(reward_for_option(probs[k], state.scheme) - want_option_reward[k]) <= exact,
              fmt("centrality option reward[%d]", k));
  }

  if (out.pass) out.detail = "all published fixture values reproduced";
  return out;
}

// --- 2: uniform-baseline losses -------------------------------------------------

Outcome check_uniform_baselines() {
  Outcome out;
  std::vector<double> u8(8, 0.125), u4(4, 0.25);
  const double ln8 = std::log(8.0), ln4 = std::log(4.0);
  for (std::size_t i = 0; i < 8; ++i)
    for (LossKind kind : {LossKind::L1, LossKind::L2, LossKind::Binary})
      require(out, std::abs(action_loss(kind, u8, i) - ln8) <= 1e-4,
              fmt("8-action uniform, loss %s, action %zu", loss_name(kind), i));
  for (std::size_t i = 0; i < 4; ++i)
    for (LossKind kind : {LossKind::L1, LossKind::L2, LossKind::Binary})
      require(out, std::abs(action_loss(kind, u4, i) - ln4) <= 1e-4,
              fmt("4-action uniform, loss %s, action %zu", loss_name(kind), i));
  if (out.pass) out.detail = fmt("uniform losses equal ln8=%.4f and ln4=%.4f", ln8, ln4);
  return out;
}

// --- 3: closed forms vs the search oracle ---------------------------------------

Outcome check_oracle_agreement() {
  Outcome out;
  double worst_l1 = 0.0, worst_l2 = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Rng rng(20260825, 3, static_cast<std::uint64_t>(trial), 0);
    std::size_t n = (trial % 2 == 0) ? 4 : 8;
    std::vector<double> q = random_distribution(rng, n);
    std::size_t i = rng.next_below(static_cast<std::uint32_t>(n));

    double d1 = std::abs(oracle_min_cross_entropy(q, i, CrossEntropyDirection::QP, 1e-3).loss -
                         l1_loss(q, i));
    double d2 = std::abs(oracle_min_cross_entropy(q, i, CrossEntropyDirection::PQ, 1e-3).loss -
                         l2_loss(q, i));
    worst_l1 = std::max(worst_l1, d1);
    worst_l2 = std::max(worst_l2, d2);
    require(out, d1 <= 2e-3, fmt("trial %d: data-direction gap %.3g", trial, d1));
    require(out, d2 <= 2e-3, fmt("trial %d: model-direction gap %.3g", trial, d2));
    require(out,
            l2_candidate_pair_threshold(q, i).loss <=
                l2_candidate_dominant_set(q, i).loss + 1e-12,
            fmt("trial %d: threshold candidate lost to dominant-set candidate", trial));
  }
  if (out.pass)
    out.detail = fmt("1000 instances (dims 4 and 8); worst gaps %.2e / %.2e", worst_l1, worst_l2);
  return out;
}

// --- 4: explore/exploit score fixtures ------------------------------------------

Outcome check_score_fixtures() {
  Outcome out;
  double expectation = expected_score_explore_exploit({0.5, 0.6, 0.7, 0.8}, 6, 45);
  require(out, std::abs(expectation - 72.0) <= 1e-9,
          fmt("explore/exploit expectation %.12f != 72", expectation));

  SessionLog log;
  log.team_id = "all_correct";
  for (int q = 1; q <= 45; ++q) {
    QuestionRecord record;
    record.index = q;
    record.responses = Responses{2, 2, 2, 2};
    record.team_action = TeamAction::option(2);
    record.correct_option = 2;
    log.questions.push_back(record);
  }
  double score = realized_score(log);
  require(out, score == 180.0, fmt("all-correct realized score %.12f != 180", score));
  if (out.pass) out.detail = "expectation 72 and perfect-session score 180 reproduced";
  return out;
}

// --- 5: subjective-parameter recovery -------------------------------------------

Outcome check_parameter_recovery() {
  Outcome out;
  const PTParams truth{0.5, 0.5, 2.0, 0.6, 0.6};
  const double step_alpha = 0.1 + 1e-9, step_gamma = 0.1 + 1e-9, step_lambda = 1.0 + 1e-9;

  SimConfig config;
  config.n_teams = 30;
  config.n_questions = 200;
  config.generative_model = ModelKind::PT_NB;
  config.pt = truth;
  config.scheme = RewardScheme{4, 1, 3};
  config.seed = 20260825;
  auto logs = generate(config).logs;

  FitConfig fit_config;
  fit_config.train_questions = 199;  // the largest window the train/test split allows
  fit_config.seed = config.seed;
  auto fitted = fit_pt(logs, ModelKind::PT_NB, LossKind::Binary, fit_config, config.scheme);

  int recovered = 0, a_ok = 0, l_ok = 0, gp_ok = 0, gm_ok = 0;
  for (const auto& [team, p] : fitted) {
    bool a = std::abs(p.alpha - truth.alpha) <= step_alpha;
    bool l = std::abs(p.loss_aversion - truth.loss_aversion) <= step_lambda;
    bool gp = std::abs(p.gamma_gain - truth.gamma_gain) <= step_gamma;
    bool gm = std::abs(p.gamma_loss - truth.gamma_loss) <= step_gamma;
    a_ok += a;
    l_ok += l;
    gp_ok += gp;
    gm_ok += gm;
    recovered += a && l && gp && gm;
  }
  const int needed = 24;  // 80% of 30
  out.pass = recovered >= needed;
  out.detail = fmt(
      "%d/30 teams within one grid step on every coordinate (needs %d); "
      "per-coordinate: curvature %d, loss aversion %d, gain weighting %d, loss weighting %d",
      recovered, needed, a_ok, l_ok, gp_ok, gm_ok);

  // Consistency companion: the same estimator on two orders of magnitude more
  // data per team. Informational only; it does not replace the check above.
  SimConfig big = config;
  big.n_teams = 1;
  big.n_questions = 20000;
  FitConfig big_fit;
  big_fit.train_questions = 19999;
  big_fit.seed = big.seed;
  auto one = fit_pt(generate(big).logs, ModelKind::PT_NB, LossKind::Binary, big_fit, big.scheme);
  const PTParams& p = one.begin()->second;
  bool exact = std::abs(p.alpha - truth.alpha) <= 1e-9 &&
               std::abs(p.loss_aversion - truth.loss_aversion) <= 1e-9 &&
               std::abs(p.gamma_gain - truth.gamma_gain) <= 1e-9 &&
               std::abs(p.gamma_loss - truth.gamma_loss) <= 1e-9;
  out.info.push_back(fmt(
      "consistency companion (1 team x 20000 questions): fitted (%.2f, %.0f, %.2f, %.2f) vs "
      "generative (0.50, 2, 0.60, 0.60) -> %s; the shortfall above is sample size, not bias",
      p.alpha, p.loss_aversion, p.gamma_gain, p.gamma_loss,
      exact ? "exact grid-point recovery" : "NOT exact"));
  if (!exact) out.pass = false;
  return out;
}

// --- 6: fitted subjective models beat their base models out of sample -----------

Outcome check_fitted_improvement() {
  Outcome out;
  const struct {
    ModelKind subjective, base;
  } families[2] = {{ModelKind::PT_NB, ModelKind::NB}, {ModelKind::PT_CENT, ModelKind::CENT}};

  std::string numbers;
  for (const auto& family : families) {
    SimConfig config;
    config.n_teams = 30;
    config.n_questions = 230;
    config.generative_model = family.subjective;
    config.pt = PTParams{0.5, 0.5, 2.0, 0.6, 0.6};
    config.seed = 20260825;
    auto logs = generate(config).logs;

    FitConfig fit_config;  // train on the first 30 questions, default grid
    auto fitted = fit_pt(logs, family.subjective, LossKind::L1, fit_config);

    EvalOptions test_window;
    test_window.first_question = fit_config.train_questions + 1;
    EvalReport base = evaluate(logs, family.base, LossKind::L1, Task::DT1, test_window);
    test_window.pt_by_team = fitted;
    EvalReport tuned = evaluate(logs, family.subjective, LossKind::L1, Task::DT1, test_window);
    double p = paired_p(tuned, base);

    const std::string sub = model_name(family.subjective), base_name = model_name(family.base);
    numbers += fmt("%s%s %.3f < %s %.3f (p=%.2g)", numbers.empty() ? "" : "; ", sub.c_str(),
                   tuned.mean, base_name.c_str(), base.mean, p);
    require(out, tuned.mean < base.mean,
            fmt("%s mean %.4f not below %s mean %.4f", sub.c_str(), tuned.mean, base_name.c_str(),
                base.mean));
    require(out, p < 0.05,
            fmt("%s vs %s signed-rank p=%.3g not below 0.05", sub.c_str(), base_name.c_str(), p));
  }
  if (out.pass) out.detail = "held-out mean losses " + numbers;
  return out;
}

// --- 7: second-stage ablations and trust-weight recovery ------------------------

Outcome check_second_stage_ablations() {
  Outcome out;
  SimConfig config;
  config.n_teams = 30;
  config.n_questions = 200;
  config.generative_model = ModelKind::CENT;
  config.dt2_trust_w = 0.9;
  config.consult_policy = ConsultPolicy::FixedProbability;
  config.consult_probability = 0.45;
  config.seed = 20260825;
  auto logs = generate(config).logs;

  EvalReport nb = evaluate(logs, ModelKind::NB, LossKind::L1, Task::DT2);
  EvalReport nb_h = evaluate(logs, ModelKind::NB_H, LossKind::L1, Task::DT2);
  EvalReport cent = evaluate(logs, ModelKind::CENT, LossKind::L1, Task::DT2);
  EvalReport cent_h = evaluate(logs, ModelKind::CENT_H, LossKind::L1, Task::DT2);
  double p_nb = paired_p(nb, nb_h);
  double p_cent = paired_p(cent, cent_h);

  require(out, nb.mean < nb_h.mean,
          fmt("pooled model %.4f not below its human-only ablation %.4f", nb.mean, nb_h.mean));
  require(out, p_nb < 0.05, fmt("pooled-family signed-rank p=%.3g", p_nb));
  require(out, cent.mean < cent_h.mean,
          fmt("blended model %.4f not below its human-only ablation %.4f", cent.mean,
              cent_h.mean));
  require(out, p_cent < 0.05, fmt("blend-family signed-rank p=%.3g", p_cent));

  auto [train, rest] = split_teams(logs, 20, config.seed);
  double w = fit_w(train, LossKind::Binary);
  require(out, std::abs(w - 0.9) <= 0.1 + 1e-9,
          fmt("fitted trust weight %.2f outside 0.9 +/- 0.1", w));
  if (out.pass)
    out.detail = fmt("nb %.3f < nb-h %.3f (p=%.2g); cent %.3f < cent-h %.3f (p=%.2g); w=%.2f",
                     nb.mean, nb_h.mean, p_nb, cent.mean, cent_h.mean, p_cent, w);
  return out;
}

// --- 8: identity parameters reproduce the base models ---------------------------

Outcome check_identity_degeneracy() {
  Outcome out;
  const RewardScheme scheme{};
  const ModelParams identity_params;  // identity subjective params, default trust
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Rng rng(20260825, 8, static_cast<std::uint64_t>(trial), 0);
    Dt1Event e;
    e.nb_option_post = random_simplex4(rng);
    e.cent_option_post = random_simplex4(rng);
    for (int j = 0; j < 4; ++j) {
      e.nb_agent_success[j] = 0.05 + 0.9 * rng.next_double();
      e.cent_agent_success[j] = 0.05 + 0.9 * rng.next_double();
    }

    auto nb = dt1_event_distribution(ModelKind::NB, e, identity_params, scheme);
    auto pt_nb = dt1_event_distribution(ModelKind::PT_NB, e, identity_params, scheme);
    auto cent = dt1_event_distribution(ModelKind::CENT, e, identity_params, scheme);
    auto pt_cent = dt1_event_distribution(ModelKind::PT_CENT, e, identity_params, scheme);
    for (int s = 0; s < 8; ++s) {
      worst = std::max(worst, std::abs(nb.probs[s] - pt_nb.probs[s]));
      worst = std::max(worst, std::abs(cent.probs[s] - pt_cent.probs[s]));
    }

    Dt2Event d;
    d.nb_posterior = random_simplex4(rng);
    d.cent_human_mass = random_simplex4(rng);
    d.cent_pi = 0.05 + 0.9 * rng.next_double();
    d.agent_response = 1 + static_cast<int>(rng.next_below(4));
    auto nb2 = dt2_event_distribution(ModelKind::NB, d, identity_params, scheme);
    auto pt2 = dt2_event_distribution(ModelKind::PT_NB, d, identity_params, scheme);
    auto cent2 = dt2_event_distribution(ModelKind::CENT, d, identity_params, scheme);
    auto ptc2 = dt2_event_distribution(ModelKind::PT_CENT, d, identity_params, scheme);
    for (int k = 0; k < 4; ++k) {
      worst = std::max(worst, std::abs(nb2.probs[k] - pt2.probs[k]));
      worst = std::max(worst, std::abs(cent2.probs[k] - ptc2.probs[k]));
    }
  }
  out.pass = worst <= 1e-12;
  out.detail = fmt("max |difference| %.2e over 1000 random states (tolerance 1e-12)", worst);
  return out;
}

// --- 9: centrality eigenvector residuals ----------------------------------------

Outcome check_centrality() {
  Outcome out;
  double worst_residual = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Rng rng(20260825, 9, static_cast<std::uint64_t>(trial), 0);
    Mat4 w;
    for (auto& row : w) {
      double row_sum = 0.0;
      for (double& v : row) {
        v = 0.02 + rng.next_double();
        row_sum += v;
      }
      for (double& v : row) v /= row_sum;
    }
    Vec4 delta = centrality(w);
    double mass = 0.0;
    for (int k = 0; k < 4; ++k) {
      require(out, delta[k] >= 0.0, fmt("trial %d: negative centrality", trial));
      mass += delta[k];
    }
    require(out, std::abs(mass - 1.0) <= 1e-9, fmt("trial %d: centrality mass %.12f", trial, mass));
    for (int k = 0; k < 4; ++k) {
      double image = 0.0;
      for (int i = 0; i < 4; ++i) image += delta[i] * w[i][k];
      worst_residual = std::max(worst_residual, std::abs(image - delta[k]));
    }
  }
  require(out, worst_residual <= 1e-8, fmt("worst fixed-point residual %.2e", worst_residual));

  double worst_uniform = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(20260825, 90, static_cast<std::uint64_t>(trial), 0);
    Mat4 w;
    for (auto& row : w)
      for (double& v : row) v = 0.1 + rng.next_double();
    for (int sweep = 0; sweep < 2000; ++sweep) {  // alternate column/row scaling
      for (int k = 0; k < 4; ++k) {
        double col = w[0][k] + w[1][k] + w[2][k] + w[3][k];
        for (int i = 0; i < 4; ++i) w[i][k] /= col;
      }
      for (auto& row : w) {
        double row_sum = row[0] + row[1] + row[2] + row[3];
        for (double& v : row) v /= row_sum;
      }
    }
    Vec4 delta = centrality(w);
    for (int k = 0; k < 4; ++k) worst_uniform = std::max(worst_uniform, std::abs(delta[k] - 0.25));
  }
  require(out, worst_uniform <= 1e-8,
          fmt("doubly-stochastic centrality off uniform by %.2e", worst_uniform));
  if (out.pass)
    out.detail = fmt("worst residual %.2e on 1000 matrices; doubly-stochastic off uniform %.2e",
                     worst_residual, worst_uniform);
  return out;
}

// --- 10: signed-rank exact p-values vs enumeration ------------------------------

Outcome check_signed_rank_enumeration() {
  Outcome out;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(20260825, 10, static_cast<std::uint64_t>(trial), 0);
    std::size_t n = 5 + static_cast<std::size_t>(trial % 8);  // 5..12
    std::vector<double> x(n), y(n, 0.0);
    for (double& v : x) {
      v = (1 + static_cast<int>(rng.next_below(30))) / 10.0;  // ties happen
      if (rng.next_double() < 0.5) v = -v;
    }

    std::vector<double> abs_d(n);
    for (std::size_t k = 0; k < n; ++k) abs_d[k] = std::abs(x[k]);
    auto rank2 = teamdec::detail::doubled_ranks(abs_d);
    auto tail_count = [&](std::int64_t s) {
      std::int64_t hits = 0;
      for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        std::int64_t w2 = 0;
        for (std::size_t k = 0; k < n; ++k)
          if (mask & (1ull << k)) w2 += rank2[k];
        if (w2 <= s) ++hits;
      }
      return static_cast<double>(hits) / static_cast<double>(1ull << n);
    };

    auto two = wilcoxon_signed_rank(x, y, Alternative::TwoSided);
    auto less = wilcoxon_signed_rank(x, y, Alternative::Less);
    auto greater = wilcoxon_signed_rank(x, y, Alternative::Greater);
    require(out, two.exact && less.exact && greater.exact,
            fmt("trial %d: expected the exact small-sample path", trial));

    double p_two =
        std::min(1.0, 2.0 * tail_count(static_cast<std::int64_t>(std::llround(2 * two.statistic))));
    double p_less = tail_count(static_cast<std::int64_t>(std::llround(2 * two.w_plus)));
    double p_greater = tail_count(static_cast<std::int64_t>(std::llround(2 * two.w_minus)));
    worst = std::max({worst, std::abs(two.p_value - p_two), std::abs(less.p_value - p_less),
                      std::abs(greater.p_value - p_greater)});
    require(out, std::abs(two.p_value - p_two) <= 1e-12,
            fmt("trial %d: two-sided %.12g vs enumerated %.12g", trial, two.p_value, p_two));
    require(out, std::abs(less.p_value - p_less) <= 1e-12,
            fmt("trial %d: lower-tail %.12g vs enumerated %.12g", trial, less.p_value, p_less));
    require(out, std::abs(greater.p_value - p_greater) <= 1e-12,
            fmt("trial %d: upper-tail %.12g vs enumerated %.12g", trial, greater.p_value,
                p_greater));
  }
  if (out.pass)
    out.detail = fmt("100 samples, n = 5..12, all three alternatives; max gap %.2e", worst);
  return out;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // 0 = no stated budget
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "worked-example fixtures", 1.0, check_worked_examples},
    {2, "uniform-baseline losses", 0.0, check_uniform_baselines},
    {3, "closed-form losses vs search oracle", 300.0, check_oracle_agreement},
    {4, "explore-exploit score fixtures", 0.0, check_score_fixtures},
    {5, "subjective-parameter recovery at 200 questions", 600.0, check_parameter_recovery},
    {6, "fitted subjective models beat base models out of sample", 0.0, check_fitted_improvement},
    {7, "second-stage ablation ordering and trust-weight recovery", 0.0,
     check_second_stage_ablations},
    {8, "identity parameters reproduce the base models", 0.0, check_identity_degeneracy},
    {9, "centrality eigenvector residuals", 0.0, check_centrality},
    {10, "signed-rank exact p-values vs enumeration", 0.0, check_signed_rank_enumeration},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1-10]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& criterion : kCriteria) {
    if (only != 0 && criterion.id != only) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criterion.budget_seconds > 0.0 && seconds > criterion.budget_seconds) {
      outcome.pass = false;
      outcome.detail += fmt(" [exceeded %.0f s budget]", criterion.budget_seconds);
    }
    std::printf("[%2d] %s  %s: %s  (%.1f s)\n", criterion.id, outcome.pass ? "PASS" : "FAIL",
                criterion.title, outcome.detail.c_str(), seconds);
    for (const std::string& line : outcome.info)
      std::printf("[%2d] info  %s\n", criterion.id, line.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures;
}
