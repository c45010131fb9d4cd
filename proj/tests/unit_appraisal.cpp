#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "teamdec/appraisal.hpp"
#include "teamdec/rng.hpp"

using namespace teamdec;

namespace {

Mat4 random_positive_stochastic(Rng& rng) {
  Mat4 w;
  for (auto& row : w) {
    double s = 0.0;
    for (double& x : row) {
      x = 0.05 + rng.next_double();
      s += x;
    }
    for (double& x : row) x /= s;
  }
  return w;
}

double residual_inf(const Vec4& delta, const Mat4& w) {
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += delta[i] * w[i][k];
    worst = std::max(worst, std::abs(acc - delta[k]));
  }
  return worst;
}

}  // namespace

TEST_CASE("fresh appraisals start at the documented means", "[appraisal]") {
  CHECK(init_human_appraisal().mean() == Catch::Approx(0.5).margin(1e-15));
  CHECK(init_agent_appraisal().mean() == Catch::Approx(0.75).margin(1e-15));
}

TEST_CASE("observe shifts the posterior mean one observation at a time", "[appraisal]") {
  BetaAppraisal human = init_human_appraisal();
  human = observe(human, true);
  CHECK(human.mean() == Catch::Approx(2.0 / 3.0).margin(1e-15));
  human = observe(human, false);
  CHECK(human.mean() == Catch::Approx(0.5).margin(1e-15));

  BetaAppraisal agent = init_agent_appraisal();
  agent = observe(agent, true);
  CHECK(agent.mean() == Catch::Approx(0.5 + 0.5 * (2.0 / 3.0)).margin(1e-15));
  agent = observe(agent, false);
  CHECK(agent.mean() == Catch::Approx(0.75).margin(1e-15));
}

TEST_CASE("agent appraisals never drop below one half", "[appraisal]") {
  BetaAppraisal agent = init_agent_appraisal();
  for (int t = 0; t < 50; ++t) agent = observe(agent, false);
  CHECK(agent.mean() >= 0.5);
  CHECK(agent.mean() == Catch::Approx(0.5 + 0.5 / 52.0).margin(1e-12));
}

TEST_CASE("centrality of a doubly stochastic matrix is uniform", "[appraisal]") {
  Mat4 w{Vec4{0.1, 0.2, 0.3, 0.4}, Vec4{0.4, 0.3, 0.2, 0.1}, Vec4{0.2, 0.1, 0.4, 0.3},
         Vec4{0.3, 0.4, 0.1, 0.2}};
  Vec4 delta = centrality(w);
  for (double d : delta) CHECK(d == Catch::Approx(0.25).margin(1e-10));
}

TEST_CASE("centrality satisfies the stationarity equation on random matrices", "[appraisal]") {
  Rng rng(2026, 8, 25, 0);
  for (int t = 0; t < 300; ++t) {
    Mat4 w = random_positive_stochastic(rng);
    Vec4 delta = centrality(w);
    double s = 0.0;
    for (double d : delta) {
      CHECK(d >= 0.0);
      s += d;
    }
    CHECK(s == Catch::Approx(1.0).margin(1e-9));
    CHECK(residual_inf(delta, w) <= 1e-9);
  }
}

TEST_CASE("centrality of identical rows is that row", "[appraisal]") {
  Vec4 row{0.4, 0.3, 0.2, 0.1};
  Mat4 w{row, row, row, row};
  Vec4 delta = centrality(w);
  for (int k = 0; k < 4; ++k) CHECK(delta[k] == Catch::Approx(row[k]).margin(1e-10));
}

TEST_CASE("centrality handles periodic matrices via damping", "[appraisal]") {
  // A 4-cycle permutation matrix has no power-iteration limit; the damped
  // fallback must still return its (uniform) stationary vector.
  Mat4 w{};
  w[0][1] = 1.0;
  w[1][2] = 1.0;
  w[2][3] = 1.0;
  w[3][0] = 1.0;
  Vec4 delta = centrality(w);
  for (double d : delta) CHECK(d == Catch::Approx(0.25).margin(1e-8));
}

TEST_CASE("centrality rejects non-stochastic input", "[appraisal]") {
  Mat4 w{};
  CHECK_THROWS_AS(centrality(w), std::domain_error);
  Mat4 neg{Vec4{1.5, -0.5, 0.0, 0.0}, Vec4{0.25, 0.25, 0.25, 0.25},
           Vec4{0.25, 0.25, 0.25, 0.25}, Vec4{0.25, 0.25, 0.25, 0.25}};
  CHECK_THROWS_AS(centrality(neg), std::domain_error);
}

TEST_CASE("aggregate agent appraisal is the centrality-weighted rating average", "[appraisal]") {
  Vec4 delta{0.4, 0.3, 0.2, 0.1};
  Mat4 ratings{Vec4{0.45, 0.67, 0.85, 0.6}, Vec4{0.6, 0.75, 0.9, 0.55},
               Vec4{0.8, 0.65, 0.7, 0.5}, Vec4{0.75, 0.75, 0.95, 0.1}};
  Vec4 pi = aggregate_agent_appraisal(delta, ratings);
  CHECK(pi[0] == Catch::Approx(0.595).margin(1e-12));
  CHECK(pi[1] == Catch::Approx(0.698).margin(1e-12));
  CHECK(pi[2] == Catch::Approx(0.845).margin(1e-12));
  CHECK(pi[3] == Catch::Approx(0.515).margin(1e-12));
}

TEST_CASE("influence state defaults to uniform weights", "[appraisal]") {
  InfluenceState state = uniform_influence_state();
  for (double d : state.delta) CHECK(d == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("degroot step is one weighted-average round", "[appraisal]") {
  Mat4 w{Vec4{0.5, 0.5, 0.0, 0.0}, Vec4{0.0, 1.0, 0.0, 0.0}, Vec4{0.0, 0.0, 1.0, 0.0},
         Vec4{0.25, 0.25, 0.25, 0.25}};
  Vec4 x{1.0, 2.0, 3.0, 4.0};
  Vec4 next = degroot_step(w, x);
  CHECK(next[0] == Catch::Approx(1.5).margin(1e-15));
  CHECK(next[1] == Catch::Approx(2.0).margin(1e-15));
  CHECK(next[2] == Catch::Approx(3.0).margin(1e-15));
  CHECK(next[3] == Catch::Approx(2.5).margin(1e-15));
}

TEST_CASE("degroot consensus equals the centrality-weighted initial opinion", "[appraisal]") {
  Rng rng(11, 22, 33, 44);
  for (int t = 0; t < 50; ++t) {
    Mat4 w = random_positive_stochastic(rng);
    Vec4 x0{rng.next_double(), rng.next_double(), rng.next_double(), rng.next_double()};
    Vec4 fixed = degroot_converge(w, x0);
    Vec4 delta = centrality(w);
    double consensus = delta[0] * x0[0] + delta[1] * x0[1] + delta[2] * x0[2] + delta[3] * x0[3];
    for (double v : fixed) CHECK(v == Catch::Approx(consensus).margin(1e-7));
  }
}
