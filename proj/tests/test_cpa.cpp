#include <doctest.h>

#include <cmath>

#include "covform/cpa.hpp"
#include "test_helpers.hpp"

using namespace covform;
using covform::testing::empty_scene;
using covform::testing::random_connected_team;
using covform::testing::random_scene;

namespace {

FormationProblem make_problem(const Scene& scene, Point2 leader, int n, double C, double delta) {
  FormationProblem p;
  p.scene = scene;
  p.leader_pos = leader;
  p.n_followers = n;
  p.C = C;
  p.sensing = {delta, SensingForm::smooth_poly, 1.0};
  p.grid_cell = delta / 10.0;
  return p;
}

double objective_of(const std::vector<Point2>& s, const FormationProblem& p) {
  return coverage_objective(s, IntegrationGrid::make(p.scene, p.grid_cell_or_default()),
                            p.density, p.sensing, p.scene, p.occlusion);
}

}  // namespace

TEST_CASE("no ascent direction at a flat optimum") {
  // Disks disjoint and far from every boundary, follower aligned with the
  // sample lattice so the symmetric contributions cancel exactly: no ascent
  // direction exists and the step is rejected.
  const Scene scene = empty_scene(120, 120);
  FormationProblem p = make_problem(scene, {60, 60}, 1, 30.0, 4.0);
  const std::vector<Point2> state{{60, 60}, {75.2, 60}};
  const auto [out, accepted] = cpa_step(state, 1, CpaConfig::defaults_for(p.sensing, scene), p);
  CHECK_FALSE(accepted);
  CHECK(out[1] == state[1]);
}

TEST_CASE("outward gradient at a taut link is rejected, connectivity preserved") {
  const Scene scene = empty_scene(120, 120);
  const double C = 6.0;
  FormationProblem p = make_problem(scene, {60, 60}, 1, C, 4.0);
  const std::vector<Point2> state{{60, 60}, {66, 60}};  // distance exactly C, overlap pushes out
  const auto [out, accepted] = cpa_step(state, 1, CpaConfig::defaults_for(p.sensing, scene), p);
  CHECK(is_connected(build_graph(out, C, scene)));
  if (accepted) {
    CHECK(distance(out[0], out[1]) <= C + kGeomEps);
    CHECK(objective_of(out, p) > objective_of(state, p));
  } else {
    CHECK(out[1] == state[1]);
  }
}

TEST_CASE("overlap step tracks a dense line search") {
  const Scene scene = empty_scene(120, 120);
  FormationProblem p = make_problem(scene, {60, 60}, 1, 10.0, 4.0);
  const std::vector<Point2> state{{60, 60}, {63, 60}};
  const CpaConfig cfg = CpaConfig::defaults_for(p.sensing, scene);

  CoverageField field(p.scene, IntegrationGrid::make(p.scene, p.grid_cell_or_default()),
                      p.sensing, p.density, p.occlusion);
  field.set_positions(state);
  const Vec2 g = field.gradient(1);
  const Vec2 dir = g / norm(g);

  double best_gain = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    const double alpha = cfg.step_min + (cfg.step_init - cfg.step_min) * k / 2000.0;
    const Point2 cand = state[1] + alpha * dir;
    if (!p.position_admissible(cand, state[0])) continue;
    if (!is_connected(build_graph({state[0], cand}, p.C, scene))) continue;
    best_gain = std::max(best_gain, field.delta_for_move(1, cand));
  }
  REQUIRE(best_gain > 0.0);

  const auto [out, accepted] = cpa_step(state, 1, cfg, p);
  REQUIRE(accepted);
  const double gain = objective_of(out, p) - objective_of(state, p);
  CHECK(gain >= 0.95 * best_gain);
}

TEST_CASE("cpa_step validates its preconditions") {
  const Scene scene = empty_scene(60, 60);
  FormationProblem p = make_problem(scene, {30, 30}, 1, 5.0, 3.0);
  const std::vector<Point2> connected{{30, 30}, {33, 30}};
  CHECK_THROWS_AS(cpa_step(connected, 0, CpaConfig::defaults_for(p.sensing, scene), p),
                  std::invalid_argument);
  const std::vector<Point2> split{{30, 30}, {50, 50}};
  CHECK_THROWS_AS(cpa_step(split, 1, CpaConfig::defaults_for(p.sensing, scene), p),
                  NotConnectedInput);
}

TEST_CASE("cpa_run: trace shape, leader immobility, idempotence") {
  const Scene scene = empty_scene(80, 80);
  FormationProblem p = make_problem(scene, {40, 40}, 3, 7.0, 4.0);
  const std::vector<Point2> start{{40, 40}, {42, 40}, {40, 43}, {38, 38}};
  REQUIRE(is_connected(build_graph(start, p.C, scene)));
  const CpaConfig cfg = CpaConfig::defaults_for(p.sensing, scene);

  const auto [polished, trace] = cpa_run(start, cfg, p);
  CHECK(polished[0] == start[0]);  // leader bit-identical
  REQUIRE(!trace.empty());
  for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] > trace[k - 1]);
  CHECK(trace.back() > trace.front());  // the crowded start leaves room to improve
  CHECK(is_connected(build_graph(polished, p.C, scene)));

  const auto [again, trace2] = cpa_run(polished, cfg, p);
  CHECK(std::abs(trace2.back() - trace2.front()) < cfg.tol);
  (void)again;
}

TEST_CASE("converged configuration yields a single-entry trace") {
  const Scene scene = empty_scene(120, 120);
  FormationProblem p = make_problem(scene, {60, 60}, 1, 30.0, 4.0);
  // flat plateau, lattice-aligned: nothing to do
  const std::vector<Point2> spread{{60, 60}, {75.2, 60}};
  const auto [out, trace] = cpa_run(spread, CpaConfig::defaults_for(p.sensing, scene), p);
  CHECK(trace.size() == 1);
  CHECK(out == spread);
}

TEST_CASE("fuzzed steps never break connectivity and only raise H") {
  Rng rng(90210);
  int accepted_count = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Scene scene = random_scene(rng, 2, 24.0, 24.0);
    const double C = rng.uniform(3.0, 6.0);
    const double delta = rng.uniform(2.0, 3.0);
    const int n = rng.uniform_int(1, 4);
    const std::vector<Point2> team = random_connected_team(rng, scene, n, C);
    FormationProblem p = make_problem(scene, team[0], n, C, delta);
    p.grid_cell = delta / 8.0;
    if (rng.coin(0.25)) p.side_constraint = HalfPlane{{-1.0, 0.0}, -C};

    CoverageField field(p.scene, IntegrationGrid::make(p.scene, p.grid_cell_or_default()),
                        p.sensing, p.density, p.occlusion);
    field.set_positions(team);
    const double before = field.total();
    const int follower = rng.uniform_int(1, n);
    const bool accepted = cpa_step_on_field(field, follower, CpaConfig::defaults_for(p.sensing, scene), p);
    CHECK(is_connected(build_graph(field.positions(), C, scene)));
    if (accepted) {
      ++accepted_count;
      CHECK(field.total() > before);
    } else {
      CHECK(field.total() == before);
    }
  }
  CHECK(accepted_count > 50);
}
