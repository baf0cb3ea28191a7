#include <benchmark/benchmark.h>

#include "covform/cpa.hpp"
#include "covform/reconfigure.hpp"
#include "covform/rng.hpp"

using namespace covform;

namespace {

Scene bench_scene() {
  return Scene::make({0, 0, 60, 50},
                     {Polygon({{28, 31}, {38, 31}, {38, 50}, {28, 50}}),
                      Polygon({{34, 0}, {44, 0}, {44, 19}, {34, 19}})});
}

std::vector<Point2> bench_team(int n_followers) {
  std::vector<Point2> pos{{12, 25}};
  Rng rng(1);
  for (int i = 0; i < n_followers; ++i)
    pos.push_back({12.0 - rng.uniform(0.0, 8.0), 25.0 + rng.uniform(-8.0, 8.0)});
  return pos;
}

FormationProblem bench_problem(const Scene& scene) {
  FormationProblem p;
  p.scene = scene;
  p.leader_pos = {12, 25};
  p.n_followers = 8;
  p.C = 10.0;
  p.sensing = {8.0, SensingForm::smooth_poly, 1.0};
  p.grid_cell = 0.4;
  return p;
}

}  // namespace

static void BM_SegmentBlocked(benchmark::State& state) {
  const Scene scene = bench_scene();
  Rng rng(2);
  std::vector<std::pair<Point2, Point2>> pairs;
  for (int i = 0; i < 256; ++i)
    pairs.push_back({{rng.uniform(0.0, 60.0), rng.uniform(0.0, 50.0)},
                     {rng.uniform(0.0, 60.0), rng.uniform(0.0, 50.0)}});
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[k++ & 255];
    benchmark::DoNotOptimize(segment_blocked(a, b, scene));
  }
}
BENCHMARK(BM_SegmentBlocked);

static void BM_CoverageObjective(benchmark::State& state) {
  const Scene scene = bench_scene();
  const double delta = 8.0;
  const IntegrationGrid grid = IntegrationGrid::make(scene, delta / state.range(0));
  const SensingModel m{delta, SensingForm::smooth_poly, 1.0};
  const std::vector<Point2> team = bench_team(8);
  for (auto _ : state)
    benchmark::DoNotOptimize(coverage_objective(team, grid, {}, m, scene, false));
}
BENCHMARK(BM_CoverageObjective)->Arg(10)->Arg(20);

static void BM_FieldTryMove(benchmark::State& state) {
  const Scene scene = bench_scene();
  const FormationProblem p = bench_problem(scene);
  CoverageField field(scene, IntegrationGrid::make(scene, p.grid_cell), p.sensing, p.density,
                      false);
  field.set_positions(bench_team(8));
  Rng rng(3);
  for (auto _ : state) {
    const Point2 to{rng.uniform(4.0, 20.0), rng.uniform(17.0, 33.0)};
    benchmark::DoNotOptimize(field.delta_for_move(4, to));
  }
}
BENCHMARK(BM_FieldTryMove);

static void BM_FieldGradient(benchmark::State& state) {
  const Scene scene = bench_scene();
  const FormationProblem p = bench_problem(scene);
  CoverageField field(scene, IntegrationGrid::make(scene, p.grid_cell), p.sensing, p.density,
                      false);
  field.set_positions(bench_team(8));
  for (auto _ : state) benchmark::DoNotOptimize(field.gradient(4));
}
BENCHMARK(BM_FieldGradient);

static void BM_ProjectConnectionUnion(benchmark::State& state) {
  const Scene scene = bench_scene();
  const std::vector<Point2> anchors{{30, 25}, {26, 28}};
  for (auto _ : state)
    benchmark::DoNotOptimize(project_to_connection_union({44, 25}, anchors, 10.0, scene, 256));
}
BENCHMARK(BM_ProjectConnectionUnion);

static void BM_ConstructConnectedGraph(benchmark::State& state) {
  const Scene scene = bench_scene();
  const std::vector<Point2> team = bench_team(8);
  const FormationGraph graph = build_graph(team, 10.0, scene);
  for (auto _ : state) {
    ReconfigResult res = construct_connected_graph(
        ReconfigInput::make(graph, {team[0].x + 1.0, team[0].y}), scene, 10.0);
    benchmark::DoNotOptimize(res.positions.data());
  }
}
BENCHMARK(BM_ConstructConnectedGraph);

static void BM_CpaSweep(benchmark::State& state) {
  const Scene scene = bench_scene();
  const FormationProblem p = bench_problem(scene);
  CpaConfig cfg = CpaConfig::defaults_for(p.sensing, scene);
  cfg.max_sweeps = 1;
  const std::vector<Point2> team = bench_team(8);
  for (auto _ : state) {
    auto [out, trace] = cpa_run(team, cfg, p);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_CpaSweep);

BENCHMARK_MAIN();
