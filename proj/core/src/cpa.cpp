#include "covform/cpa.hpp"

#include <algorithm>
#include <cmath>

namespace covform {

namespace {

constexpr double kAcceptEps = 1e-9;

// Connectivity of the graph with one agent relocated; only that agent's
// adjacency row changes, the rest is reused.
bool still_connected(const FormationGraph& graph, int agent, Point2 cand, const Scene& scene) {
  FormationGraph g = graph;
  const int n = g.size();
  g.positions[agent] = cand;
  for (int v = 0; v < n; ++v) {
    const bool e = v != agent && connected_pair(cand, g.positions[v], g.C, scene);
    g.adjacency[static_cast<std::size_t>(agent) * n + v] = e ? 1 : 0;
    g.adjacency[static_cast<std::size_t>(v) * n + agent] = e ? 1 : 0;
  }
  return is_connected(g);
}

bool step_impl(CoverageField& field, FormationGraph& graph, int follower, const CpaConfig& config,
               const FormationProblem& problem) {
  const Vec2 g = field.gradient(follower);
  const double gn = norm(g);
  // Below this the "gradient" is summation residue at a symmetric optimum,
  // not an ascent direction.
  if (gn < 1e-9) return false;
  const Vec2 dir = g / gn;
  const Point2 from = field.positions()[follower];
  const Point2 leader = field.positions()[0];

  // Best admissible rung of a geometric step ladder, not first-accept: the
  // committed move tracks the line-search optimum closely.
  bool found = false;
  Point2 best{};
  double best_gain = kAcceptEps;
  for (double alpha = config.step_init; alpha >= config.step_min * (1.0 - 1e-12); alpha *= 0.7) {
    const Point2 cand = from + alpha * dir;
    if (!problem.position_admissible(cand, leader)) continue;
    const double gain = field.delta_for_move(follower, cand);
    if (gain <= best_gain) continue;
    if (!still_connected(graph, follower, cand, problem.scene)) continue;
    best = cand;
    best_gain = gain;
    found = true;
  }
  if (!found) return false;

  field.commit_move(follower, best);
  const int n = graph.size();
  graph.positions[follower] = best;
  for (int v = 0; v < n; ++v) {
    const bool e = v != follower && connected_pair(best, graph.positions[v], graph.C, problem.scene);
    graph.adjacency[static_cast<std::size_t>(follower) * n + v] = e ? 1 : 0;
    graph.adjacency[static_cast<std::size_t>(v) * n + follower] = e ? 1 : 0;
  }
  return true;
}

}  // namespace

void CpaConfig::validate() const {
  if (!(step_min > 0.0) || !(step_min <= step_init))
    throw ValidationError("cpa", "requires 0 < step_min <= step_init");
  if (max_sweeps < 1) throw ValidationError("cpa.max_sweeps", "must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("cpa.tol", "must be positive");
}

bool cpa_step_on_field(CoverageField& field, int follower, const CpaConfig& config,
                       const FormationProblem& problem) {
  FormationGraph graph = build_graph(field.positions(), problem.C, problem.scene);
  if (!is_connected(graph)) throw NotConnectedInput("cpa_step: input graph is disconnected");
  return step_impl(field, graph, follower, config, problem);
}

std::pair<std::vector<Point2>, bool> cpa_step(const std::vector<Point2>& state, int follower,
                                              const CpaConfig& config,
                                              const FormationProblem& problem) {
  config.validate();
  if (follower <= 0 || follower >= static_cast<int>(state.size()))
    throw std::invalid_argument("cpa_step: follower index out of range (leader never moves)");
  CoverageField field(problem.scene, IntegrationGrid::make(problem.scene, problem.grid_cell_or_default()),
                      problem.sensing, problem.density, problem.occlusion);
  field.set_positions(state);
  const bool accepted = cpa_step_on_field(field, follower, config, problem);
  return {field.positions(), accepted};
}

std::vector<double> cpa_run_on_field(CoverageField& field, const CpaConfig& config,
                                     const FormationProblem& problem) {
  config.validate();
  FormationGraph graph = build_graph(field.positions(), problem.C, problem.scene);
  if (!is_connected(graph)) throw NotConnectedInput("cpa_run: input graph is disconnected");

  std::vector<double> trace{field.total()};
  const int n_followers = graph.size() - 1;
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    const double before = field.total();
    bool any = false;
    for (int i = 1; i <= n_followers; ++i)
      any = step_impl(field, graph, i, config, problem) || any;
    if (!any) break;
    trace.push_back(field.total());
    if (field.total() - before < config.tol) break;
  }
  return trace;
}

std::pair<std::vector<Point2>, std::vector<double>> cpa_run(const std::vector<Point2>& state,
                                                            const CpaConfig& config,
                                                            const FormationProblem& problem) {
  CoverageField field(problem.scene, IntegrationGrid::make(problem.scene, problem.grid_cell_or_default()),
                      problem.sensing, problem.density, problem.occlusion);
  field.set_positions(state);
  std::vector<double> trace = cpa_run_on_field(field, config, problem);
  return {field.positions(), std::move(trace)};
}

}  // namespace covform
