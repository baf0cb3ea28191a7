#include "covform/formation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covform/rng.hpp"

namespace covform {

namespace {

constexpr double kAcceptEps = 1e-9;   // minimum H improvement worth a move
constexpr int kTreeRebuildPeriod = 10;
constexpr int kMaxSweeps = 500;

// Prim over visibility edges; edge cost is Euclidean length, blocked pairs
// are unusable. Returns an empty vector when not all agents are reachable.
std::vector<int> mst_backbone(const std::vector<Point2>& pos, const Scene& scene) {
  const int n = static_cast<int>(pos.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(n, kInf);
  std::vector<int> parent(n, -1);
  std::vector<char> in_tree(n, 0);
  cost[0] = 0.0;
  for (int round = 0; round < n; ++round) {
    int u = -1;
    double best = kInf;
    for (int v = 0; v < n; ++v)
      if (!in_tree[v] && cost[v] < best) {
        best = cost[v];
        u = v;
      }
    if (u < 0) return {};
    in_tree[u] = 1;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double d = distance(pos[u], pos[v]);
      if (d < cost[v] && !segment_blocked(pos[u], pos[v], scene)) {
        cost[v] = d;
        parent[v] = u;
      }
    }
  }
  return parent;
}

std::vector<int> bfs_order(const std::vector<int>& parent) {
  const int n = static_cast<int>(parent.size());
  std::vector<std::vector<int>> children(n);
  for (int v = 1; v < n; ++v) children[parent[v]].push_back(v);
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    order.push_back(u);
    for (int c : children[u]) queue.push_back(c);
  }
  return order;
}

// Pulls every follower whose tree-parent link is broken back onto the
// parent's connection region, parents before children.
void repair_links(CoverageField& field, const std::vector<int>& parent,
                  const FormationProblem& problem) {
  const std::vector<int> order = bfs_order(parent);
  for (int j : order) {
    if (j == 0) continue;
    const Point2 pj = field.positions()[j];
    const Point2 pp = field.positions()[parent[j]];
    if (connected_pair(pj, pp, problem.C, problem.scene)) continue;
    const Point2 leader = field.positions()[0];
    std::function<bool(Point2)> extra;
    if (problem.side_constraint)
      extra = [&problem, leader](Point2 p) { return problem.side_constraint->admits(p, leader); };
    const Point2 target =
        project_to_connection_union(pj, {pp}, problem.C, problem.scene, 128, extra);
    field.commit_move(j, target);
  }
}

struct RestartResult {
  std::vector<Point2> positions;
  std::vector<int> parent;
  double objective = 0.0;
};

bool sample_start(const FormationProblem& problem, Rng& rng, bool structured,
                  std::vector<Point2>& out, std::vector<int>& parent) {
  const int n = problem.n_followers + 1;
  const double radius = problem.n_followers * problem.C;
  const Rect& r = problem.scene.mission_rect;
  const double lox = std::max(r.x0, problem.leader_pos.x - radius);
  const double hix = std::min(r.x1, problem.leader_pos.x + radius);
  const double loy = std::max(r.y0, problem.leader_pos.y - radius);
  const double hiy = std::min(r.y1, problem.leader_pos.y + radius);
  for (int attempt = 0; attempt < 20; ++attempt) {
    out.assign(n, problem.leader_pos);
    bool ok = true;
    for (int i = 1; i < n && ok; ++i) {
      ok = false;
      if (structured && attempt == 0) {
        // Arc layout around the leader, centered on the admissible side.
        const double base = problem.side_constraint
                                ? std::atan2(problem.side_constraint->normal.y,
                                             problem.side_constraint->normal.x)
                                : 0.0;
        const double span = problem.side_constraint ? 0.9 * M_PI : 2.0 * M_PI;
        const double th =
            base - span / 2.0 + span * (n == 2 ? 0.5 : static_cast<double>(i - 1) / (n - 2));
        const double rr = (attempt % 2 == 0 ? 0.85 : 0.55) * problem.C;
        const Point2 p = problem.leader_pos + Vec2{rr * std::cos(th), rr * std::sin(th)};
        if (problem.position_admissible(p, problem.leader_pos)) {
          out[i] = p;
          ok = true;
          continue;
        }
      }
      for (int draw = 0; draw < 2000; ++draw) {
        const Point2 p{rng.uniform(lox, hix), rng.uniform(loy, hiy)};
        if (distance(p, problem.leader_pos) > radius) continue;
        if (!problem.position_admissible(p, problem.leader_pos)) continue;
        out[i] = p;
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    parent = mst_backbone(out, problem.scene);
    if (!parent.empty()) return true;
  }
  return false;
}

bool run_restart(const FormationProblem& problem, const IntegrationGrid& grid, Rng rng,
                 bool structured, RestartResult& result) {
  std::vector<Point2> start;
  std::vector<int> parent;
  if (!sample_start(problem, rng, structured, start, parent)) return false;

  CoverageField field(problem.scene, grid, problem.sensing, problem.density, problem.occlusion);
  field.set_positions(start);
  try {
    repair_links(field, parent, problem);

    const double step_init = 0.1 * problem.sensing.delta;
    const double step_min = 1e-3 * problem.sensing.delta;
    const Point2 leader = problem.leader_pos;

    // Projected step: a candidate that overshoots the backbone link is
    // pulled back onto the parent's connection region, which lets an agent
    // pinned at the range cap slide tangentially instead of stalling.
    const auto project_onto_link = [&](int i, Point2 cand) -> std::optional<Point2> {
      const Point2 par = field.positions()[parent[i]];
      if (!connected_pair(cand, par, problem.C, problem.scene)) {
        const Point2 pulled = project_to_disk(cand, par, problem.C);
        if (!segment_blocked(pulled, par, problem.scene)) {
          cand = pulled;
        } else {
          std::function<bool(Point2)> extra;
          if (problem.side_constraint)
            extra = [&problem, leader](Point2 p) {
              return problem.side_constraint->admits(p, leader);
            };
          try {
            cand = project_to_connection_union(cand, {par}, problem.C, problem.scene, 128, extra);
          } catch (const NoFeasibleProjection&) {
            return std::nullopt;
          }
        }
      }
      if (!problem.position_admissible(cand, leader)) return std::nullopt;
      for (int c = 1; c <= problem.n_followers; ++c)
        if (parent[c] == i &&
            !connected_pair(field.positions()[c], cand, problem.C, problem.scene))
          return std::nullopt;
      return cand;
    };

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      std::vector<Point2> before = field.positions();
      for (int i = 1; i <= problem.n_followers; ++i) {
        const Vec2 g = field.gradient(i);
        const double gn = norm(g);
        if (gn < 1e-9) continue;
        const Vec2 dir = g / gn;
        bool found = false;
        Point2 best{};
        double best_gain = kAcceptEps;
        for (double alpha = step_init; alpha >= step_min; alpha *= 0.5) {
          const std::optional<Point2> cand =
              project_onto_link(i, field.positions()[i] + alpha * dir);
          if (!cand) continue;
          const double gain = field.delta_for_move(i, *cand);
          if (gain <= best_gain) continue;
          best = *cand;
          best_gain = gain;
          found = true;
        }
        if (found) field.commit_move(i, best);
      }
      if ((sweep + 1) % kTreeRebuildPeriod == 0) {
        std::vector<int> fresh = mst_backbone(field.positions(), problem.scene);
        if (!fresh.empty()) {
          parent = std::move(fresh);
          repair_links(field, parent, problem);
        }
      }
      double max_move = 0.0;
      for (std::size_t i = 0; i < before.size(); ++i) {
        const Vec2 d = field.positions()[i] - before[i];
        max_move = std::max({max_move, std::abs(d.x), std::abs(d.y)});
      }
      if (max_move < 1e-3 * problem.sensing.delta) break;
    }
    repair_links(field, parent, problem);
  } catch (const NoFeasibleProjection&) {
    return false;
  }

  result.positions = field.positions();
  result.parent = parent;
  result.objective = field.total();
  return true;
}

}  // namespace

bool verify_solution(const std::vector<Point2>& positions, const FlowVector& flow,
                     const FormationProblem& problem) {
  const int n = problem.n_followers + 1;
  if (static_cast<int>(positions.size()) != n) return false;
  if (flow.n_agents != n) return false;
  for (int i = 0; i < n; ++i)
    if (!point_in_feasible(positions[i], problem.scene)) return false;
  if (problem.side_constraint)
    for (int i = 1; i < n; ++i)
      if (!problem.side_constraint->admits(positions[i], positions[0])) return false;
  const FormationGraph graph = build_graph(positions, problem.C, problem.scene);
  if (!verify_flow(flow, graph)) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 1; j < n; ++j)
      if (flow.at(i, j) > 0 && distance(positions[i], positions[j]) > problem.C + kGeomEps)
        return false;
  return true;
}

FormationSolution solve_initial_formation(const FormationProblem& problem, int restarts,
                                          std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("solve_initial_formation: restarts < 1");
  if (problem.n_followers < 1) throw ValidationError("n_followers", "must be >= 1");
  if (!(problem.C > 0.0)) throw ValidationError("C", "must be positive");
  if (!point_in_feasible(problem.leader_pos, problem.scene))
    throw ValidationError("leader_pos", "not in the feasible space");

  const IntegrationGrid grid =
      IntegrationGrid::make(problem.scene, problem.grid_cell_or_default());

  bool have_best = false;
  RestartResult best;
  int used = 0;
  for (int r = 0; r < restarts; ++r) {
    RestartResult cur;
    if (!run_restart(problem, grid, Rng::child(seed, static_cast<std::uint64_t>(r)), r == 0, cur))
      continue;
    ++used;
    if (!have_best || cur.objective > best.objective) {
      best = std::move(cur);
      have_best = true;
    }
  }
  if (!have_best)
    throw NoFeasibleStart("no restart produced a feasible connected formation");

  FormationSolution sol;
  sol.positions = best.positions;
  sol.flow = flow_from_tree(best.parent);
  sol.objective = best.objective;
  sol.restarts_used = used;
  if (!verify_solution(sol.positions, sol.flow, problem))
    throw std::logic_error("solver produced a solution that fails verification");
  return sol;
}

}  // namespace covform
