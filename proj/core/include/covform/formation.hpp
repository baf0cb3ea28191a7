#pragma once

#include <cstdint>
#include <optional>

#include "covform/connectivity.hpp"
#include "covform/coverage.hpp"

namespace covform {

// Half-plane constraint anchored at the leader: a position p is admissible
// when dot(normal, p - leader) >= offset. With normal (-1, 0) and offset 0
// followers are restricted to the left of the leader.
struct HalfPlane {
  Vec2 normal{-1.0, 0.0};
  double offset = 0.0;

  bool admits(Point2 p, Point2 leader) const {
    return dot(normal, p - leader) >= offset - kGeomEps;
  }
};

struct FormationProblem {
  Scene scene;
  Point2 leader_pos;
  int n_followers = 1;
  double C = 1.0;
  SensingModel sensing;
  EventDensity density;
  std::optional<HalfPlane> side_constraint;
  double grid_cell = 0.0;  // 0 -> sensing.delta / 20
  bool occlusion = false;

  double grid_cell_or_default() const {
    return grid_cell > 0.0 ? grid_cell : sensing.delta / 20.0;
  }
  // Feasible-space membership plus the side constraint relative to `leader`.
  bool position_admissible(Point2 p, Point2 leader) const {
    if (!point_in_feasible(p, scene)) return false;
    return !side_constraint || side_constraint->admits(p, leader);
  }
};

struct FormationSolution {
  std::vector<Point2> positions;  // leader first
  FlowVector flow;
  double objective = 0.0;
  int restarts_used = 0;
};

// Full constraint check for a candidate (positions, flow) pair: agents
// feasible, followers inside the side constraint, flow feasible on the
// induced graph, positive flows only over in-range visible links.
bool verify_solution(const std::vector<Point2>& positions, const FlowVector& flow,
                     const FormationProblem& problem);

// Best-of-restarts local solver for the initial formation. Each restart
// samples followers near the leader, builds a visibility-aware spanning-tree
// backbone, and interleaves projected gradient ascent on the coverage
// objective with per-link repair projections; the backbone is refreshed
// periodically and finally certified by flow_from_tree. Restart substreams
// are nested, so doubling `restarts` can only improve the result.
// Throws NoFeasibleStart when no restart produces a feasible formation.
FormationSolution solve_initial_formation(const FormationProblem& problem, int restarts,
                                          std::uint64_t seed);

}  // namespace covform
