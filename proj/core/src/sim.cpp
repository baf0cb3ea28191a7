#include "covform/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace covform {

const char* to_string(StateLabel s) {
  return s == StateLabel::Free ? "free" : "constrained";
}

StateLabel detect_state(const std::vector<Point2>& positions, const Scene& scene, double delta) {
  for (const Point2& p : positions) {
    for (const Polygon& obs : scene.obstacles) {
      if (obs.strictly_inside(p)) return StateLabel::Constrained;
      if (obs.boundary_distance(p) < delta - kGeomEps) return StateLabel::Constrained;
    }
  }
  return StateLabel::Free;
}

double snap_to_lattice(double v) {
  constexpr double kScale = 1099511627776.0;  // 2^40
  return std::nearbyint(v * kScale) / kScale;
}

Point2 snap_to_lattice(Point2 p) { return {snap_to_lattice(p.x), snap_to_lattice(p.y)}; }

void MissionConfig::validate() const {
  if (n_followers < 1) throw ValidationError("n_followers", "must be >= 1");
  if (!(C > 0.0)) throw ValidationError("C", "must be positive");
  if (!(sensing.delta > 0.0)) throw ValidationError("delta", "must be positive");
  if (!(sensing.peak > 0.0) || sensing.peak > 1.0)
    throw ValidationError("sensing.peak", "must be in (0, 1]");
  if (density.value < 0.0) throw ValidationError("density.value", "must be >= 0");
  if (trajectory.size() < 2) throw ValidationError("trajectory", "needs at least 2 waypoints");
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    if (!point_in_feasible(trajectory[k], scene))
      throw ValidationError("trajectory[" + std::to_string(k) + "]", "waypoint not feasible");
    if (k > 0 && distance(trajectory[k], trajectory[k - 1]) > C + kGeomEps)
      throw ValidationError("trajectory[" + std::to_string(k) + "]",
                            "per-step leader displacement exceeds C");
  }
  cpa.validate();
  if (grid_cell < 0.0) throw ValidationError("grid_cell", "must be positive");
  if (side_constraint) {
    const double n = norm(side_constraint->normal);
    if (!(n > 0.0)) throw ValidationError("side_constraint.normal", "must be nonzero");
    // The side region must contain at least one feasible point within C of
    // the first waypoint, otherwise no formation can exist.
    const Point2 leader = trajectory[0];
    bool any = false;
    for (int a = 0; a < 64 && !any; ++a) {
      for (int rr = 1; rr <= 8 && !any; ++rr) {
        const double th = 2.0 * M_PI * a / 64;
        const double rho = C * rr / 8.0;
        const Point2 p = leader + Vec2{rho * std::cos(th), rho * std::sin(th)};
        any = point_in_feasible(p, scene) && side_constraint->admits(p, leader);
      }
    }
    if (!any)
      throw ValidationError("side_constraint",
                            "no feasible point within C of the first waypoint");
  }
}

FormationProblem MissionConfig::problem_at(Point2 leader) const {
  FormationProblem p;
  p.scene = scene;
  p.leader_pos = leader;
  p.n_followers = n_followers;
  p.C = C;
  p.sensing = sensing;
  p.density = density;
  p.side_constraint = side_constraint;
  p.grid_cell = grid_cell;
  p.occlusion = occlusion;
  return p;
}

namespace {

std::vector<Point2> snapped(const std::vector<Point2>& pos) {
  std::vector<Point2> out(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) out[i] = snap_to_lattice(pos[i]);
  return out;
}

}  // namespace

MissionLog run_mission(const MissionConfig& config) {
  config.validate();

  const FormationProblem problem0 = config.problem_at(config.trajectory[0]);
  const FormationSolution seed_solution =
      solve_initial_formation(problem0, config.solver_restarts, config.seed);

  CoverageField field(config.scene,
                      IntegrationGrid::make(config.scene, problem0.grid_cell_or_default()),
                      config.sensing, config.density, config.occlusion);
  field.set_positions(seed_solution.positions);
  cpa_run_on_field(field, config.cpa, problem0);

  std::vector<Point2> positions = snapped(field.positions());
  field.set_positions(positions);

  MissionLog log;
  log.summary.initial_objective = seed_solution.objective;
  log.summary.nominal_objective = field.total();

  const double delta = config.sensing.delta;
  log.records.push_back({0, detect_state(positions, config.scene, delta), positions,
                         field.total(), {}});

  const int steps = static_cast<int>(config.trajectory.size()) - 1;
  for (int k = 0; k < steps; ++k) {
    const Point2 w_next = config.trajectory[k + 1];
    const Vec2 delta_L = w_next - config.trajectory[k];

    std::vector<Point2> translated(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) translated[i] = positions[i] + delta_L;

    const StateLabel cur = detect_state(positions, config.scene, delta);
    const StateLabel nxt = detect_state(translated, config.scene, delta);

    std::vector<ProjectionEvent> events;
    if (cur == StateLabel::Free && nxt == StateLabel::Free) {
      // Maintained formation: exact translation, no re-optimization.
      positions = std::move(translated);
      field.set_positions(positions);
    } else {
      FormationGraph graph = build_graph(positions, config.C, config.scene);
      ReconfigResult rec = construct_connected_graph(ReconfigInput::make(std::move(graph), w_next),
                                                     config.scene, config.C,
                                                     config.side_constraint);
      events = std::move(rec.events);
      field.set_positions(rec.positions);
      cpa_run_on_field(field, config.cpa, config.problem_at(w_next));
      positions = snapped(field.positions());
      field.set_positions(positions);
      log.summary.reconfiguration_count += 1;
      log.summary.projection_count += static_cast<int>(events.size());
    }

    if (!is_connected(build_graph(positions, config.C, config.scene)))
      throw std::logic_error("connectivity lost during mission step");  // must be unreachable

    log.records.push_back({k + 1, detect_state(positions, config.scene, delta), positions,
                           field.total(), std::move(events)});
  }

  for (std::size_t r = 1; r < log.records.size(); ++r)
    if (log.records[r].state != log.records[r - 1].state)
      log.transitions.push_back({log.records[r].t, log.records[r].state});

  log.summary.final_objective = log.records.back().objective;
  return log;
}

}  // namespace covform
