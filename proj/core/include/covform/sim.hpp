#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "covform/cpa.hpp"
#include "covform/formation.hpp"
#include "covform/reconfigure.hpp"

namespace covform {

enum class StateLabel { Free, Constrained };

const char* to_string(StateLabel s);

// Constrained iff any sensing disk intersects an obstacle interior; a disk
// exactly tangent to an obstacle boundary still counts as free.
StateLabel detect_state(const std::vector<Point2>& positions, const Scene& scene, double delta);

struct MissionConfig {
  Scene scene;
  std::vector<Point2> trajectory;  // leader waypoints at unit time steps
  int n_followers = 1;
  double C = 1.0;
  SensingModel sensing;
  EventDensity density;
  std::optional<HalfPlane> side_constraint;
  CpaConfig cpa;
  double grid_cell = 0.0;
  std::uint64_t seed = 0;
  bool occlusion = false;
  int solver_restarts = 16;

  void validate() const;  // throws ValidationError
  FormationProblem problem_at(Point2 leader) const;
};

struct MissionRecord {
  int t = 0;
  StateLabel state = StateLabel::Free;
  std::vector<Point2> positions;
  double objective = 0.0;
  std::vector<ProjectionEvent> events;
};

struct StateTransition {
  int t = 0;
  StateLabel to = StateLabel::Free;
};

struct MissionSummary {
  double initial_objective = 0.0;  // solver output before polishing
  double nominal_objective = 0.0;  // polished t=0 formation, the stored nominal
  double final_objective = 0.0;
  int projection_count = 0;
  int reconfiguration_count = 0;
};

struct MissionLog {
  std::vector<MissionRecord> records;
  std::vector<StateTransition> transitions;
  MissionSummary summary;
};

// Positions are snapped to this lattice (2^-40 mission units) after every
// optimization step. Waypoints are snapped at load, so pure-translation
// steps are exact in floating point and maintained formations keep
// bit-identical inter-agent offsets.
double snap_to_lattice(double v);
Point2 snap_to_lattice(Point2 p);

// Full mission: initial formation (solver + polish), then per step either
// exact translation (both endpoint states free) or reconfiguration followed
// by polishing. Deterministic for a fixed config and seed.
MissionLog run_mission(const MissionConfig& config);

}  // namespace covform
