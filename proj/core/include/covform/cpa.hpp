#pragma once

#include <utility>
#include <vector>

#include "covform/formation.hpp"

namespace covform {

struct CpaConfig {
  double step_init = 0.0;
  double step_min = 0.0;
  int max_sweeps = 200;
  double tol = 0.0;  // sweep-level H improvement threshold

  static CpaConfig defaults_for(const SensingModel& sensing, const Scene& scene) {
    CpaConfig c;
    c.step_init = 0.5 * sensing.delta;
    c.step_min = 1e-3 * sensing.delta;
    c.max_sweeps = 200;
    c.tol = 1e-4 * scene.mission_rect.area();
    return c;
  }
  void validate() const;
};

// One follower update: line search along the coverage gradient over a
// shrinking step ladder. A candidate is committed only if it stays in the
// feasible space and side constraint, keeps the team graph connected
// (checked by BFS on the candidate graph) and strictly increases H. The
// leader never moves, and connectivity holds at exit unconditionally.
// Throws NotConnectedInput when the input graph is disconnected.
std::pair<std::vector<Point2>, bool> cpa_step(const std::vector<Point2>& state, int follower,
                                              const CpaConfig& config,
                                              const FormationProblem& problem);

// Round-robin sweeps of cpa_step over all followers until a full sweep
// improves H by less than `tol` or the sweep budget runs out. The returned
// trace starts with the initial H and appends one value per improving sweep.
std::pair<std::vector<Point2>, std::vector<double>> cpa_run(const std::vector<Point2>& state,
                                                            const CpaConfig& config,
                                                            const FormationProblem& problem);

// Field-reusing variants for callers that already maintain a CoverageField
// positioned at the current state (the mission engine and the solver).
bool cpa_step_on_field(CoverageField& field, int follower, const CpaConfig& config,
                       const FormationProblem& problem);
std::vector<double> cpa_run_on_field(CoverageField& field, const CpaConfig& config,
                                     const FormationProblem& problem);

}  // namespace covform
