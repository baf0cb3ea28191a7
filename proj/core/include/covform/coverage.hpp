#pragma once

#include <vector>

#include "covform/geometry.hpp"

namespace covform {

enum class SensingForm { linear_decay, smooth_poly };

// Radial detection probability: peak at distance 0, zero from delta outward,
// monotonically nonincreasing in between.
//   linear_decay: p0 * (1 - d/delta)
//   smooth_poly:  p0 * (1 - (d/delta)^2)^2   (differentiable at delta)
struct SensingModel {
  double delta = 1.0;
  SensingForm form = SensingForm::linear_decay;
  double peak = 1.0;

  double prob(double d) const {
    if (d >= delta) return 0.0;
    const double r = d / delta;
    if (form == SensingForm::linear_decay) return peak * (1.0 - r);
    const double t = 1.0 - r * r;
    return peak * t * t;
  }
  // dp/dd; for linear_decay callers use finite differences instead.
  double dprob(double d) const {
    if (d >= delta) return 0.0;
    const double r = d / delta;
    if (form == SensingForm::linear_decay) return -peak / delta;
    return peak * 2.0 * (1.0 - r * r) * (-2.0 * d / (delta * delta));
  }
};

struct EventDensity {
  enum class Kind { uniform };
  Kind kind = Kind::uniform;
  double value = 1.0;

  double operator()(Point2) const { return value; }
};

// Midpoint-rule quadrature lattice over the mission rectangle. Cells in the
// last row/column are clipped to the rectangle and weighted by the clipped
// area; the mask marks sample points inside the feasible space.
struct IntegrationGrid {
  double cell_size = 0.0;
  int nx = 0, ny = 0;
  std::vector<Point2> points;
  std::vector<double> weights;
  std::vector<char> feasible;

  static IntegrationGrid make(const Scene& scene, double cell_size);
  std::size_t cells() const { return points.size(); }
};

double detection_prob(Point2 x, Point2 s_i, const SensingModel& model, const Scene& scene,
                      bool occlusion);

double joint_detection(Point2 x, const std::vector<Point2>& s, const SensingModel& model,
                       const Scene& scene, bool occlusion);

double coverage_objective(const std::vector<Point2>& s, const IntegrationGrid& grid,
                          const EventDensity& density, const SensingModel& model,
                          const Scene& scene, bool occlusion);

// dH/ds_i on the fixed grid: analytic chain rule for smooth_poly, central
// finite differences (step 1e-4 * delta) for linear_decay.
Vec2 coverage_gradient(const std::vector<Point2>& s, int agent, const IntegrationGrid& grid,
                       const EventDensity& density, const SensingModel& model,
                       const Scene& scene, bool occlusion);

// Incremental evaluator shared by the formation solver, the CPA and the
// mission engine. Caches per-agent detection probabilities per cell so that
// trying or committing a single-agent move touches only the cells around the
// old and new positions. All sums run in a fixed cell order, so totals are
// bit-identical to a fresh coverage_objective evaluation.
class CoverageField {
 public:
  CoverageField(const Scene& scene, IntegrationGrid grid, SensingModel model,
                EventDensity density, bool occlusion);

  void set_positions(const std::vector<Point2>& positions);
  const std::vector<Point2>& positions() const { return pos_; }
  const IntegrationGrid& grid() const { return grid_; }
  const Scene& scene() const { return *scene_; }
  const SensingModel& model() const { return model_; }
  bool occlusion() const { return occlusion_; }

  double total() const { return total_; }

  // H(positions with agent moved to `to`) - H(positions), without committing.
  double delta_for_move(int agent, Point2 to) const;
  void commit_move(int agent, Point2 to);

  Vec2 gradient(int agent) const;

 private:
  struct Window {
    int ix0, ix1, iy0, iy1;  // inclusive cell ranges
  };
  Window window_around(Point2 p, double radius) const;
  static Window merge(Window a, Window b);
  double phat_at(Point2 agent_pos, std::size_t cell) const;
  void recompute_cell_joint(const Window& w);
  void resum_total();

  const Scene* scene_;
  IntegrationGrid grid_;
  SensingModel model_;
  EventDensity density_;
  bool occlusion_;
  std::vector<Point2> pos_;
  std::vector<std::vector<double>> phat_;  // [agent][cell]
  std::vector<double> joint_;              // P per cell (0 on infeasible cells)
  std::vector<double> wr_;                 // weight * density per cell
  double total_ = 0.0;
};

}  // namespace covform
