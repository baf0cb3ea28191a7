#include "covform/coverage.hpp"

#include <algorithm>
#include <cmath>

namespace covform {

IntegrationGrid IntegrationGrid::make(const Scene& scene, double cell_size) {
  if (!(cell_size > 0.0)) throw ValidationError("grid_cell", "must be positive");
  const Rect& r = scene.mission_rect;
  IntegrationGrid g;
  g.cell_size = cell_size;
  g.nx = std::max(1, static_cast<int>(std::ceil(r.width() / cell_size - 1e-12)));
  g.ny = std::max(1, static_cast<int>(std::ceil(r.height() / cell_size - 1e-12)));
  g.points.reserve(static_cast<std::size_t>(g.nx) * g.ny);
  g.weights.reserve(g.points.capacity());
  g.feasible.reserve(g.points.capacity());
  for (int iy = 0; iy < g.ny; ++iy) {
    const double ylo = r.y0 + iy * cell_size;
    const double yhi = std::min(r.y1, ylo + cell_size);
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xlo = r.x0 + ix * cell_size;
      const double xhi = std::min(r.x1, xlo + cell_size);
      const Point2 c{0.5 * (xlo + xhi), 0.5 * (ylo + yhi)};
      g.points.push_back(c);
      g.weights.push_back((xhi - xlo) * (yhi - ylo));
      g.feasible.push_back(point_in_feasible(c, scene) ? 1 : 0);
    }
  }
  return g;
}

double detection_prob(Point2 x, Point2 s_i, const SensingModel& model, const Scene& scene,
                      bool occlusion) {
  const double d = distance(x, s_i);
  if (d >= model.delta) return 0.0;
  if (occlusion && segment_blocked(s_i, x, scene)) return 0.0;
  return model.prob(d);
}

double joint_detection(Point2 x, const std::vector<Point2>& s, const SensingModel& model,
                       const Scene& scene, bool occlusion) {
  double miss = 1.0;
  for (Point2 p : s) miss *= 1.0 - detection_prob(x, p, model, scene, occlusion);
  return 1.0 - miss;
}

double coverage_objective(const std::vector<Point2>& s, const IntegrationGrid& grid,
                          const EventDensity& density, const SensingModel& model,
                          const Scene& scene, bool occlusion) {
  CoverageField field(scene, grid, model, density, occlusion);
  field.set_positions(s);
  return field.total();
}

Vec2 coverage_gradient(const std::vector<Point2>& s, int agent, const IntegrationGrid& grid,
                       const EventDensity& density, const SensingModel& model,
                       const Scene& scene, bool occlusion) {
  CoverageField field(scene, grid, model, density, occlusion);
  field.set_positions(s);
  return field.gradient(agent);
}

CoverageField::CoverageField(const Scene& scene, IntegrationGrid grid, SensingModel model,
                             EventDensity density, bool occlusion)
    : scene_(&scene),
      grid_(std::move(grid)),
      model_(model),
      density_(density),
      occlusion_(occlusion) {
  const std::size_t n = grid_.cells();
  joint_.assign(n, 0.0);
  wr_.assign(n, 0.0);
  for (std::size_t c = 0; c < n; ++c)
    if (grid_.feasible[c]) wr_[c] = grid_.weights[c] * density_(grid_.points[c]);
}

CoverageField::Window CoverageField::window_around(Point2 p, double radius) const {
  const Rect& r = scene_->mission_rect;
  const double h = grid_.cell_size;
  const auto clampi = [](int v, int lo, int hi) { return std::min(hi, std::max(lo, v)); };
  Window w;
  w.ix0 = clampi(static_cast<int>(std::floor((p.x - radius - r.x0) / h)) - 1, 0, grid_.nx - 1);
  w.ix1 = clampi(static_cast<int>(std::ceil((p.x + radius - r.x0) / h)) + 1, 0, grid_.nx - 1);
  w.iy0 = clampi(static_cast<int>(std::floor((p.y - radius - r.y0) / h)) - 1, 0, grid_.ny - 1);
  w.iy1 = clampi(static_cast<int>(std::ceil((p.y + radius - r.y0) / h)) + 1, 0, grid_.ny - 1);
  return w;
}

CoverageField::Window CoverageField::merge(Window a, Window b) {
  return {std::min(a.ix0, b.ix0), std::max(a.ix1, b.ix1), std::min(a.iy0, b.iy0),
          std::max(a.iy1, b.iy1)};
}

double CoverageField::phat_at(Point2 agent_pos, std::size_t cell) const {
  const double d = distance(grid_.points[cell], agent_pos);
  if (d >= model_.delta) return 0.0;
  if (occlusion_ && segment_blocked(agent_pos, grid_.points[cell], *scene_)) return 0.0;
  return model_.prob(d);
}

void CoverageField::recompute_cell_joint(const Window& w) {
  for (int iy = w.iy0; iy <= w.iy1; ++iy) {
    for (int ix = w.ix0; ix <= w.ix1; ++ix) {
      const std::size_t c = static_cast<std::size_t>(iy) * grid_.nx + ix;
      if (!grid_.feasible[c]) continue;
      double miss = 1.0;
      for (const auto& row : phat_) miss *= 1.0 - row[c];
      joint_[c] = 1.0 - miss;
    }
  }
}

void CoverageField::resum_total() {
  // Kahan summation in a fixed cell order: deterministic and accurate enough
  // for finite-difference checks on top of the total.
  double acc = 0.0, comp = 0.0;
  for (std::size_t c = 0; c < joint_.size(); ++c) {
    const double term = wr_[c] * joint_[c] - comp;
    const double next = acc + term;
    comp = (next - acc) - term;
    acc = next;
  }
  total_ = acc;
}

void CoverageField::set_positions(const std::vector<Point2>& positions) {
  pos_ = positions;
  phat_.assign(pos_.size(), std::vector<double>(grid_.cells(), 0.0));
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    const Window w = window_around(pos_[i], model_.delta);
    for (int iy = w.iy0; iy <= w.iy1; ++iy)
      for (int ix = w.ix0; ix <= w.ix1; ++ix) {
        const std::size_t c = static_cast<std::size_t>(iy) * grid_.nx + ix;
        if (grid_.feasible[c]) phat_[i][c] = phat_at(pos_[i], c);
      }
  }
  recompute_cell_joint({0, grid_.nx - 1, 0, grid_.ny - 1});
  resum_total();
}

double CoverageField::delta_for_move(int agent, Point2 to) const {
  const Window w = merge(window_around(pos_[agent], model_.delta), window_around(to, model_.delta));
  double acc = 0.0;
  for (int iy = w.iy0; iy <= w.iy1; ++iy) {
    for (int ix = w.ix0; ix <= w.ix1; ++ix) {
      const std::size_t c = static_cast<std::size_t>(iy) * grid_.nx + ix;
      if (!grid_.feasible[c]) continue;
      const double old_p = phat_[agent][c];
      const double new_p = phat_at(to, c);
      if (old_p == 0.0 && new_p == 0.0) continue;
      double miss_others = 1.0;
      for (std::size_t j = 0; j < phat_.size(); ++j)
        if (static_cast<int>(j) != agent) miss_others *= 1.0 - phat_[j][c];
      const double new_joint = 1.0 - miss_others * (1.0 - new_p);
      acc += wr_[c] * (new_joint - joint_[c]);
    }
  }
  return acc;
}

void CoverageField::commit_move(int agent, Point2 to) {
  const Window w = merge(window_around(pos_[agent], model_.delta), window_around(to, model_.delta));
  for (int iy = w.iy0; iy <= w.iy1; ++iy)
    for (int ix = w.ix0; ix <= w.ix1; ++ix) {
      const std::size_t c = static_cast<std::size_t>(iy) * grid_.nx + ix;
      phat_[agent][c] = grid_.feasible[c] ? phat_at(to, c) : 0.0;
    }
  pos_[agent] = to;
  recompute_cell_joint(w);
  resum_total();
}

Vec2 CoverageField::gradient(int agent) const {
  if (model_.form == SensingForm::linear_decay) {
    // p is not differentiable at the support boundary; use central
    // differences of the grid objective itself.
    const double h = 1e-4 * model_.delta;
    const Point2 s = pos_[agent];
    const double gx =
        (delta_for_move(agent, {s.x + h, s.y}) - delta_for_move(agent, {s.x - h, s.y})) / (2 * h);
    const double gy =
        (delta_for_move(agent, {s.x, s.y + h}) - delta_for_move(agent, {s.x, s.y - h})) / (2 * h);
    return {gx, gy};
  }
  const Point2 s = pos_[agent];
  const Window w = window_around(s, model_.delta);
  Vec2 g{0.0, 0.0};
  for (int iy = w.iy0; iy <= w.iy1; ++iy) {
    for (int ix = w.ix0; ix <= w.ix1; ++ix) {
      const std::size_t c = static_cast<std::size_t>(iy) * grid_.nx + ix;
      if (!grid_.feasible[c]) continue;
      const Point2 x = grid_.points[c];
      const double d = distance(x, s);
      if (d >= model_.delta || d < 1e-12) continue;
      if (occlusion_ && phat_[agent][c] == 0.0) continue;  // occluded cell
      double miss_others = 1.0;
      for (std::size_t j = 0; j < phat_.size(); ++j)
        if (static_cast<int>(j) != agent) miss_others *= 1.0 - phat_[j][c];
      // dH/ds_i = sum w R * prod_others(1-p) * (-p'(d)) * (x - s)/d
      const double k = wr_[c] * miss_others * (-model_.dprob(d)) / d;
      g += k * (x - s);
    }
  }
  return g;
}

}  // namespace covform
