#include "covform/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covform {

namespace {

double clamp01(double t) { return std::min(1.0, std::max(0.0, t)); }

double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

bool bbox_overlap(const Rect& r, Point2 a, Point2 b, double pad) {
  const double lox = std::min(a.x, b.x) - pad, hix = std::max(a.x, b.x) + pad;
  const double loy = std::min(a.y, b.y) - pad, hiy = std::max(a.y, b.y) + pad;
  return hix >= r.x0 && lox <= r.x1 && hiy >= r.y0 && loy <= r.y1;
}

// Inclusive segment-segment intersection test, used for polygon validation.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double scale = std::max({norm(b - a), norm(d - c), 1.0});
  const double eps_area = kGeomEps * scale;
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > eps_area && d2 < -eps_area) || (d1 < -eps_area && d2 > eps_area)) &&
      ((d3 > eps_area && d4 < -eps_area) || (d3 < -eps_area && d4 > eps_area)))
    return true;
  const auto on_segment = [&](Point2 p, Point2 q, Point2 r, double o) {
    return std::abs(o) <= eps_area && point_segment_distance(r, p, q) <= kGeomEps;
  };
  return on_segment(c, d, a, d1) || on_segment(c, d, b, d2) ||
         on_segment(a, b, c, d3) || on_segment(a, b, d, d4);
}

// Appends parameter values t along a->b where the segment meets edge c-d.
// Collinear overlaps contribute both overlap endpoints. Over-collection is
// harmless: extra values only split intervals in the midpoint walk.
void collect_crossings(Point2 a, Point2 b, Point2 c, Point2 d, std::vector<double>& out) {
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double len_r = norm(r);
  const double len_s = norm(s);
  if (len_r <= 0.0) return;
  const double denom = cross(r, s);
  const double tol_t = 2.0 * kGeomEps / len_r;
  if (std::abs(denom) > 1e-14 * len_r * len_s) {
    const Vec2 qp = c - a;
    const double t = cross(qp, s) / denom;
    const double u = cross(qp, r) / denom;
    const double tol_u = len_s > 0.0 ? 2.0 * kGeomEps / len_s : 0.0;
    if (t >= -tol_t && t <= 1.0 + tol_t && u >= -tol_u && u <= 1.0 + tol_u)
      out.push_back(clamp01(t));
  } else if (std::abs(cross(c - a, r)) <= 2.0 * kGeomEps * len_r) {
    const double rr = dot(r, r);
    double tc = dot(c - a, r) / rr;
    double td = dot(d - a, r) / rr;
    if (tc > td) std::swap(tc, td);
    const double lo = std::max(0.0, tc);
    const double hi = std::min(1.0, td);
    if (lo <= hi + tol_t) {
      out.push_back(clamp01(lo));
      out.push_back(clamp01(hi));
    }
  }
}

}  // namespace

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return distance(p, a);
  const double t = clamp01(dot(p - a, ab) / len2);
  return distance(p, a + t * ab);
}

Polygon::Polygon(std::vector<Point2> vertices) : verts_(std::move(vertices)) {
  const std::size_t n = verts_.size();
  if (n < 3) throw ValidationError("polygon", "needs at least 3 vertices");
  for (const Point2& v : verts_)
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw ValidationError("polygon", "non-finite vertex coordinate");
  for (std::size_t i = 0; i < n; ++i)
    if (distance(verts_[i], verts_[(i + 1) % n]) <= kGeomEps)
      throw ValidationError("polygon", "consecutive duplicate vertices");

  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) area2 += cross(verts_[i], verts_[(i + 1) % n]);
  if (std::abs(area2) <= kGeomEps)
    throw ValidationError("polygon", "degenerate (zero area)");
  if (area2 < 0.0) std::reverse(verts_.begin(), verts_.end());

  // Spike check on adjacent edges, full intersection check otherwise.
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p0 = verts_[i];
    const Point2 p1 = verts_[(i + 1) % n];
    const Point2 p2 = verts_[(i + 2) % n];
    if (std::abs(cross(p1 - p0, p2 - p1)) <= kGeomEps * norm(p1 - p0) * norm(p2 - p1) &&
        dot(p1 - p0, p2 - p1) < 0.0)
      throw ValidationError("polygon", "self-intersecting (spike)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(verts_[i], verts_[(i + 1) % n], verts_[j], verts_[(j + 1) % n]))
        throw ValidationError("polygon", "self-intersecting");
    }
  }

  bbox_ = {verts_[0].x, verts_[0].y, verts_[0].x, verts_[0].y};
  for (const Point2& v : verts_) {
    bbox_.x0 = std::min(bbox_.x0, v.x);
    bbox_.y0 = std::min(bbox_.y0, v.y);
    bbox_.x1 = std::max(bbox_.x1, v.x);
    bbox_.y1 = std::max(bbox_.y1, v.y);
  }
}

bool Polygon::contains_crossing(Point2 p) const {
  bool in = false;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& vi = verts_[i];
    const Point2& vj = verts_[j];
    if ((vi.y > p.y) != (vj.y > p.y)) {
      const double xint = vj.x + (p.y - vj.y) * (vi.x - vj.x) / (vi.y - vj.y);
      if (p.x < xint) in = !in;
    }
  }
  return in;
}

double Polygon::boundary_distance(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = verts_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    best = std::min(best, point_segment_distance(p, verts_[j], verts_[i]));
  return best;
}

Scene Scene::make(Rect mission_rect, std::vector<Polygon> obstacles) {
  if (!(mission_rect.x1 > mission_rect.x0) || !(mission_rect.y1 > mission_rect.y0))
    throw ValidationError("mission_rect", "must have positive extent");
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    for (const Point2& v : obstacles[k].vertices())
      if (!mission_rect.contains(v))
        throw ValidationError("obstacles[" + std::to_string(k) + "]",
                              "vertex outside the mission rectangle");
  }
  // Interiors must be pairwise disjoint; touching boundaries are fine.
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < obstacles.size(); ++j) {
      const Polygon& A = obstacles[i];
      const Polygon& B = obstacles[j];
      const auto fail = [&] {
        throw ValidationError("obstacles[" + std::to_string(j) + "]",
                              "interior overlaps obstacles[" + std::to_string(i) + "]");
      };
      const auto probe = [&](const Polygon& poly, const Polygon& other) {
        const auto& vs = poly.vertices();
        for (std::size_t a = 0; a < vs.size(); ++a) {
          const Point2 mid = (vs[a] + vs[(a + 1) % vs.size()]) * 0.5;
          if (other.strictly_inside(vs[a]) || other.strictly_inside(mid)) fail();
        }
      };
      probe(A, B);
      probe(B, A);
      const auto& va = A.vertices();
      const auto& vb = B.vertices();
      for (std::size_t a = 0; a < va.size(); ++a) {
        for (std::size_t b = 0; b < vb.size(); ++b) {
          const Point2 a0 = va[a], a1 = va[(a + 1) % va.size()];
          const Point2 b0 = vb[b], b1 = vb[(b + 1) % vb.size()];
          const double d1 = orient(b0, b1, a0), d2 = orient(b0, b1, a1);
          const double d3 = orient(a0, a1, b0), d4 = orient(a0, a1, b1);
          const double ea = kGeomEps * std::max({norm(a1 - a0), norm(b1 - b0), 1.0});
          if (((d1 > ea && d2 < -ea) || (d1 < -ea && d2 > ea)) &&
              ((d3 > ea && d4 < -ea) || (d3 < -ea && d4 > ea)))
            fail();  // proper edge crossing implies interior overlap
        }
      }
    }
  }
  return Scene{mission_rect, std::move(obstacles)};
}

bool point_in_feasible(Point2 p, const Scene& scene) {
  if (!scene.mission_rect.contains(p)) return false;
  for (const Polygon& obs : scene.obstacles)
    if (obs.bbox().contains(p, kGeomEps) && obs.strictly_inside(p)) return false;
  return true;
}

bool segment_blocked(Point2 a, Point2 b, const Scene& scene) {
  // Canonical endpoint order makes the predicate exactly symmetric.
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  if (!scene.mission_rect.contains(a) || !scene.mission_rect.contains(b)) return true;
  if (distance(a, b) <= kGeomEps) {
    for (const Polygon& obs : scene.obstacles)
      if (obs.strictly_inside(a)) return true;
    return false;
  }
  std::vector<double> params;
  for (const Polygon& obs : scene.obstacles) {
    if (!bbox_overlap(obs.bbox(), a, b, kGeomEps)) continue;
    params.clear();
    params.push_back(0.0);
    params.push_back(1.0);
    const auto& vs = obs.vertices();
    for (std::size_t i = 0, j = vs.size() - 1; i < vs.size(); j = i++)
      collect_crossings(a, b, vs[j], vs[i], params);
    std::sort(params.begin(), params.end());
    for (std::size_t k = 0; k + 1 < params.size(); ++k) {
      if (params[k + 1] - params[k] <= 1e-12) continue;
      const Point2 mid = a + (0.5 * (params[k] + params[k + 1])) * (b - a);
      if (obs.strictly_inside(mid)) return true;
    }
  }
  return false;
}

bool connected_pair(Point2 si, Point2 sj, double C, const Scene& scene) {
  if (distance(si, sj) > C + kGeomEps) return false;
  return !segment_blocked(si, sj, scene);
}

Point2 project_to_disk(Point2 x, Point2 center, double radius) {
  const Vec2 d = x - center;
  const double r = norm(d);
  if (r <= radius) return x;
  return center + (radius / r) * d;
}

Point2 project_to_connection_union(Point2 x, const std::vector<Point2>& anchors,
                                   double C, const Scene& scene, int resolution,
                                   const std::function<bool(Point2)>& extra) {
  if (anchors.empty()) throw std::invalid_argument("project_to_connection_union: no anchors");
  if (resolution < 64) throw std::invalid_argument("project_to_connection_union: resolution < 64");

  const auto acceptable = [&](Point2 p) {
    if (!point_in_feasible(p, scene)) return false;
    if (extra && !extra(p)) return false;
    for (Point2 a : anchors)
      if (connected_pair(p, a, C, scene)) return true;
    return false;
  };

  bool have_best = false;
  Point2 best{};
  double best_d = std::numeric_limits<double>::infinity();
  const auto consider = [&](Point2 p) {
    const double d = distance(x, p);
    if (d < best_d && acceptable(p)) {
      best = p;
      best_d = d;
      have_best = true;
    }
  };

  consider(x);
  for (Point2 a : anchors) {
    consider(project_to_disk(x, a, C));
    consider(a);
  }
  for (Point2 a : anchors) {
    for (int k = 0; k < resolution; ++k) {
      const double th = 2.0 * M_PI * k / resolution;
      consider(a + Vec2{C * std::cos(th), C * std::sin(th)});
    }
  }
  // Obstacle edges clipped to each anchor disk, plus obstacle vertices:
  // optima frequently hug obstacle boundaries and corners.
  for (const Polygon& obs : scene.obstacles) {
    const auto& vs = obs.vertices();
    for (const Point2& v : vs) consider(v);
    for (std::size_t i = 0, j = vs.size() - 1; i < vs.size(); j = i++) {
      const Point2 e0 = vs[j];
      const Vec2 ev = vs[i] - e0;
      const double len2 = dot(ev, ev);
      if (len2 <= 0.0) continue;
      for (Point2 a : anchors) {
        // |e0 + u*ev - a|^2 = C^2
        const Vec2 w = e0 - a;
        const double bq = dot(w, ev) / len2;
        const double cq = (dot(w, w) - C * C) / len2;
        const double disc = bq * bq - cq;
        if (disc < 0.0) continue;
        const double sq = std::sqrt(disc);
        const double u0 = std::max(0.0, -bq - sq);
        const double u1 = std::min(1.0, -bq + sq);
        if (u0 > u1) continue;
        const double uproj = clamp01(dot(x - e0, ev) / len2);
        consider(e0 + std::min(u1, std::max(u0, uproj)) * ev);
        consider(e0 + u0 * ev);
        consider(e0 + u1 * ev);
      }
    }
  }

  if (!have_best) throw NoFeasibleProjection("no feasible point in the connection-region union");

  // Coordinate descent with shrinking step. Moves are accepted only if they
  // stay acceptable and strictly reduce the distance to x, so feasibility of
  // the return value is unconditional.
  static const Vec2 dirs[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  double step = C / 8.0;
  const double step_floor = std::max(kGeomEps, 1e-9 * C);
  int evals = 0;
  while (step > step_floor && evals < 20000) {
    bool improved = false;
    for (const Vec2& dir : dirs) {
      const Point2 cand = best + step * dir;
      ++evals;
      if (distance(x, cand) + 1e-15 < best_d && acceptable(cand)) {
        best = cand;
        best_d = distance(x, cand);
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace covform
