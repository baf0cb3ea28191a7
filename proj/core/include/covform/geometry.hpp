#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "covform/errors.hpp"

namespace covform {

// Absolute tolerance for all geometric predicates, in mission units.
// A segment counts as blocked only if it penetrates an obstacle interior
// deeper than this.
inline constexpr double kGeomEps = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  Vec2 operator/(double k) const { return {x / k, y / k}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2&) const = default;
};

using Point2 = Vec2;

inline Vec2 operator*(double k, Vec2 v) { return v * k; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

double point_segment_distance(Point2 p, Point2 a, Point2 b);

// Axis-aligned mission rectangle.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(Point2 p, double eps = kGeomEps) const {
    return p.x >= x0 - eps && p.x <= x1 + eps && p.y >= y0 - eps && p.y <= y1 + eps;
  }
};

// Simple (non-self-intersecting) polygon, vertices normalized to CCW order.
// Validity is checked once at construction, not at every query.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }
  const Rect& bbox() const { return bbox_; }

  // Even-odd membership; result at boundary points is arbitrary, callers
  // combine with boundary_distance for robust strict/closed tests.
  bool contains_crossing(Point2 p) const;
  double boundary_distance(Point2 p) const;

  bool strictly_inside(Point2 p, double eps = kGeomEps) const {
    return contains_crossing(p) && boundary_distance(p) > eps;
  }
  bool on_or_inside(Point2 p, double eps = kGeomEps) const {
    return contains_crossing(p) || boundary_distance(p) <= eps;
  }

 private:
  std::vector<Point2> verts_;
  Rect bbox_;
};

// Mission rectangle plus obstacles. The feasible space is the rectangle
// minus obstacle interiors; obstacle boundaries remain feasible.
struct Scene {
  Rect mission_rect;
  std::vector<Polygon> obstacles;

  // Validates rectangle extent, containment of obstacles in the rectangle
  // and pairwise disjointness of obstacle interiors.
  static Scene make(Rect mission_rect, std::vector<Polygon> obstacles);
};

bool point_in_feasible(Point2 p, const Scene& scene);

// True iff some point of segment a-b leaves the feasible space by more than
// kGeomEps. Grazing an obstacle boundary does not block.
bool segment_blocked(Point2 a, Point2 b, const Scene& scene);

// Connectivity predicate: within range C and unobstructed line of sight.
bool connected_pair(Point2 si, Point2 sj, double C, const Scene& scene);

Point2 project_to_disk(Point2 x, Point2 center, double radius);

// Nearest point of the union of the anchors' connection regions that is
// feasible, found by candidate generation plus coordinate-descent
// refinement. The result is guaranteed connected to at least one anchor;
// optimality is approximate with a gap bounded by the sampling resolution.
// `extra` further restricts acceptable points (e.g. a half-plane constraint).
// Throws NoFeasibleProjection when no acceptable candidate exists.
Point2 project_to_connection_union(Point2 x, const std::vector<Point2>& anchors,
                                   double C, const Scene& scene, int resolution = 256,
                                   const std::function<bool(Point2)>& extra = {});

}  // namespace covform
