#include <doctest.h>

#include <cmath>

#include "covform/geometry.hpp"
#include "test_helpers.hpp"

using namespace covform;
using covform::testing::box;
using covform::testing::empty_scene;
using covform::testing::random_feasible_point;
using covform::testing::random_scene;

namespace {

// Independent oracle for segment blocking: dense convex-combination
// sampling, feasibility of every sample point.
bool blocked_by_sampling(Point2 a, Point2 b, const Scene& scene, int samples = 10000) {
  for (int k = 0; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    if (!point_in_feasible(a + t * (b - a), scene)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("polygon validation") {
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), ValidationError);
  // bow-tie
  CHECK_THROWS_AS(Polygon({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), ValidationError);
  // clockwise input is normalized to CCW
  Polygon p({{0, 0}, {0, 2}, {2, 2}, {2, 0}});
  double area2 = 0.0;
  const auto& v = p.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) area2 += cross(v[i], v[(i + 1) % v.size()]);
  CHECK(area2 > 0.0);
}

TEST_CASE("scene validation") {
  CHECK_THROWS_AS(Scene::make({0, 0, 10, 10}, {box(5, 5, 15, 8)}), ValidationError);
  CHECK_THROWS_AS(Scene::make({0, 0, 10, 10}, {box(1, 1, 5, 5), box(4, 4, 8, 8)}),
                  ValidationError);
  // touching boundaries are allowed
  CHECK_NOTHROW(Scene::make({0, 0, 10, 10}, {box(1, 1, 5, 5), box(5, 1, 9, 5)}));
}

TEST_CASE("point_in_feasible basics") {
  const Scene plain = empty_scene(10, 10);
  CHECK(point_in_feasible({5, 5}, plain));
  CHECK_FALSE(point_in_feasible({11, 5}, plain));

  const Scene scene = Scene::make({0, 0, 10, 10}, {box(3, 3, 6, 6)});
  CHECK_FALSE(point_in_feasible({4.5, 4.5}, scene));
  // obstacle edges stay feasible: only interiors are removed
  CHECK(point_in_feasible({3.0, 4.0}, scene));
  CHECK(point_in_feasible({3.0, 3.0}, scene));
}

TEST_CASE("segment_blocked basics") {
  const Scene scene = Scene::make({0, 0, 20, 20}, {box(8, 8, 12, 12)});
  CHECK(segment_blocked({5, 10}, {15, 10}, scene));
  CHECK_FALSE(segment_blocked({1, 1}, {5, 3}, scene));
  CHECK_FALSE(segment_blocked({8, 2}, {12, 2}, scene));
  // ends on the boundary, passes through the interior
  CHECK(segment_blocked({8, 8}, {12, 12}, scene));
  // leaves the mission rectangle
  CHECK(segment_blocked({1, 1}, {-1, 1}, scene));
}

TEST_CASE("segment collinear with an obstacle edge is not blocked") {
  const Scene scene = Scene::make({0, 0, 20, 20}, {box(8, 8, 12, 12)});
  const Point2 a{6, 8}, b{14, 8};  // slides along the bottom edge
  CHECK_FALSE(segment_blocked(a, b, scene));
  CHECK_FALSE(blocked_by_sampling(a, b, scene));
  // the same line shifted inside by more than the tolerance is blocked
  CHECK(segment_blocked({6, 8.001}, {14, 8.001}, scene));
}

TEST_CASE("segment through a corner vertex only") {
  const Scene scene = Scene::make({0, 0, 20, 20}, {box(8, 8, 12, 12)});
  CHECK_FALSE(segment_blocked({7, 9}, {9, 7}, scene));  // clips the corner point only
  CHECK(segment_blocked({7, 7}, {13, 13}, scene));      // diagonal through the interior
}

TEST_CASE("segment_blocked agrees with dense sampling on random scenes") {
  Rng rng(42);
  int blocked_count = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Scene scene = random_scene(rng, 3);
    const Point2 a = random_feasible_point(rng, scene);
    const Point2 b = random_feasible_point(rng, scene);
    const bool fast = segment_blocked(a, b, scene);
    const bool slow = blocked_by_sampling(a, b, scene);
    // dense sampling can miss hairline penetrations but never fabricates one
    if (slow) CHECK(fast);
    if (!fast) CHECK_FALSE(slow);
    blocked_count += fast ? 1 : 0;
  }
  CHECK(blocked_count > 20);  // the fuzz actually exercised obstacles
}

TEST_CASE("connected_pair basics and symmetry") {
  const Scene plain = empty_scene(100, 100);
  const double C = 10.0;
  CHECK(connected_pair({10, 10}, {20, 10}, C, plain));          // distance exactly C
  CHECK_FALSE(connected_pair({10, 10}, {20.001, 10}, C, plain));  // 1.0001 C

  const Scene scene = Scene::make({0, 0, 40, 40}, {box(18, 18, 22, 22)});
  CHECK_FALSE(connected_pair({15, 20}, {25, 20}, 20.0, scene));

  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Scene s = random_scene(rng, 3);
    const Point2 a = random_feasible_point(rng, s);
    const Point2 b = random_feasible_point(rng, s);
    const double c = rng.uniform(1.0, 30.0);
    CHECK(connected_pair(a, b, c, s) == connected_pair(b, a, c, s));
    // shrinking C never turns a disconnected pair into a connected one
    if (!connected_pair(a, b, c, s)) CHECK_FALSE(connected_pair(a, b, 0.5 * c, s));
  }
}

TEST_CASE("project_to_disk") {
  const Point2 c{3, 4};
  CHECK(project_to_disk({3.5, 4}, c, 1.0) == Point2{3.5, 4});
  const Point2 p = project_to_disk({c.x + 2.0, c.y}, c, 1.0);
  CHECK(p.x == doctest::Approx(c.x + 1.0));
  CHECK(p.y == doctest::Approx(c.y));
  CHECK(project_to_disk(c, c, 1.0) == c);
}

TEST_CASE("projection union: member point and single-disk reduction") {
  const Scene plain = empty_scene(100, 100);
  const std::vector<Point2> anchors{{50, 50}};
  const double C = 8.0;

  const Point2 inside{54, 52};
  CHECK(project_to_connection_union(inside, anchors, C, plain) == inside);

  const Point2 outside{70, 50};
  const Point2 got = project_to_connection_union(outside, anchors, C, plain);
  const Point2 want = project_to_disk(outside, anchors[0], C);
  CHECK(distance(got, want) < 1e-6);
}

TEST_CASE("projection union: occluded radial direction") {
  // Obstacle between x and the anchor blocks the radial entry point; the
  // projector must find the nearest visible point of the disk instead.
  const Scene scene = Scene::make({0, 0, 60, 60}, {box(28, 27, 32, 33)});
  const std::vector<Point2> anchors{{20, 30}};
  const double C = 10.0;
  const Point2 x{40, 30};

  const Point2 got = project_to_connection_union(x, anchors, C, scene);
  CHECK(point_in_feasible(got, scene));
  CHECK(connected_pair(got, anchors[0], C, scene));

  // Brute-force grid oracle, ~10^6 samples over the disk bounding box.
  const double lo_x = anchors[0].x - C, hi_x = anchors[0].x + C;
  const double lo_y = anchors[0].y - C, hi_y = anchors[0].y + C;
  const int nsteps = 1000;
  const double step = (hi_x - lo_x) / nsteps;
  double oracle = 1e18;
  for (int iy = 0; iy <= nsteps; ++iy) {
    for (int ix = 0; ix <= nsteps; ++ix) {
      const Point2 p{lo_x + ix * step, lo_y + iy * (hi_y - lo_y) / nsteps};
      if (!point_in_feasible(p, scene)) continue;
      if (!connected_pair(p, anchors[0], C, scene)) continue;
      oracle = std::min(oracle, distance(x, p));
    }
  }
  CHECK(distance(x, got) <= oracle + step * std::sqrt(2.0));
}

TEST_CASE("projection union: feasibility always exact, near-optimality bounded") {
  Rng rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const Scene scene = random_scene(rng, 2, 30.0, 30.0);
    const double C = rng.uniform(3.0, 8.0);
    std::vector<Point2> anchors;
    const int n_anchors = rng.uniform_int(1, 3);
    for (int k = 0; k < n_anchors; ++k) anchors.push_back(random_feasible_point(rng, scene));
    const Point2 x{rng.uniform(0.0, 30.0), rng.uniform(0.0, 30.0)};

    const Point2 got = project_to_connection_union(x, anchors, C, scene, 64);

    bool connected_to_anchor = false;
    for (Point2 a : anchors) connected_to_anchor |= connected_pair(got, a, C, scene);
    CHECK(point_in_feasible(got, scene));
    CHECK(connected_to_anchor);

    // sampled optimum over the anchor hull bounding box
    double lox = x.x, hix = x.x, loy = x.y, hiy = x.y;
    for (Point2 a : anchors) {
      lox = std::min(lox, a.x - C);
      hix = std::max(hix, a.x + C);
      loy = std::min(loy, a.y - C);
      hiy = std::max(hiy, a.y + C);
    }
    const int n = 120;
    const double sx = (hix - lox) / n, sy = (hiy - loy) / n;
    double best = 1e18;
    for (int iy = 0; iy <= n; ++iy) {
      for (int ix = 0; ix <= n; ++ix) {
        const Point2 p{lox + ix * sx, loy + iy * sy};
        if (!point_in_feasible(p, scene)) continue;
        bool conn = false;
        for (Point2 a : anchors)
          if (connected_pair(p, a, C, scene)) {
            conn = true;
            break;
          }
        if (conn) best = std::min(best, distance(x, p));
      }
    }
    CHECK(distance(x, got) <= best + 2.0 * std::max(sx, sy));
  }
}

TEST_CASE("agent may sit exactly on an obstacle vertex and connect around it") {
  const Scene scene = Scene::make({0, 0, 20, 20}, {box(8, 8, 12, 12)});
  const Point2 corner{8, 8};
  CHECK(point_in_feasible(corner, scene));
  CHECK(connected_pair(corner, {5, 8}, 5.0, scene));
  CHECK(connected_pair(corner, {8, 5}, 5.0, scene));
}
