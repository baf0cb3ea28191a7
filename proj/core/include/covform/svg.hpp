#pragma once

#include <string>
#include <vector>

#include "covform/sim.hpp"

namespace covform {

// One formation snapshot as an SVG 1.1 document: mission rectangle as the
// viewBox, joint-detection heat layer from the quadrature grid, obstacles,
// leader trajectory, connectivity edges, sensing-disk outlines, a triangle
// for the leader and numbered circles for followers.
std::string render_snapshot_svg(const MissionConfig& config, const std::vector<Point2>& positions);

}  // namespace covform
