#include "covform/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace covform {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Joint detection probability to fill color: 4-stop map (white at 0, shades
// of green from 0.25 up), quantized so adjacent equal cells merge into runs.
int heat_band(double p) {
  if (p < 0.05) return -1;
  if (p < 0.25) return 0;
  if (p < 0.5) return 1;
  if (p < 0.75) return 2;
  return 3;
}

const char* kHeatColors[4] = {"#e9f6e3", "#bfe5ac", "#84cc70", "#3f9e46"};

}  // namespace

std::string render_snapshot_svg(const MissionConfig& config, const std::vector<Point2>& positions) {
  const Rect& r = config.scene.mission_rect;
  const auto fy = [&](double y) { return r.y0 + r.y1 - y; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + fmt(r.x0) +
         " " + fmt(r.y0) + " " + fmt(r.width()) + " " + fmt(r.height()) +
         "\" width=\"900\" height=\"" + fmt(900.0 * r.height() / r.width()) + "\">\n";
  svg += "<rect x=\"" + fmt(r.x0) + "\" y=\"" + fmt(r.y0) + "\" width=\"" + fmt(r.width()) +
         "\" height=\"" + fmt(r.height()) + "\" fill=\"#ffffff\"/>\n";

  // Heat layer from the quadrature grid, merged into row runs.
  {
    const double cell =
        config.grid_cell > 0.0 ? config.grid_cell : config.sensing.delta / 20.0;
    const IntegrationGrid g = IntegrationGrid::make(config.scene, cell);
    const double h = g.cell_size;
    svg += "<g stroke=\"none\">\n";
    for (int iy = 0; iy < g.ny; ++iy) {
      int run_start = -1;
      int run_band = -1;
      const auto flush = [&](int ix_end) {
        if (run_band < 0 || run_start < 0) return;
        const double xlo = r.x0 + run_start * h;
        const double xhi = std::min(r.x1, r.x0 + ix_end * h);
        const double ylo = r.y0 + iy * h;
        const double yhi = std::min(r.y1, ylo + h);
        svg += "<rect x=\"" + fmt(xlo) + "\" y=\"" + fmt(fy(yhi)) + "\" width=\"" +
               fmt(xhi - xlo) + "\" height=\"" + fmt(yhi - ylo) + "\" fill=\"" +
               kHeatColors[run_band] + "\"/>\n";
      };
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t c = static_cast<std::size_t>(iy) * g.nx + ix;
        const int band = g.feasible[c]
                             ? heat_band(joint_detection(g.points[c], positions, config.sensing,
                                                         config.scene, config.occlusion))
                             : -1;
        if (band != run_band) {
          flush(ix);
          run_band = band;
          run_start = band >= 0 ? ix : -1;
        }
      }
      flush(g.nx);
    }
    svg += "</g>\n";
  }

  for (const Polygon& obs : config.scene.obstacles) {
    svg += "<polygon points=\"";
    for (const Point2& v : obs.vertices()) svg += fmt(v.x) + "," + fmt(fy(v.y)) + " ";
    svg += "\" fill=\"#9e9e9e\" stroke=\"#424242\" stroke-width=\"0.1\"/>\n";
  }

  if (config.trajectory.size() >= 2) {
    svg += "<polyline points=\"";
    for (const Point2& w : config.trajectory) svg += fmt(w.x) + "," + fmt(fy(w.y)) + " ";
    svg +=
        "\" fill=\"none\" stroke=\"#7b1fa2\" stroke-width=\"0.18\" stroke-dasharray=\"0.9 0.5\"/>\n";
  }

  for (const Point2& p : positions)
    svg += "<circle cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(fy(p.y)) + "\" r=\"" +
           fmt(config.sensing.delta) +
           "\" fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"0.08\" stroke-dasharray=\"0.5 "
           "0.35\" opacity=\"0.55\"/>\n";

  const FormationGraph graph = build_graph(positions, config.C, config.scene);
  for (int i = 0; i < graph.size(); ++i)
    for (int j = i + 1; j < graph.size(); ++j)
      if (graph.edge(i, j))
        svg += "<line x1=\"" + fmt(positions[i].x) + "\" y1=\"" + fmt(fy(positions[i].y)) +
               "\" x2=\"" + fmt(positions[j].x) + "\" y2=\"" + fmt(fy(positions[j].y)) +
               "\" stroke=\"#c62828\" stroke-width=\"0.12\"/>\n";

  const double ra = std::max(0.012 * r.width(), 0.35);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Point2 p = positions[i];
    if (i == 0) {
      // Leader drawn as a triangle.
      svg += "<polygon points=\"" + fmt(p.x) + "," + fmt(fy(p.y) - 1.3 * ra) + " " +
             fmt(p.x - 1.15 * ra) + "," + fmt(fy(p.y) + ra) + " " + fmt(p.x + 1.15 * ra) + "," +
             fmt(fy(p.y) + ra) + "\" fill=\"#1a237e\"/>\n";
      svg += "<text x=\"" + fmt(p.x + 1.4 * ra) + "\" y=\"" + fmt(fy(p.y) - 1.0 * ra) +
             "\" font-size=\"" + fmt(2.2 * ra) + "\" fill=\"#1a237e\">L</text>\n";
    } else {
      svg += "<circle cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(fy(p.y)) + "\" r=\"" + fmt(ra) +
             "\" fill=\"#ffffff\" stroke=\"#1a237e\" stroke-width=\"0.14\"/>\n";
      svg += "<text x=\"" + fmt(p.x) + "\" y=\"" + fmt(fy(p.y) + 0.62 * ra) + "\" font-size=\"" +
             fmt(1.5 * ra) +
             "\" text-anchor=\"middle\" fill=\"#1a237e\">" + std::to_string(i) + "</text>\n";
    }
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace covform
