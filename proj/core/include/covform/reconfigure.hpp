#pragma once

#include <optional>
#include <vector>

#include "covform/connectivity.hpp"
#include "covform/formation.hpp"

namespace covform {

struct ReconfigInput {
  FormationGraph graph_t;  // connected team graph at time t
  Point2 leader_next;      // s_0(t + eps), feasible
  Vec2 delta_L;            // leader_next - s_0(t)

  static ReconfigInput make(FormationGraph graph, Point2 leader_next) {
    const Vec2 d = leader_next - graph.positions[0];
    return {std::move(graph), leader_next, d};
  }
};

struct ReconfigOptions {
  // The projection source is the agent's current position; setting this
  // projects the translated candidate instead, for comparison runs.
  bool project_translated = false;
  int resolution = 256;
};

struct ProjectionEvent {
  int agent = 0;
  Point2 from;       // s_i(t)
  Point2 candidate;  // s_i(t) + delta_L, the rejected translation
  Point2 projected;  // committed position
  double beyond_translation = 0.0;  // ||projected - candidate||
};

struct ReconfigResult {
  std::vector<Point2> positions;
  std::vector<ProjectionEvent> events;
  std::vector<int> commit_order;
};

// Minimum-effort connected reconfiguration: walk the followers in the
// shortest-path commit order; each keeps its translated candidate when it
// still connects to a committed upstream agent, and is otherwise projected
// onto the union of the committed upstream agents' connection regions. The
// output graph is always connected. Throws ProjectionFailed(i) when no
// feasible projection exists for agent i.
ReconfigResult construct_connected_graph(const ReconfigInput& input, const Scene& scene, double C,
                                         const std::optional<HalfPlane>& side_constraint = {},
                                         const ReconfigOptions& options = {});

}  // namespace covform
