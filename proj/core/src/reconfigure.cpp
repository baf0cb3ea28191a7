#include "covform/reconfigure.hpp"

#include <stdexcept>

namespace covform {

ReconfigResult construct_connected_graph(const ReconfigInput& input, const Scene& scene, double C,
                                         const std::optional<HalfPlane>& side_constraint,
                                         const ReconfigOptions& options) {
  const FormationGraph& graph = input.graph_t;
  if (!is_connected(graph)) throw NotConnectedInput("construct_connected_graph: graph at t");
  if (!point_in_feasible(input.leader_next, scene))
    throw std::invalid_argument("construct_connected_graph: leader_next not feasible");

  const PathStructure ps = analyze_graph(graph);
  const int n = graph.size();

  ReconfigResult result;
  result.positions = graph.positions;
  result.positions[0] = input.leader_next;
  result.commit_order = ps.q_order;
  std::vector<char> committed(n, 0);
  committed[0] = 1;

  const auto admissible = [&](Point2 p) {
    return !side_constraint || side_constraint->admits(p, input.leader_next);
  };

  for (int idx = 1; idx < n; ++idx) {
    const int i = ps.q_order[idx];
    std::vector<Point2> anchors;
    for (int v : ps.upstream[i])
      if (committed[v]) anchors.push_back(result.positions[v]);
    if (anchors.empty())
      throw std::logic_error("commit order left agent without a committed upstream agent");

    const Point2 candidate = graph.positions[i] + input.delta_L;
    bool keep = admissible(candidate);
    if (keep) {
      keep = false;
      for (const Point2& a : anchors)
        if (connected_pair(candidate, a, C, scene)) {
          keep = true;
          break;
        }
    }

    if (keep) {
      result.positions[i] = candidate;
    } else {
      const Point2 source = options.project_translated ? candidate : graph.positions[i];
      Point2 projected;
      try {
        std::function<bool(Point2)> extra;
        if (side_constraint) {
          const Point2 leader = input.leader_next;
          const HalfPlane hp = *side_constraint;
          extra = [hp, leader](Point2 p) { return hp.admits(p, leader); };
        }
        projected =
            project_to_connection_union(source, anchors, C, scene, options.resolution, extra);
      } catch (const NoFeasibleProjection& e) {
        throw ProjectionFailed(i, e.what());
      }
      result.positions[i] = projected;
      result.events.push_back(
          {i, graph.positions[i], candidate, projected, distance(projected, candidate)});
    }
    committed[i] = 1;
  }

  if (!is_connected(build_graph(result.positions, C, scene)))
    throw std::logic_error("reconfigured graph is disconnected");
  return result;
}

}  // namespace covform
