#pragma once

#include <vector>

#include "covform/geometry.hpp"

namespace covform {

// Undirected formation graph over agent positions. Index 0 is the leader.
struct FormationGraph {
  std::vector<Point2> positions;
  double C = 0.0;
  // adjacency[i*n + j]; symmetric, false diagonal.
  std::vector<char> adjacency;

  int size() const { return static_cast<int>(positions.size()); }
  bool edge(int i, int j) const { return adjacency[static_cast<std::size_t>(i) * positions.size() + j] != 0; }
};

FormationGraph build_graph(const std::vector<Point2>& positions, double C, const Scene& scene);

// Ground-truth connectivity oracle: BFS reachability from the leader.
bool is_connected(const FormationGraph& graph);

// Integer edge flows rho(i, j) for i in {0..N}, j in {1..N}. A feasible flow
// certifies that the graph is connected. No flows enter the leader: column 0
// is structurally zero.
struct FlowVector {
  int n_agents = 0;  // N + 1
  std::vector<int> rho;

  static FlowVector zeros(int n_agents) {
    FlowVector f;
    f.n_agents = n_agents;
    f.rho.assign(static_cast<std::size_t>(n_agents) * n_agents, 0);
    return f;
  }
  int at(int i, int j) const { return rho[static_cast<std::size_t>(i) * n_agents + j]; }
  int& at(int i, int j) { return rho[static_cast<std::size_t>(i) * n_agents + j]; }
};

// Checks the flow feasibility conditions against the graph:
//   - unit net inflow at every follower,
//   - no self loops, entries in [0, N], nothing into the leader,
//   - positive flow only across graph edges,
//   - leader outflow totals N (implied by the above, kept as a sanity check).
// Throws DimensionMismatch when shapes disagree.
bool verify_flow(const FlowVector& flow, const FormationGraph& graph);

// Flow construction from a spanning tree rooted at the leader: the edge into
// each follower carries 1 + |descendants|. The result always passes
// verify_flow on any graph containing the tree edges.
// `parent[0]` must be -1; throws NotATreeError otherwise.
FlowVector flow_from_tree(const std::vector<int>& parent);

// Shortest-path structure from the leader, plus the derived downstream /
// upstream sets and the commit ordering used by the reconfiguration step.
struct PathStructure {
  // shortest_path[i]: leader-first vertex list for follower i (index 0 unused).
  std::vector<std::vector<int>> shortest_path;
  std::vector<double> dist_to_leader;
  std::vector<std::vector<int>> downstream;  // sorted
  std::vector<std::vector<int>> upstream;    // sorted
  std::vector<int> q_order;                  // permutation of {0..N}, starts with 0
};

// Single-source Euclidean shortest paths from the leader; ties broken toward
// the smaller predecessor index so the result is deterministic.
// Throws DisconnectedGraphError when a follower is unreachable.
PathStructure shortest_paths(const FormationGraph& graph);

// Immediate successor/predecessor sets over the shortest-path family.
void up_down_sets(PathStructure& paths);

// Concatenation of the shortest paths, keeping first occurrences: every
// element is preceded by one of its upstream agents.
std::vector<int> q_ordering(const PathStructure& paths);

// shortest_paths + up_down_sets + q_ordering in one call.
PathStructure analyze_graph(const FormationGraph& graph);

}  // namespace covform
