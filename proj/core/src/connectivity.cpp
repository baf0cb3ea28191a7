#include "covform/connectivity.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace covform {

FormationGraph build_graph(const std::vector<Point2>& positions, double C, const Scene& scene) {
  FormationGraph g;
  g.positions = positions;
  g.C = C;
  const std::size_t n = positions.size();
  g.adjacency.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (connected_pair(positions[i], positions[j], C, scene)) {
        g.adjacency[i * n + j] = 1;
        g.adjacency[j * n + i] = 1;
      }
    }
  }
  return g;
}

bool is_connected(const FormationGraph& graph) {
  const int n = graph.size();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && graph.edge(u, v)) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

bool verify_flow(const FlowVector& flow, const FormationGraph& graph) {
  const int n = graph.size();
  if (flow.n_agents != n || flow.rho.size() != static_cast<std::size_t>(n) * n)
    throw DimensionMismatch("flow dimensions do not match graph");
  const int N = n - 1;
  for (int i = 0; i < n; ++i) {
    if (flow.at(i, i) != 0) return false;
    if (flow.at(i, 0) != 0) return false;  // leader receives nothing
    for (int j = 1; j < n; ++j) {
      const int r = flow.at(i, j);
      if (r < 0 || r > N) return false;
      if (r > 0 && !graph.edge(i, j)) return false;  // activation constraint
    }
  }
  for (int j = 1; j < n; ++j) {
    int net = 0;
    for (int i = 0; i < n; ++i) net += flow.at(i, j);
    for (int i = 1; i < n; ++i) net -= flow.at(j, i);
    if (net != 1) return false;
  }
  int source = 0;
  for (int j = 1; j < n; ++j) source += flow.at(0, j);
  return source == N;
}

FlowVector flow_from_tree(const std::vector<int>& parent) {
  const int n = static_cast<int>(parent.size());
  if (n < 1 || parent[0] != -1) throw NotATreeError("parent[0] must be -1");
  std::vector<int> subtree(n, 1);
  // Accumulate subtree sizes bottom-up by walking each leaf-to-root chain.
  std::vector<int> depth(n, -1);
  for (int i = 0; i < n; ++i) {
    int steps = 0;
    int v = i;
    while (v != 0) {
      if (v < 0 || v >= n || parent[v] < 0 || parent[v] >= n)
        throw NotATreeError("parent index out of range");
      v = parent[v];
      if (++steps > n) throw NotATreeError("cycle in parent map");
    }
    depth[i] = steps;
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] > depth[b]; });
  for (int v : order)
    if (v != 0) subtree[parent[v]] += subtree[v];

  FlowVector f = FlowVector::zeros(n);
  for (int j = 1; j < n; ++j) f.at(parent[j], j) = subtree[j];
  return f;
}

PathStructure shortest_paths(const FormationGraph& graph) {
  const int n = graph.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<int> pred(n, -1);
  std::vector<char> done(n, 0);
  dist[0] = 0.0;
  // O(n^2) Dijkstra; team sizes are tiny and the scan order is deterministic.
  for (int round = 0; round < n; ++round) {
    int u = -1;
    double bu = kInf;
    for (int v = 0; v < n; ++v)
      if (!done[v] && dist[v] < bu) {
        bu = dist[v];
        u = v;
      }
    if (u < 0) break;
    done[u] = 1;
    for (int v = 0; v < n; ++v) {
      if (done[v] || !graph.edge(u, v)) continue;
      const double nd = dist[u] + distance(graph.positions[u], graph.positions[v]);
      if (nd < dist[v] || (nd == dist[v] && u < pred[v])) {
        dist[v] = nd;
        pred[v] = u;
      }
    }
  }
  for (int v = 1; v < n; ++v)
    if (!done[v]) throw DisconnectedGraphError("follower " + std::to_string(v) + " unreachable");

  PathStructure ps;
  ps.shortest_path.assign(n, {});
  ps.dist_to_leader.assign(n, 0.0);
  for (int v = 1; v < n; ++v) {
    std::vector<int>& path = ps.shortest_path[v];
    for (int u = v; u != -1; u = pred[u]) path.push_back(u);
    std::reverse(path.begin(), path.end());
    ps.dist_to_leader[v] = dist[v];
  }
  return ps;
}

void up_down_sets(PathStructure& paths) {
  const int n = static_cast<int>(paths.shortest_path.size());
  std::vector<std::vector<char>> down(n, std::vector<char>(n, 0));
  for (int j = 1; j < n; ++j) {
    const auto& path = paths.shortest_path[j];
    for (std::size_t l = 0; l + 1 < path.size(); ++l) down[path[l]][path[l + 1]] = 1;
  }
  paths.downstream.assign(n, {});
  paths.upstream.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (down[i][j]) {
        paths.downstream[i].push_back(j);
        paths.upstream[j].push_back(i);
      }
}

std::vector<int> q_ordering(const PathStructure& paths) {
  const int n = static_cast<int>(paths.shortest_path.size());
  std::vector<int> q;
  std::vector<char> seen(n, 0);
  q.push_back(0);
  seen[0] = 1;
  for (int j = 1; j < n; ++j) {
    for (int v : paths.shortest_path[j]) {
      if (!seen[v]) {
        seen[v] = 1;
        q.push_back(v);
      }
    }
  }
  return q;
}

PathStructure analyze_graph(const FormationGraph& graph) {
  PathStructure ps = shortest_paths(graph);
  up_down_sets(ps);
  ps.q_order = q_ordering(ps);
  return ps;
}

}  // namespace covform
