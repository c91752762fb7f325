#include "perc/graph.hpp"

#include <algorithm>

namespace perc {

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges, std::vector<int> cls, int classes) {
  Graph g;
  g.adj.assign(n, {});
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw Error(ErrorCode::kInvalidConfig, "bad edge");
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& nb : g.adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  if (cls.empty()) cls.assign(n, 0);
  if (static_cast<int>(cls.size()) != n) throw Error(ErrorCode::kInvalidConfig, "class list has the wrong length");
  g.cls = std::move(cls);
  g.classes = classes;
  return g;
}

Graph cycle_graph(int n) {
  if (n < 3) throw Error(ErrorCode::kInvalidConfig, "cycles need at least 3 vertices");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i) {
    edges.emplace_back(i, (i + 1) % n);
    cls[i] = i % 2;
  }
  return graph_from_edges(n, edges, cls, 2);
}

bool classes_independent(const Graph& g) {
  for (int v = 0; v < g.size(); ++v) {
    for (int w : g.adj[v]) {
      if (g.cls[v] == g.cls[w]) return false;
    }
  }
  return true;
}

}  // namespace perc
