#pragma once

// Small undirected graphs with a vertex-class partition, shared by the exact
// Gibbs computations and the class-update dynamics.

#include <cstdint>
#include <vector>

#include "perc/error.hpp"

namespace perc {

struct Graph {
  std::vector<std::vector<int>> adj;
  std::vector<int> cls;  // class index per vertex
  int classes = 1;

  int size() const { return static_cast<int>(adj.size()); }
};

enum class UpdateVariant { kStandard, kExtended };

// Standard: lambda = 1/p - 1.  Extended: lambda = 1 - p.
inline double activity_from_p(double p, UpdateVariant v) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::kDomain, "p must lie in (0,1)");
  return v == UpdateVariant::kStandard ? 1.0 / p - 1.0 : 1.0 - p;
}

inline double p_from_activity(double lambda, UpdateVariant v) {
  if (v == UpdateVariant::kStandard) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::kDomain, "activity must be positive");
    return 1.0 / (1.0 + lambda);
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kDomain, "extended update needs activity in [0,1]");
  }
  return 1.0 - lambda;
}

// Undirected simple graph from an edge list; classes default to a single class.
Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges, std::vector<int> cls = {},
                       int classes = 1);
Graph cycle_graph(int n);  // classes = parity (n even)
// True iff no edge joins two vertices of the same class.
bool classes_independent(const Graph& g);

}  // namespace perc
