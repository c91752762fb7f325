#pragma once

// Class-update (Glauber) dynamics of the hard-core model on finite tori of
// doubling graphs, and the pathwise coupling with the game recursion.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perc/graph.hpp"
#include "perc/lattice.hpp"
#include "perc/percolation.hpp"

namespace perc {

struct DoublingTorus {
  GraphFamily family;
  DoublingGeometry geometry;
  std::vector<Coord> sizes;
  Graph graph;
  std::vector<DVertex> keys;     // transverse key of each vertex, inside the box
  std::vector<int> lookup;       // box index -> vertex or -1

  std::optional<int> vertex_at(std::span<const Coord> key) const;
};

// Vertices are the box keys that are doubling-graph vertices; edges join
// keys differing by a neighbour offset modulo the sizes.
DoublingTorus build_doubling_torus(const GraphFamily& family, std::vector<Coord> sizes);

using HardCoreConfig = std::vector<std::uint8_t>;

// Updates every vertex of class `cls`: 0 if closed[v] or a neighbour is
// occupied (Extended: or v was occupied), else 1. closed[v] is read for
// class vertices only.
void class_update(const Graph& g, HardCoreConfig& config, int cls, UpdateVariant variant,
                  std::span<const std::uint8_t> closed);

// Same, drawing closed[v] = uniform_at(seed, keys[v], tag) < p.
void class_update(const DoublingTorus& torus, HardCoreConfig& config, int cls, double p, UpdateVariant variant,
                  std::uint64_t seed, std::uint64_t tag);

bool is_independent(const Graph& g, const HardCoreConfig& config);

enum class InitialState { kEmpty, kClass0, kClass1 };
InitialState parse_initial_state(const std::string& name);
HardCoreConfig initial_config(const Graph& g, InitialState state);

struct SweepRow {
  int sweep = 0;
  std::vector<double> occupation;  // per class
  double staggered = 0.0;          // occupation[0] - occupation[1] (signed)
};

// Sweep t updates classes 0..m-1 in order; class i uses tag t*m + i.
// Rows are recorded after every `record_every`-th sweep and after the last.
std::vector<SweepRow> sweep_chain(const DoublingTorus& torus, double p, UpdateVariant variant, int sweeps,
                                  std::uint64_t seed, InitialState init, int record_every = 1);

struct CouplingReport {
  bool ok = true;
  std::size_t comparisons = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};

// Solves the 2-valued game recursion on Slab(K) with a sampled {0,1}
// boundary and replays it as class updates on the doubling torus, checking
// sigma_k(v) = gamma(f_k^{-1}(v)) for every k from K down to 0.
CouplingReport game_glauber_coupling_check(const GraphFamily& family, int depth, const std::vector<Coord>& sizes,
                                           double p, std::uint64_t seed);

}  // namespace perc
