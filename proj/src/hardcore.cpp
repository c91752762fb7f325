#include "perc/hardcore.hpp"

#include <algorithm>
#include <memory>

#include "perc/game.hpp"

namespace perc {

std::optional<int> DoublingTorus::vertex_at(std::span<const Coord> key) const {
  const int v = lookup[box_index(key, sizes)];
  if (v < 0) return std::nullopt;
  return v;
}

DoublingTorus build_doubling_torus(const GraphFamily& family, std::vector<Coord> sizes) {
  if (!family.has_phi()) throw Error(ErrorCode::kUnsupportedFamily, family.name() + " has no doubling graph");
  check_torus_sizes(family, sizes);
  const DoublingGraph d(family);
  DoublingTorus t{family, d.geometry(), std::move(sizes), {}, {}, {}};
  const std::size_t volume = box_volume(t.sizes);
  t.lookup.assign(volume, -1);
  std::vector<int> cls;
  for (std::size_t b = 0; b < volume; ++b) {
    DVertex key = box_key(b, t.sizes);
    const auto c = d.class_of(key);
    if (!c) continue;
    t.lookup[b] = static_cast<int>(t.keys.size());
    t.keys.push_back(std::move(key));
    cls.push_back(*c);
  }
  std::vector<std::pair<int, int>> edges;
  for (std::size_t v = 0; v < t.keys.size(); ++v) {
    std::vector<int> nbrs;
    for (const DVertex& o : d.neighbor_offsets(cls[v])) {
      DVertex u = t.keys[v];
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += o[i];
      const auto w = t.vertex_at(u);
      if (!w) throw Error(ErrorCode::kIncompatibleSizes, "torus wrap does not respect the vertex classes");
      nbrs.push_back(*w);
    }
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end() ||
        std::binary_search(nbrs.begin(), nbrs.end(), static_cast<int>(v))) {
      throw Error(ErrorCode::kIncompatibleSizes, "torus too small for a simple doubling graph");
    }
    for (int w : nbrs) {
      if (static_cast<int>(v) < w) edges.emplace_back(static_cast<int>(v), w);
    }
  }
  t.graph = graph_from_edges(static_cast<int>(t.keys.size()), edges, cls, family.m());
  for (int v = 0; v < t.graph.size(); ++v) {
    if (static_cast<int>(t.graph.adj[v].size()) != d.degree()) {
      throw Error(ErrorCode::kIncompatibleSizes, "torus wrap changed the vertex degree");
    }
  }
  return t;
}

void class_update(const Graph& g, HardCoreConfig& config, int cls, UpdateVariant variant,
                  std::span<const std::uint8_t> closed) {
  for (int v = 0; v < g.size(); ++v) {
    if (g.cls[v] != cls) continue;
    std::uint8_t value = 1;
    if (closed[v] || (variant == UpdateVariant::kExtended && config[v])) {
      value = 0;
    } else {
      for (int w : g.adj[v]) {
        if (config[w]) {
          value = 0;
          break;
        }
      }
    }
    config[v] = value;
  }
}

void class_update(const DoublingTorus& torus, HardCoreConfig& config, int cls, double p, UpdateVariant variant,
                  std::uint64_t seed, std::uint64_t tag) {
  const Graph& g = torus.graph;
  std::vector<std::uint8_t> closed(g.size(), 0);
  for (int v = 0; v < g.size(); ++v) {
    if (g.cls[v] == cls) closed[v] = uniform_at(seed, torus.keys[v], tag) < p;
  }
  class_update(g, config, cls, variant, closed);
}

bool is_independent(const Graph& g, const HardCoreConfig& config) {
  for (int v = 0; v < g.size(); ++v) {
    if (!config[v]) continue;
    for (int w : g.adj[v]) {
      if (config[w]) return false;
    }
  }
  return true;
}

InitialState parse_initial_state(const std::string& name) {
  if (name == "empty") return InitialState::kEmpty;
  if (name == "class0" || name == "even") return InitialState::kClass0;
  if (name == "class1" || name == "odd") return InitialState::kClass1;
  throw Error(ErrorCode::kInvalidConfig, "unknown initial state '" + name + "'");
}

HardCoreConfig initial_config(const Graph& g, InitialState state) {
  HardCoreConfig c(g.size(), 0);
  if (state == InitialState::kEmpty) return c;
  const int target = state == InitialState::kClass0 ? 0 : 1;
  for (int v = 0; v < g.size(); ++v) c[v] = g.cls[v] == target;
  return c;
}

std::vector<SweepRow> sweep_chain(const DoublingTorus& torus, double p, UpdateVariant variant, int sweeps,
                                  std::uint64_t seed, InitialState init, int record_every) {
  const Graph& g = torus.graph;
  const int m = g.classes;
  std::vector<int> class_size(m, 0);
  for (int c : g.cls) ++class_size[c];
  HardCoreConfig config = initial_config(g, init);
  std::vector<SweepRow> rows;
  for (int t = 0; t < sweeps; ++t) {
    for (int i = 0; i < m; ++i) {
      class_update(torus, config, i, p, variant, seed, static_cast<std::uint64_t>(t) * m + i);
    }
    if ((t + 1) % std::max(1, record_every) != 0 && t + 1 != sweeps) continue;
    SweepRow row;
    row.sweep = t + 1;
    row.occupation.assign(m, 0.0);
    for (int v = 0; v < g.size(); ++v) row.occupation[g.cls[v]] += config[v];
    for (int i = 0; i < m; ++i) row.occupation[i] /= std::max(1, class_size[i]);
    row.staggered = m >= 2 ? row.occupation[0] - row.occupation[1] : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

CouplingReport game_glauber_coupling_check(const GraphFamily& family, int depth, const std::vector<Coord>& sizes,
                                           double p, std::uint64_t seed) {
  const UpdateVariant variant = family.extended() ? UpdateVariant::kExtended : UpdateVariant::kStandard;
  auto region = std::make_shared<const Region>(Region::slab(family, depth, sizes));
  const SiteField field{seed, p};
  // Boundary drawn from a stream separate from the closures.
  const OutcomeField gamma = solve(region, BoundarySpec::sampled(0.5, mix64(seed ^ 0x5bd1e995ULL)), field);
  const DoublingTorus torus = build_doubling_torus(family, sizes);
  const Graph& g = torus.graph;
  const Coord m = family.m();

  auto site_for = [&](int v, Coord k) {
    const Coord layer = k + floor_mod(g.cls[v] - k, m);
    const auto idx = region->index_at(layer, torus.keys[v]);
    if (!idx) throw Error(ErrorCode::kInvalidSite, "doubling vertex has no slab preimage");
    return *idx;
  };

  CouplingReport rep;
  HardCoreConfig sigma(g.size());
  for (int v = 0; v < g.size(); ++v) sigma[v] = gamma.values[site_for(v, depth)] == Symbol3::kOne;

  std::vector<std::uint8_t> closed(g.size(), 0);
  for (Coord k = depth - 1; k >= 0; --k) {
    const int cls = static_cast<int>(floor_mod(k, m));
    for (int v = 0; v < g.size(); ++v) {
      if (g.cls[v] == cls) closed[v] = gamma.closed[site_for(v, k)];
    }
    class_update(g, sigma, cls, variant, closed);
    for (int v = 0; v < g.size(); ++v) {
      ++rep.comparisons;
      const std::uint8_t expect = gamma.values[site_for(v, k)] == Symbol3::kOne;
      if (sigma[v] != expect) {
        if (rep.mismatches == 0) {
          rep.first_mismatch = "k=" + std::to_string(k) + " vertex " + std::to_string(v);
        }
        ++rep.mismatches;
      }
    }
  }
  rep.ok = rep.mismatches == 0;
  return rep;
}

}  // namespace perc
