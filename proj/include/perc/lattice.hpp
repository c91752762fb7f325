#pragma once

// Directed lattice families, their layer partitions, the layer-shifting
// automorphism phi, and the maps from m consecutive layers onto the
// (undirected, m-partite) doubling graph.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perc/error.hpp"

namespace perc {

using Coord = std::int64_t;

struct Site {
  std::vector<Coord> coords;

  Site() = default;
  explicit Site(std::vector<Coord> c) : coords(std::move(c)) {}
  Site(std::initializer_list<Coord> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  Coord operator[](std::size_t i) const { return coords[i]; }
  Coord& operator[](std::size_t i) { return coords[i]; }
  std::span<const Coord> span() const { return coords; }

  auto operator<=>(const Site&) const = default;
  bool operator==(const Site&) const = default;
};

std::string to_string(const Site& x);

enum class FamilyKind {
  kZ2Standard,
  kZdStandard,
  kEvenSublattice,
  kBccLattice,
  kSubsetIncrement,
  kBinomial,
  kEvenSublatticeExtended,
};

class GraphFamily {
 public:
  static GraphFamily z2();
  static GraphFamily zd(int d);
  static GraphFamily even_sublattice(int d);
  static GraphFamily bcc(int d);
  static GraphFamily subset_increment(int d);
  static GraphFamily binomial(int d, int r);
  static GraphFamily even_sublattice_extended(int d);

  // Accepts "z2", "zd:3", "even:3", "bcc:4", "subset:3", "binomial:4:1", "even-ext:3".
  static GraphFamily parse(std::string_view text);
  std::string name() const;

  FamilyKind kind() const { return kind_; }
  int dim() const { return d_; }
  int r() const { return r_; }
  // Layer period: (A1) holds with this m.
  int m() const;
  int out_degree() const;
  bool has_a2() const;
  bool has_a2_prime() const { return kind_ == FamilyKind::kEvenSublatticeExtended; }
  bool has_phi() const { return has_a2() || has_a2_prime(); }
  bool extended() const { return has_a2_prime(); }

  bool operator==(const GraphFamily&) const = default;

 private:
  GraphFamily(FamilyKind kind, int d, int r) : kind_(kind), d_(d), r_(r) {}

  FamilyKind kind_;
  int d_;
  int r_;
};

bool contains(const GraphFamily& family, const Site& x);

// Out(x), sorted lexicographically.
std::vector<Site> out_neighbors(const GraphFamily& family, const Site& x);
// In(x) = {y : x in Out(y)}, sorted lexicographically.
std::vector<Site> in_neighbors(const GraphFamily& family, const Site& x);

Coord layer_of(const GraphFamily& family, const Site& x);
Site phi(const GraphFamily& family, const Site& x);

// All member sites with every coordinate in [-radius, radius].
std::vector<Site> patch(const GraphFamily& family, int radius);

struct AxiomReport {
  bool a1 = true;  // (A1) or (A1') for the extended kind
  bool a2 = true;  // (A2) or (A2')
  std::size_t sites_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the layer and automorphism axioms on a patch. For ZdStandard(d >= 3)
// every translation x -> x + c with |c|_inf <= 2 is tried as phi and the
// report records that none works.
AxiomReport verify_axioms(const GraphFamily& family, int radius);

// ---------------------------------------------------------------------------
// Doubling graph

enum class IsoFormula { kDifference, kProjection, kTrihex, kDiamond };

enum class DoublingGeometry { kLine, kCubic, kBcc, kTriangular, kHexagonal, kDiamond, kGeneric };

using DVertex = std::vector<Coord>;

// Intrinsic description of the doubling graph D: vertex set, class partition
// W_0..W_{m-1}, and neighbour offsets per class.
class DoublingGraph {
 public:
  explicit DoublingGraph(const GraphFamily& family);

  DoublingGeometry geometry() const { return geometry_; }
  const GraphFamily& family() const { return family_; }
  int dim() const { return family_.dim() - 1; }
  int classes() const { return family_.m(); }
  int degree() const { return static_cast<int>(offsets_[0].size()); }

  // Class index of v, or nullopt when v is not a vertex of D.
  std::optional<int> class_of(std::span<const Coord> v) const;
  const std::vector<DVertex>& neighbor_offsets(int cls) const { return offsets_[cls]; }
  bool adjacent(std::span<const Coord> a, std::span<const Coord> b) const;

 private:
  GraphFamily family_;
  DoublingGeometry geometry_;
  std::vector<std::vector<DVertex>> offsets_;
};

struct IsoMap {
  GraphFamily family;
  Coord k;
  IsoFormula formula;
};

IsoFormula iso_formula(const GraphFamily& family);
IsoMap make_iso(const GraphFamily& family, Coord k);

// f_k(x) for x in D_k = S_k u ... u S_{k+m-1}. f_k agrees with f_{k+1} on the
// overlap and f_k(x) = f_{k+1}(phi(x)) on S_k.
DVertex doubling_map(const IsoMap& iso, const Site& x);
// f_k^{-1}(v).
Site doubling_preimage(const IsoMap& iso, std::span<const Coord> v);

// Planar embedding x1(1,0) + x2(-1/2, sqrt3/2) + x3(-1/2, -sqrt3/2), d = 3.
std::array<double, 2> trihex_point(const Site& x);

struct IsoReport {
  bool injective = true;
  bool classes_ok = true;
  bool edges_ok = true;
  bool consistency_ok = true;
  std::size_t sites_checked = 0;
  std::size_t edges_checked = 0;
  int degree = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

IsoReport verify_isomorphism(const IsoMap& iso, int radius);

// ---------------------------------------------------------------------------
// Transverse chart: identifies a layer with Z^{d-1} (restricted to valid keys).
// For families with phi this is the doubling map itself; ZdStandard uses
// difference coordinates. Translations by `torus_unit` multiples along a key
// axis lift to layer-preserving automorphisms of the lattice.

std::vector<Coord> transverse_key(const GraphFamily& family, const Site& x);
std::optional<Site> site_at(const GraphFamily& family, Coord layer, std::span<const Coord> key);
Coord torus_unit(const GraphFamily& family);
// Throws incompatible-sizes unless there are d-1 sizes, each >= 3 and a
// multiple of torus_unit.
void check_torus_sizes(const GraphFamily& family, std::span<const Coord> sizes);

// Index of a key reduced into the box prod [0, sizes_i).
std::size_t box_index(std::span<const Coord> key, std::span<const Coord> sizes);
std::vector<Coord> reduce_key(std::span<const Coord> key, std::span<const Coord> sizes);
std::size_t box_volume(std::span<const Coord> sizes);
std::vector<Coord> box_key(std::size_t index, std::span<const Coord> sizes);

inline Coord floor_mod(Coord a, Coord n) {
  Coord r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace perc
