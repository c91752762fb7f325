#pragma once

// Backward induction of game outcomes on finite regions. Values use the
// recoding W = 0, L = 1, D = ?; closed sites take 0.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perc/lattice.hpp"
#include "perc/percolation.hpp"
#include "perc/symbols.hpp"

namespace perc {

enum class BoundaryKind { kAllQuestion, kAllZero, kAllOne, kCheckerboard, kSampled, kExplicit };

struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::kAllQuestion;
  double prob_one = 0.5;      // kSampled: iid with P(1) = prob_one
  std::uint64_t seed = 0;     // kSampled
  std::vector<Symbol3> values;  // kExplicit, in Region::boundary_sites() order

  static BoundarySpec all(Symbol3 s);
  static BoundarySpec checkerboard() { return {BoundaryKind::kCheckerboard, 0.5, 0, {}}; }
  static BoundarySpec sampled(double prob_one, std::uint64_t seed) {
    return {BoundaryKind::kSampled, prob_one, seed, {}};
  }
  static BoundarySpec explicit_values(std::vector<Symbol3> v) { return {BoundaryKind::kExplicit, 0.5, 0, std::move(v)}; }
};

BoundaryKind parse_boundary_kind(const std::string& name);

enum class RegionShape { kTriangle2D, kSlab };

struct RegionSpec {
  RegionShape shape = RegionShape::kTriangle2D;
  int depth = 0;             // N for the triangle, K for the slab
  std::vector<Coord> sizes;  // transverse torus sizes (slab)
  BoundarySpec boundary;

  static RegionSpec triangle(int n, BoundarySpec b) { return {RegionShape::kTriangle2D, n, {}, std::move(b)}; }
  static RegionSpec slab(int k, std::vector<Coord> sizes, BoundarySpec b) {
    return {RegionShape::kSlab, k, std::move(sizes), std::move(b)};
  }
};

// Finite region with sites sorted by layer. Triangle2D(N) is
// {x in Z_+^2 : x1 + x2 <= N} with boundary on x1 + x2 = N. Slab(K) holds
// layers 0..K+m-1 of the family with the transverse directions wrapped on a
// torus; layers K..K+m-1 form the boundary.
class Region {
 public:
  static Region triangle(const GraphFamily& family, int n);
  static Region slab(const GraphFamily& family, int k, std::vector<Coord> sizes);
  static Region build(const GraphFamily& family, const RegionSpec& spec);

  const GraphFamily& family() const { return family_; }
  RegionShape shape() const { return shape_; }
  int depth() const { return depth_; }
  const std::vector<Coord>& sizes() const { return sizes_; }

  std::size_t size() const { return sites_.size(); }
  const Site& site(std::size_t i) const { return sites_[i]; }
  Coord layer(std::size_t i) const { return layers_[i]; }
  bool is_boundary(std::size_t i) const { return layers_[i] >= boundary_layer_; }
  std::span<const int> out(std::size_t i) const {
    return {out_idx_.data() + out_off_[i], out_idx_.data() + out_off_[i + 1]};
  }
  const std::vector<int>& boundary_sites() const { return boundary_; }
  // Sites of one layer, in index order.
  std::vector<int> layer_sites(Coord layer) const;
  Coord top_layer() const { return layers_.empty() ? 0 : layers_.back(); }

  // Index of a site (slab: any representative, reduced onto the torus).
  std::optional<int> index_of(const Site& x) const;
  // Slab: index of the site with the given layer and transverse key.
  std::optional<int> index_at(Coord layer, std::span<const Coord> key) const;
  int origin() const { return origin_; }

 private:
  Region(const GraphFamily& family) : family_(family) {}
  void finish();

  GraphFamily family_;
  RegionShape shape_ = RegionShape::kTriangle2D;
  int depth_ = 0;
  std::vector<Coord> sizes_;
  Coord boundary_layer_ = 0;
  std::vector<Site> sites_;
  std::vector<Coord> layers_;
  std::vector<std::size_t> out_off_;
  std::vector<int> out_idx_;
  std::vector<int> boundary_;
  std::vector<std::vector<int>> slab_lookup_;  // [layer][box index] -> site or -1
  int origin_ = -1;
};

struct OutcomeField {
  std::shared_ptr<const Region> region;
  std::vector<Symbol3> values;
  std::vector<std::uint8_t> closed;

  Symbol3 at(const Site& x) const;
  Symbol3 origin() const { return values[region->origin()]; }
};

std::vector<Symbol3> boundary_values(const Region& region, const BoundarySpec& boundary);

// Solves with the given boundary values (one per boundary site).
OutcomeField solve(std::shared_ptr<const Region> region, const std::vector<Symbol3>& boundary,
                   const SiteField& field);
OutcomeField solve(std::shared_ptr<const Region> region, const BoundarySpec& boundary, const SiteField& field);
OutcomeField solve_region(const GraphFamily& family, const RegionSpec& spec, const SiteField& field);

struct ProfileRow {
  int depth = 0;
  double q_fraction = 0.0;
  double stderr_ = 0.0;
  int seeds = 0;
};

// Mean fraction of layer-0 sites labelled ? under the AllQuestion boundary.
std::vector<ProfileRow> draw_density_profile(const GraphFamily& family, const std::vector<int>& depths,
                                             const std::vector<Coord>& sizes, double p,
                                             const std::vector<std::uint64_t>& seeds);

struct SensitivityResult {
  double origin_fraction = 0.0;  // seeds where AllZero and AllOne disagree at the origin
  double origin_stderr = 0.0;
  double site_fraction = 0.0;    // disagreement averaged over layer-0 sites and seeds
  int seeds = 0;
};

SensitivityResult boundary_sensitivity(const GraphFamily& family, int depth, const std::vector<Coord>& sizes,
                                       double p, const std::vector<std::uint64_t>& seeds);

// Binary P6 image of a Triangle2D outcome field: column x1, row N - x2.
std::string render_ppm_bytes(const OutcomeField& field);
void render_outcomes(const OutcomeField& field, const std::string& path);

}  // namespace perc
