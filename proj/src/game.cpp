#include "perc/game.hpp"

#include <algorithm>
#include <cmath>

#include "perc/parallel.hpp"

namespace perc {

BoundarySpec BoundarySpec::all(Symbol3 s) {
  switch (s) {
    case Symbol3::kZero: return {BoundaryKind::kAllZero, 0.5, 0, {}};
    case Symbol3::kOne: return {BoundaryKind::kAllOne, 0.5, 0, {}};
    case Symbol3::kQuestion: break;
  }
  return {BoundaryKind::kAllQuestion, 0.5, 0, {}};
}

BoundaryKind parse_boundary_kind(const std::string& name) {
  if (name == "question" || name == "all-question") return BoundaryKind::kAllQuestion;
  if (name == "zero" || name == "all-zero") return BoundaryKind::kAllZero;
  if (name == "one" || name == "all-one") return BoundaryKind::kAllOne;
  if (name == "checkerboard") return BoundaryKind::kCheckerboard;
  if (name == "sampled") return BoundaryKind::kSampled;
  if (name == "explicit") return BoundaryKind::kExplicit;
  throw Error(ErrorCode::kInvalidConfig, "unknown boundary '" + name + "'");
}

// ---------------------------------------------------------------------------
// Region

Region Region::triangle(const GraphFamily& family, int n) {
  if (family.kind() != FamilyKind::kZ2Standard &&
      !(family.kind() == FamilyKind::kZdStandard && family.dim() == 2)) {
    throw Error(ErrorCode::kUnsupportedFamily, "Triangle2D regions need the Z^2 family");
  }
  if (n < 1) throw Error(ErrorCode::kInvalidConfig, "triangle size must be positive");
  Region r(family);
  r.shape_ = RegionShape::kTriangle2D;
  r.depth_ = n;
  r.boundary_layer_ = n;
  for (Coord s = 0; s <= n; ++s) {
    for (Coord x1 = 0; x1 <= s; ++x1) {
      r.sites_.push_back(Site{x1, s - x1});
      r.layers_.push_back(s);
    }
  }
  r.out_off_.assign(r.sites_.size() + 1, 0);
  for (std::size_t i = 0; i < r.sites_.size(); ++i) {
    r.out_off_[i] = r.out_idx_.size();
    if (r.layers_[i] >= n) continue;
    for (const Site& y : out_neighbors(family, r.sites_[i])) r.out_idx_.push_back(*r.index_of(y));
  }
  r.finish();
  return r;
}

Region Region::slab(const GraphFamily& family, int k, std::vector<Coord> sizes) {
  if (k < 0) throw Error(ErrorCode::kInvalidConfig, "slab depth must be non-negative");
  check_torus_sizes(family, sizes);
  Region r(family);
  r.shape_ = RegionShape::kSlab;
  r.depth_ = k;
  r.sizes_ = std::move(sizes);
  r.boundary_layer_ = k;
  const Coord top = k + family.m() - 1;
  const std::size_t volume = box_volume(r.sizes_);
  r.slab_lookup_.assign(static_cast<std::size_t>(top) + 1, std::vector<int>(volume, -1));
  for (Coord layer = 0; layer <= top; ++layer) {
    for (std::size_t b = 0; b < volume; ++b) {
      const auto key = box_key(b, r.sizes_);
      auto x = site_at(family, layer, key);
      if (!x) continue;
      r.slab_lookup_[layer][b] = static_cast<int>(r.sites_.size());
      r.sites_.push_back(std::move(*x));
      r.layers_.push_back(layer);
    }
  }
  r.out_off_.assign(r.sites_.size() + 1, 0);
  for (std::size_t i = 0; i < r.sites_.size(); ++i) {
    r.out_off_[i] = r.out_idx_.size();
    if (r.layers_[i] >= k) continue;
    const std::size_t begin = r.out_idx_.size();
    for (const Site& y : out_neighbors(family, r.sites_[i])) {
      const auto j = r.index_of(y);
      if (!j) throw Error(ErrorCode::kInvalidSite, "out-neighbour " + to_string(y) + " left the slab");
      r.out_idx_.push_back(*j);
    }
    std::vector<int> seen(r.out_idx_.begin() + static_cast<long>(begin), r.out_idx_.end());
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw Error(ErrorCode::kIncompatibleSizes, "torus too small: out-neighbours of " + to_string(r.sites_[i]) +
                                                     " coincide");
    }
  }
  r.finish();
  return r;
}

Region Region::build(const GraphFamily& family, const RegionSpec& spec) {
  return spec.shape == RegionShape::kTriangle2D ? triangle(family, spec.depth)
                                                : slab(family, spec.depth, spec.sizes);
}

void Region::finish() {
  out_off_[sites_.size()] = out_idx_.size();
  boundary_.clear();
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (is_boundary(i)) boundary_.push_back(static_cast<int>(i));
  }
  if (shape_ == RegionShape::kTriangle2D) {
    origin_ = 0;
  } else {
    const std::vector<Coord> zero(sizes_.size(), 0);
    const auto o = index_at(0, zero);
    if (!o) throw Error(ErrorCode::kInvalidSite, "slab has no origin");
    origin_ = *o;
  }
}

std::vector<int> Region::layer_sites(Coord layer) const {
  const auto lo = std::lower_bound(layers_.begin(), layers_.end(), layer);
  const auto hi = std::upper_bound(layers_.begin(), layers_.end(), layer);
  std::vector<int> out;
  for (auto it = lo; it != hi; ++it) out.push_back(static_cast<int>(it - layers_.begin()));
  return out;
}

std::optional<int> Region::index_at(Coord layer, std::span<const Coord> key) const {
  if (shape_ != RegionShape::kSlab || layer < 0 || layer >= static_cast<Coord>(slab_lookup_.size())) {
    return std::nullopt;
  }
  const int idx = slab_lookup_[layer][box_index(key, sizes_)];
  if (idx < 0) return std::nullopt;
  return idx;
}

std::optional<int> Region::index_of(const Site& x) const {
  if (!contains(family_, x)) return std::nullopt;
  if (shape_ == RegionShape::kTriangle2D) {
    const Coord s = x[0] + x[1];
    if (x[0] < 0 || x[1] < 0 || s > depth_) return std::nullopt;
    return static_cast<int>(s * (s + 1) / 2 + x[0]);
  }
  return index_at(layer_of(family_, x), transverse_key(family_, x));
}

Symbol3 OutcomeField::at(const Site& x) const {
  const auto i = region->index_of(x);
  if (!i) throw Error(ErrorCode::kInvalidSite, to_string(x) + " is outside the region");
  return values[*i];
}

// ---------------------------------------------------------------------------
// Solving

std::vector<Symbol3> boundary_values(const Region& region, const BoundarySpec& boundary) {
  const auto& sites = region.boundary_sites();
  std::vector<Symbol3> out;
  out.reserve(sites.size());
  switch (boundary.kind) {
    case BoundaryKind::kAllQuestion:
    case BoundaryKind::kAllZero:
    case BoundaryKind::kAllOne: {
      const Symbol3 s = boundary.kind == BoundaryKind::kAllZero  ? Symbol3::kZero
                        : boundary.kind == BoundaryKind::kAllOne ? Symbol3::kOne
                                                                 : Symbol3::kQuestion;
      out.assign(sites.size(), s);
      break;
    }
    case BoundaryKind::kCheckerboard:
      for (int i : sites) {
        Coord sum = 0;
        for (Coord c : region.site(i).coords) sum += c;
        out.push_back(floor_mod(sum, 2) == 1 ? Symbol3::kOne : Symbol3::kZero);
      }
      break;
    case BoundaryKind::kSampled:
      for (int i : sites) {
        const bool one = uniform_at(boundary.seed, region.site(i).span(), 1) < boundary.prob_one;
        out.push_back(one ? Symbol3::kOne : Symbol3::kZero);
      }
      break;
    case BoundaryKind::kExplicit:
      if (boundary.values.size() != sites.size()) {
        throw Error(ErrorCode::kBoundaryShapeMismatch, "expected " + std::to_string(sites.size()) +
                                                           " boundary values, got " +
                                                           std::to_string(boundary.values.size()));
      }
      out = boundary.values;
      break;
  }
  return out;
}

OutcomeField solve(std::shared_ptr<const Region> region, const std::vector<Symbol3>& boundary,
                   const SiteField& field) {
  const Region& r = *region;
  if (boundary.size() != r.boundary_sites().size()) {
    throw Error(ErrorCode::kBoundaryShapeMismatch, "boundary has the wrong number of values");
  }
  OutcomeField f;
  f.values.assign(r.size(), Symbol3::kQuestion);
  f.closed.assign(r.size(), 0);
  for (std::size_t i = 0; i < r.size(); ++i) f.closed[i] = is_closed(field, r.site(i)) ? 1 : 0;
  const auto& bsites = r.boundary_sites();
  for (std::size_t j = 0; j < bsites.size(); ++j) f.values[bsites[j]] = boundary[j];

  for (std::size_t i = r.size(); i-- > 0;) {
    if (r.is_boundary(i)) continue;
    if (f.closed[i]) {
      f.values[i] = Symbol3::kZero;
      continue;
    }
    bool any_one = false, all_zero = true;
    for (int j : r.out(i)) {
      const Symbol3 v = f.values[j];
      if (v == Symbol3::kOne) any_one = true;
      if (v != Symbol3::kZero) all_zero = false;
    }
    f.values[i] = any_one ? Symbol3::kZero : (all_zero ? Symbol3::kOne : Symbol3::kQuestion);
  }
  f.region = std::move(region);
  return f;
}

OutcomeField solve(std::shared_ptr<const Region> region, const BoundarySpec& boundary, const SiteField& field) {
  const auto values = boundary_values(*region, boundary);
  return solve(std::move(region), values, field);
}

OutcomeField solve_region(const GraphFamily& family, const RegionSpec& spec, const SiteField& field) {
  auto region = std::make_shared<const Region>(Region::build(family, spec));
  return solve(region, spec.boundary, field);
}

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::vector<ProfileRow> draw_density_profile(const GraphFamily& family, const std::vector<int>& depths,
                                             const std::vector<Coord>& sizes, double p,
                                             const std::vector<std::uint64_t>& seeds) {
  std::vector<ProfileRow> rows;
  for (int depth : depths) {
    auto region = std::make_shared<const Region>(Region::slab(family, depth, sizes));
    const auto bottom = region->layer_sites(0);
    const auto boundary = boundary_values(*region, BoundarySpec::all(Symbol3::kQuestion));
    std::vector<double> fractions(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t s) {
      const OutcomeField f = solve(region, boundary, SiteField{seeds[s], p});
      std::size_t q = 0;
      for (int i : bottom) q += f.values[i] == Symbol3::kQuestion;
      fractions[s] = static_cast<double>(q) / static_cast<double>(bottom.size());
    });
    rows.push_back({depth, mean(fractions), standard_error(fractions), static_cast<int>(seeds.size())});
  }
  return rows;
}

SensitivityResult boundary_sensitivity(const GraphFamily& family, int depth, const std::vector<Coord>& sizes,
                                       double p, const std::vector<std::uint64_t>& seeds) {
  if (!family.has_a2()) throw Error(ErrorCode::kUnsupportedFamily, family.name() + " does not satisfy (A2)");
  auto region = std::make_shared<const Region>(Region::slab(family, depth, sizes));
  const auto bottom = region->layer_sites(0);
  const auto zeros = boundary_values(*region, BoundarySpec::all(Symbol3::kZero));
  const auto ones = boundary_values(*region, BoundarySpec::all(Symbol3::kOne));
  std::vector<double> at_origin(seeds.size()), per_site(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    const SiteField field{seeds[s], p};
    const OutcomeField a = solve(region, zeros, field);
    const OutcomeField b = solve(region, ones, field);
    at_origin[s] = a.origin() != b.origin() ? 1.0 : 0.0;
    std::size_t differ = 0;
    for (int i : bottom) differ += a.values[i] != b.values[i];
    per_site[s] = static_cast<double>(differ) / static_cast<double>(bottom.size());
  });
  return {mean(at_origin), standard_error(at_origin), mean(per_site), static_cast<int>(seeds.size())};
}

}  // namespace perc
