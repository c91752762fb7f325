#include "perc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace perc {

namespace {

Coord coord_sum(const Site& x) {
  Coord s = 0;
  for (Coord c : x.coords) s += c;
  return s;
}

Coord sum_of(std::span<const Coord> v) {
  Coord s = 0;
  for (Coord c : v) s += c;
  return s;
}

void require_dim(int d, int lo, int hi, const char* what) {
  if (d < lo || d > hi) {
    throw Error(ErrorCode::kUnsupportedFamily,
                std::string(what) + ": dimension " + std::to_string(d) + " out of range");
  }
}

void require_member(const GraphFamily& family, const Site& x) {
  if (!contains(family, x)) {
    throw Error(ErrorCode::kInvalidSite, to_string(x) + " is not a site of " + family.name());
  }
}

// Sum of coordinates of the sites in layer k for the sum-layered families.
Coord layer_sum(const GraphFamily& family, Coord k) {
  if (family.kind() == FamilyKind::kBinomial) {
    const Coord d = family.dim();
    if (floor_mod(k, 2) == 0) return d * (k / 2);
    return d * ((k - 1) / 2) + family.r();
  }
  return k;
}

std::vector<Site> subset_moves(const Site& x, int d, int min_size, int max_size) {
  std::vector<Site> out;
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < min_size || size > max_size) continue;
    Site y = x;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) y[i] += 1;
    }
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<Coord> difference_key(const Site& x) {
  const std::size_t d = x.dim();
  std::vector<Coord> key(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) key[i] = x[i] - x[d - 1];
  return key;
}

bool same_set(std::vector<Site> a, std::vector<Site> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::vector<Site> without(std::vector<Site> v, const Site& x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

Site translate(const Site& x, std::span<const Coord> c) {
  Site y = x;
  for (std::size_t i = 0; i < c.size(); ++i) y[i] += c[i];
  return y;
}

// Offsets y - x over Out(x), collected from a representative of every
// residue class so that In() can search them.
std::vector<std::vector<Coord>> move_offsets(const GraphFamily& family) {
  std::vector<Site> reps;
  Site origin(std::vector<Coord>(family.dim(), 0));
  reps.push_back(origin);
  if (family.kind() == FamilyKind::kBinomial) {
    Site rep = origin;
    for (int i = 0; i < family.r(); ++i) rep[i] = 1;
    reps.push_back(rep);
  }
  std::vector<std::vector<Coord>> offsets;
  for (const Site& rep : reps) {
    for (const Site& y : out_neighbors(family, rep)) {
      std::vector<Coord> o(family.dim());
      for (int i = 0; i < family.dim(); ++i) o[i] = y[i] - rep[i];
      offsets.push_back(std::move(o));
    }
  }
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  return offsets;
}

}  // namespace

std::string to_string(const Site& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (i) os << ',';
    os << x[i];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// GraphFamily

GraphFamily GraphFamily::z2() { return GraphFamily(FamilyKind::kZ2Standard, 2, 0); }

GraphFamily GraphFamily::zd(int d) {
  require_dim(d, 2, 8, "ZdStandard");
  return GraphFamily(FamilyKind::kZdStandard, d, 0);
}

GraphFamily GraphFamily::even_sublattice(int d) {
  require_dim(d, 2, 8, "EvenSublattice");
  return GraphFamily(FamilyKind::kEvenSublattice, d, 0);
}

GraphFamily GraphFamily::bcc(int d) {
  require_dim(d, 2, 8, "BccLattice");
  return GraphFamily(FamilyKind::kBccLattice, d, 0);
}

GraphFamily GraphFamily::subset_increment(int d) {
  require_dim(d, 2, 8, "SubsetIncrement");
  return GraphFamily(FamilyKind::kSubsetIncrement, d, 0);
}

GraphFamily GraphFamily::binomial(int d, int r) {
  require_dim(d, 2, 8, "Binomial");
  if (r < 1 || r > d - 1) {
    throw Error(ErrorCode::kUnsupportedFamily, "Binomial: need 1 <= r <= d-1");
  }
  return GraphFamily(FamilyKind::kBinomial, d, r);
}

GraphFamily GraphFamily::even_sublattice_extended(int d) {
  require_dim(d, 2, 8, "EvenSublatticeExtended");
  return GraphFamily(FamilyKind::kEvenSublatticeExtended, d, 0);
}

GraphFamily GraphFamily::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) {
      throw Error(ErrorCode::kInvalidConfig, "family '" + std::string(text) + "' needs a dimension");
    }
    try {
      return std::stoi(parts[i]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, "bad number in family '" + std::string(text) + "'");
    }
  };
  const std::string& head = parts[0];
  if (head == "z2") return z2();
  if (head == "zd") return zd(num(1));
  if (head == "even") return even_sublattice(num(1));
  if (head == "bcc") return bcc(num(1));
  if (head == "subset") return subset_increment(num(1));
  if (head == "binomial") return binomial(num(1), num(2));
  if (head == "even-ext") return even_sublattice_extended(num(1));
  throw Error(ErrorCode::kInvalidConfig, "unknown family '" + std::string(text) + "'");
}

std::string GraphFamily::name() const {
  const std::string d = std::to_string(d_);
  switch (kind_) {
    case FamilyKind::kZ2Standard: return "z2";
    case FamilyKind::kZdStandard: return "zd:" + d;
    case FamilyKind::kEvenSublattice: return "even:" + d;
    case FamilyKind::kBccLattice: return "bcc:" + d;
    case FamilyKind::kSubsetIncrement: return "subset:" + d;
    case FamilyKind::kBinomial: return "binomial:" + d + ":" + std::to_string(r_);
    case FamilyKind::kEvenSublatticeExtended: return "even-ext:" + d;
  }
  return "?";
}

int GraphFamily::m() const { return kind_ == FamilyKind::kSubsetIncrement ? d_ : 2; }

int GraphFamily::out_degree() const {
  switch (kind_) {
    case FamilyKind::kZ2Standard: return 2;
    case FamilyKind::kZdStandard: return d_;
    case FamilyKind::kEvenSublattice: return 2 * (d_ - 1);
    case FamilyKind::kBccLattice: return 1 << (d_ - 1);
    case FamilyKind::kSubsetIncrement: return (1 << d_) - 2;
    case FamilyKind::kBinomial: {
      int c = 1;
      for (int i = 0; i < r_; ++i) c = c * (d_ - i) / (i + 1);
      return c;
    }
    case FamilyKind::kEvenSublatticeExtended: return 2 * (d_ - 1) + 1;
  }
  return 0;
}

bool GraphFamily::has_a2() const {
  if (kind_ == FamilyKind::kEvenSublatticeExtended) return false;
  if (kind_ == FamilyKind::kZdStandard && d_ >= 3) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lattice structure

bool contains(const GraphFamily& family, const Site& x) {
  if (static_cast<int>(x.dim()) != family.dim()) return false;
  switch (family.kind()) {
    case FamilyKind::kZ2Standard:
    case FamilyKind::kZdStandard:
    case FamilyKind::kSubsetIncrement:
      return true;
    case FamilyKind::kEvenSublattice:
    case FamilyKind::kEvenSublatticeExtended:
      return floor_mod(coord_sum(x), 2) == 0;
    case FamilyKind::kBccLattice: {
      const Coord parity = floor_mod(x[0], 2);
      for (Coord c : x.coords) {
        if (floor_mod(c, 2) != parity) return false;
      }
      return true;
    }
    case FamilyKind::kBinomial: {
      const Coord res = floor_mod(coord_sum(x), family.dim());
      return res == 0 || res == family.r();
    }
  }
  return false;
}

std::vector<Site> out_neighbors(const GraphFamily& family, const Site& x) {
  require_member(family, x);
  const int d = family.dim();
  std::vector<Site> out;
  out.reserve(family.out_degree());
  switch (family.kind()) {
    case FamilyKind::kZ2Standard:
    case FamilyKind::kZdStandard:
      for (int i = 0; i < d; ++i) {
        Site y = x;
        y[i] += 1;
        out.push_back(std::move(y));
      }
      break;
    case FamilyKind::kEvenSublattice:
    case FamilyKind::kEvenSublatticeExtended:
      for (int i = 0; i + 1 < d; ++i) {
        for (Coord s : {-1, 1}) {
          Site y = x;
          y[i] += s;
          y[d - 1] += 1;
          out.push_back(std::move(y));
        }
      }
      if (family.extended()) {
        Site y = x;
        y[d - 1] += 2;
        out.push_back(std::move(y));
      }
      break;
    case FamilyKind::kBccLattice:
      for (unsigned mask = 0; mask < (1u << (d - 1)); ++mask) {
        Site y = x;
        for (int i = 0; i + 1 < d; ++i) y[i] += (mask & (1u << i)) ? 1 : -1;
        y[d - 1] += 1;
        out.push_back(std::move(y));
      }
      break;
    case FamilyKind::kSubsetIncrement:
      out = subset_moves(x, d, 1, d - 1);
      break;
    case FamilyKind::kBinomial: {
      const int size = floor_mod(coord_sum(x), d) == 0 ? family.r() : d - family.r();
      out = subset_moves(x, d, size, size);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Site> in_neighbors(const GraphFamily& family, const Site& x) {
  require_member(family, x);
  std::vector<Site> in;
  for (const auto& o : move_offsets(family)) {
    Site y = x;
    for (int i = 0; i < family.dim(); ++i) y[i] -= o[i];
    if (!contains(family, y)) continue;
    const auto out = out_neighbors(family, y);
    if (std::binary_search(out.begin(), out.end(), x)) in.push_back(std::move(y));
  }
  std::sort(in.begin(), in.end());
  return in;
}

Coord layer_of(const GraphFamily& family, const Site& x) {
  require_member(family, x);
  const int d = family.dim();
  switch (family.kind()) {
    case FamilyKind::kZ2Standard:
    case FamilyKind::kZdStandard:
    case FamilyKind::kSubsetIncrement:
      return coord_sum(x);
    case FamilyKind::kEvenSublattice:
    case FamilyKind::kEvenSublatticeExtended:
    case FamilyKind::kBccLattice:
      return x[d - 1];
    case FamilyKind::kBinomial: {
      const Coord s = coord_sum(x);
      if (floor_mod(s, d) == 0) return 2 * (s / d);
      return 2 * ((s - family.r()) / d) + 1;
    }
  }
  return 0;
}

Site phi(const GraphFamily& family, const Site& x) {
  if (!family.has_phi()) {
    throw Error(ErrorCode::kUnsupportedFamily, family.name() + " has no automorphism satisfying (A2)");
  }
  require_member(family, x);
  Site y = x;
  switch (family.kind()) {
    case FamilyKind::kEvenSublattice:
    case FamilyKind::kEvenSublatticeExtended:
    case FamilyKind::kBccLattice:
      y[family.dim() - 1] += 2;
      break;
    default:
      for (auto& c : y.coords) c += 1;
      break;
  }
  return y;
}

std::vector<Site> patch(const GraphFamily& family, int radius) {
  const int d = family.dim();
  std::vector<Site> sites;
  Site x(std::vector<Coord>(d, -radius));
  while (true) {
    if (contains(family, x)) sites.push_back(x);
    int i = d - 1;
    while (i >= 0 && x[i] == radius) {
      x[i] = -radius;
      --i;
    }
    if (i < 0) break;
    x[i] += 1;
  }
  return sites;
}

AxiomReport verify_axioms(const GraphFamily& family, int radius) {
  AxiomReport report;
  const auto sites = patch(family, radius);
  report.sites_checked = sites.size();
  const Coord m = family.m();

  auto add = [&](bool& flag, std::string msg) {
    flag = false;
    if (report.violations.size() < 32) report.violations.push_back(std::move(msg));
  };

  for (const Site& x : sites) {
    const Coord k = layer_of(family, x);
    const auto out = out_neighbors(family, x);
    for (const Site& y : out) {
      const Coord dl = layer_of(family, y) - k;
      const bool phi_move = family.extended() && dl == m && y == phi(family, x);
      if ((dl < 1 || dl > m - 1) && !phi_move) {
        add(report.a1, "(A1): " + to_string(y) + " in Out" + to_string(x) + " has layer step " +
                           std::to_string(dl));
      }
    }
    if (!family.has_phi()) continue;

    const Site px = phi(family, x);
    if (layer_of(family, px) != k + m) {
      add(report.a2, "phi does not map layer " + std::to_string(k) + " to layer k+m at " + to_string(x));
    }
    std::vector<Site> mapped;
    for (const Site& y : out) mapped.push_back(phi(family, y));
    if (!same_set(mapped, out_neighbors(family, px))) {
      add(report.a2, "phi is not an automorphism at " + to_string(x));
    }
    if (family.has_a2()) {
      if (!same_set(out, in_neighbors(family, px))) {
        add(report.a2, "(A2): Out" + to_string(x) + " != In(phi(x))");
      }
    } else {
      if (!std::binary_search(out.begin(), out.end(), px)) {
        add(report.a2, "(A2'): phi(x) not in Out" + to_string(x));
      }
      if (!same_set(without(out, px), without(in_neighbors(family, px), x))) {
        add(report.a2, "(A2'): Out(x)\\{phi(x)} != In(phi(x))\\{x} at " + to_string(x));
      }
    }
  }

  if (!family.has_phi()) {
    // Search translation candidates c with |c|_inf <= 2 mapping S_k to S_{k+m'}, m' >= 2.
    const int d = family.dim();
    std::vector<Coord> c(d, -2);
    bool found = false;
    while (!found) {
      if (sum_of(c) >= 2) {
        bool works = true;
        for (const Site& x : sites) {
          if (!same_set(out_neighbors(family, x), in_neighbors(family, translate(x, c)))) {
            works = false;
            break;
          }
        }
        found = works;
      }
      int i = d - 1;
      while (i >= 0 && c[i] == 2) {
        c[i] = -2;
        --i;
      }
      if (i < 0) break;
      c[i] += 1;
    }
    if (!found) {
      add(report.a2, "(A2): no translation x -> x+c with |c|_inf <= 2 satisfies Out(x) = In(x+c) on the patch");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Doubling graph

namespace {

DoublingGeometry geometry_for(const GraphFamily& family) {
  const int d = family.dim();
  switch (family.kind()) {
    case FamilyKind::kZ2Standard:
      return DoublingGeometry::kLine;
    case FamilyKind::kZdStandard:
      if (d == 2) return DoublingGeometry::kLine;
      break;
    case FamilyKind::kEvenSublattice:
    case FamilyKind::kEvenSublatticeExtended:
      return DoublingGeometry::kCubic;
    case FamilyKind::kBccLattice:
      return DoublingGeometry::kBcc;
    case FamilyKind::kSubsetIncrement:
      if (d == 2) return DoublingGeometry::kLine;
      if (d == 3) return DoublingGeometry::kTriangular;
      return DoublingGeometry::kGeneric;
    case FamilyKind::kBinomial:
      if (d == 2) return DoublingGeometry::kLine;
      if (d == 3 && family.r() == 1) return DoublingGeometry::kHexagonal;
      if (d == 4 && family.r() == 1) return DoublingGeometry::kDiamond;
      return DoublingGeometry::kGeneric;
  }
  throw Error(ErrorCode::kUnsupportedFamily, family.name() + " has no doubling graph");
}

std::vector<DVertex> negated(const std::vector<DVertex>& v) {
  std::vector<DVertex> out = v;
  for (auto& o : out) {
    for (auto& c : o) c = -c;
  }
  return out;
}

}  // namespace

DoublingGraph::DoublingGraph(const GraphFamily& family)
    : family_(family), geometry_(geometry_for(family)) {
  const int n = dim();
  const int m = family.m();
  offsets_.assign(m, {});
  switch (geometry_) {
    case DoublingGeometry::kLine:
      offsets_[0] = offsets_[1] = {{-1}, {1}};
      break;
    case DoublingGeometry::kCubic: {
      std::vector<DVertex> o;
      for (int i = 0; i < n; ++i) {
        for (Coord s : {-1, 1}) {
          DVertex v(n, 0);
          v[i] = s;
          o.push_back(v);
        }
      }
      offsets_[0] = offsets_[1] = o;
      break;
    }
    case DoublingGeometry::kBcc: {
      std::vector<DVertex> o;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        DVertex v(n);
        for (int i = 0; i < n; ++i) v[i] = (mask & (1u << i)) ? 1 : -1;
        o.push_back(v);
      }
      offsets_[0] = offsets_[1] = o;
      break;
    }
    case DoublingGeometry::kTriangular: {
      const std::vector<DVertex> o = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}};
      offsets_[0] = offsets_[1] = offsets_[2] = o;
      break;
    }
    case DoublingGeometry::kHexagonal:
      offsets_[0] = {{1, 0}, {0, 1}, {-1, -1}};
      offsets_[1] = negated(offsets_[0]);
      break;
    case DoublingGeometry::kDiamond:
      offsets_[0] = {{1, -1, 1}, {-1, 1, 1}, {-1, -1, -1}, {1, 1, -1}};
      offsets_[1] = negated(offsets_[0]);
      break;
    case DoublingGeometry::kGeneric: {
      // Push the family's moves through the difference map.
      const auto sites = patch(family, 2);
      for (int c = 0; c < m; ++c) {
        for (const Site& x : sites) {
          if (floor_mod(layer_of(family, x), m) != c) continue;
          const auto kx = difference_key(x);
          for (const Site& y : out_neighbors(family, x)) {
            const auto ky = difference_key(y);
            DVertex o(n);
            for (int i = 0; i < n; ++i) o[i] = ky[i] - kx[i];
            offsets_[c].push_back(o);
          }
          break;
        }
      }
      break;
    }
  }
  for (auto& o : offsets_) std::sort(o.begin(), o.end());
}

std::optional<int> DoublingGraph::class_of(std::span<const Coord> v) const {
  if (static_cast<int>(v.size()) != dim()) return std::nullopt;
  switch (geometry_) {
    case DoublingGeometry::kLine:
      return static_cast<int>(floor_mod(v[0], 2));
    case DoublingGeometry::kCubic:
      return static_cast<int>(floor_mod(sum_of(v), 2));
    case DoublingGeometry::kBcc: {
      const Coord parity = floor_mod(v[0], 2);
      for (Coord c : v) {
        if (floor_mod(c, 2) != parity) return std::nullopt;
      }
      return static_cast<int>(parity);
    }
    case DoublingGeometry::kTriangular:
      return static_cast<int>(floor_mod(v[0] + v[1], 3));
    case DoublingGeometry::kHexagonal: {
      const Coord res = floor_mod(v[0] + v[1], 3);
      if (res == 2) return std::nullopt;
      return static_cast<int>(res);
    }
    case DoublingGeometry::kDiamond: {
      const Coord parity = floor_mod(v[0], 2);
      for (Coord c : v) {
        if (floor_mod(c, 2) != parity) return std::nullopt;
      }
      const Coord res = floor_mod(sum_of(v), 4);
      if (res > 1) return std::nullopt;
      return static_cast<int>(res);
    }
    case DoublingGeometry::kGeneric: {
      const Coord res = floor_mod(sum_of(v), family_.dim());
      if (family_.kind() == FamilyKind::kSubsetIncrement) return static_cast<int>(res);
      if (res == 0) return 0;
      if (res == family_.r()) return 1;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool DoublingGraph::adjacent(std::span<const Coord> a, std::span<const Coord> b) const {
  const auto ca = class_of(a);
  if (!ca || !class_of(b) || a.size() != b.size()) return false;
  DVertex diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = b[i] - a[i];
  const auto& o = offsets_[*ca];
  return std::binary_search(o.begin(), o.end(), diff);
}

IsoFormula iso_formula(const GraphFamily& family) {
  switch (family.kind()) {
    case FamilyKind::kEvenSublattice:
    case FamilyKind::kEvenSublatticeExtended:
    case FamilyKind::kBccLattice:
      return IsoFormula::kProjection;
    case FamilyKind::kSubsetIncrement:
      return family.dim() == 3 ? IsoFormula::kTrihex : IsoFormula::kDifference;
    case FamilyKind::kBinomial:
      if (family.dim() == 3 && family.r() == 1) return IsoFormula::kTrihex;
      if (family.dim() == 4 && family.r() == 1) return IsoFormula::kDiamond;
      return IsoFormula::kDifference;
    default:
      return IsoFormula::kDifference;
  }
}

IsoMap make_iso(const GraphFamily& family, Coord k) {
  if (!family.has_phi()) {
    throw Error(ErrorCode::kUnsupportedFamily, family.name() + " has no doubling graph");
  }
  return IsoMap{family, k, iso_formula(family)};
}

std::vector<Coord> transverse_key(const GraphFamily& family, const Site& x) {
  require_member(family, x);
  switch (iso_formula(family)) {
    case IsoFormula::kProjection:
      return std::vector<Coord>(x.coords.begin(), x.coords.end() - 1);
    case IsoFormula::kDiamond:
      return {x[0] - x[1] - x[2] + x[3], -x[0] + x[1] - x[2] + x[3], x[0] + x[1] - x[2] - x[3]};
    case IsoFormula::kDifference:
    case IsoFormula::kTrihex:
      break;
  }
  return difference_key(x);
}

std::optional<Site> site_at(const GraphFamily& family, Coord layer, std::span<const Coord> key) {
  const int d = family.dim();
  if (static_cast<int>(key.size()) != d - 1) return std::nullopt;
  Site x(std::vector<Coord>(d, 0));
  switch (iso_formula(family)) {
    case IsoFormula::kProjection:
      for (int i = 0; i + 1 < d; ++i) x[i] = key[i];
      x[d - 1] = layer;
      break;
    case IsoFormula::kDiamond: {
      const Coord s = layer_sum(family, layer);
      const Coord t = s - sum_of(key);
      const Coord y1 = key[0], y2 = key[1], y3 = key[2];
      if (floor_mod(t, 4) != 0 || floor_mod(y1 + y3, 2) != 0 || floor_mod(y2 + y3, 2) != 0 ||
          floor_mod(y1 + y2, 2) != 0) {
        return std::nullopt;
      }
      const Coord x3 = t / 4;
      x[0] = x3 + (y1 + y3) / 2;
      x[1] = x3 + (y2 + y3) / 2;
      x[2] = x3;
      x[3] = x3 + (y1 + y2) / 2;
      break;
    }
    case IsoFormula::kDifference:
    case IsoFormula::kTrihex: {
      const Coord s = layer_sum(family, layer);
      const Coord t = s - sum_of(key);
      if (floor_mod(t, d) != 0) return std::nullopt;
      const Coord last = t / d;
      for (int i = 0; i + 1 < d; ++i) x[i] = key[i] + last;
      x[d - 1] = last;
      break;
    }
  }
  if (!contains(family, x) || layer_of(family, x) != layer) return std::nullopt;
  return x;
}

DVertex doubling_map(const IsoMap& iso, const Site& x) {
  require_member(iso.family, x);
  const Coord layer = layer_of(iso.family, x);
  if (layer < iso.k || layer > iso.k + iso.family.m() - 1) {
    throw Error(ErrorCode::kSiteOutsideSlab,
                to_string(x) + " (layer " + std::to_string(layer) + ") is not in D_" + std::to_string(iso.k));
  }
  return transverse_key(iso.family, x);
}

Site doubling_preimage(const IsoMap& iso, std::span<const Coord> v) {
  const DoublingGraph graph(iso.family);
  const auto cls = graph.class_of(v);
  if (!cls) throw Error(ErrorCode::kInvalidSite, "not a vertex of the doubling graph");
  const Coord m = iso.family.m();
  const Coord layer = iso.k + floor_mod(*cls - iso.k, m);
  auto x = site_at(iso.family, layer, v);
  if (!x) throw Error(ErrorCode::kInvalidSite, "doubling vertex has no preimage");
  return *x;
}

std::array<double, 2> trihex_point(const Site& x) {
  if (x.dim() != 3) throw Error(ErrorCode::kInvalidSite, "trihex map needs d = 3");
  const double h = std::sqrt(3.0) / 2.0;
  const double a = static_cast<double>(x[0]);
  const double b = static_cast<double>(x[1]);
  const double c = static_cast<double>(x[2]);
  return {a - 0.5 * b - 0.5 * c, h * b - h * c};
}

IsoReport verify_isomorphism(const IsoMap& iso, int radius) {
  IsoReport report;
  const GraphFamily& family = iso.family;
  const DoublingGraph graph(family);
  report.degree = graph.degree();
  const Coord m = family.m();

  auto add = [&](bool& flag, std::string msg) {
    flag = false;
    if (report.violations.size() < 32) report.violations.push_back(std::move(msg));
  };

  std::vector<Site> slab;
  for (Site& x : patch(family, radius)) {
    const Coord l = layer_of(family, x);
    if (l >= iso.k && l <= iso.k + m - 1) slab.push_back(std::move(x));
  }
  report.sites_checked = slab.size();

  std::map<DVertex, Site> image;
  const IsoMap next = make_iso(family, iso.k + 1);
  for (const Site& x : slab) {
    const DVertex v = doubling_map(iso, x);
    const auto cls = graph.class_of(v);
    const Coord l = layer_of(family, x);
    if (!cls || *cls != floor_mod(l, m)) {
      add(report.classes_ok, "image of " + to_string(x) + " is not in class W_(layer mod m)");
    }
    auto [it, inserted] = image.emplace(v, x);
    if (!inserted) add(report.injective, to_string(x) + " and " + to_string(it->second) + " share an image");
    if (doubling_preimage(iso, v) != x) {
      add(report.injective, "preimage of f_k(" + to_string(x) + ") differs");
    }
    // f_k = f_{k+1} on the overlap, f_k = f_{k+1} o phi on S_k.
    const Site& probe = l == iso.k ? phi(family, x) : x;
    if (doubling_map(next, probe) != v) add(report.consistency_ok, "f_k / f_{k+1} disagree at " + to_string(x));
  }

  for (const Site& x : slab) {
    const DVertex vx = doubling_map(iso, x);
    const auto out = out_neighbors(family, x);
    for (const Site& y : out) {
      const Coord ly = layer_of(family, y);
      if (ly > iso.k + m - 1) continue;
      if (family.extended() && y == phi(family, x)) continue;
      ++report.edges_checked;
      if (!graph.adjacent(vx, doubling_map(iso, y))) {
        add(report.edges_ok, "edge " + to_string(x) + "->" + to_string(y) + " has no image edge");
      }
    }
    const auto cls = graph.class_of(vx);
    if (!cls) continue;
    for (const DVertex& o : graph.neighbor_offsets(*cls)) {
      DVertex u = vx;
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += o[i];
      const auto it = image.find(u);
      if (it == image.end()) continue;
      const Site& y = it->second;
      const bool forward = std::binary_search(out.begin(), out.end(), y);
      const auto out_y = out_neighbors(family, y);
      const bool backward = std::binary_search(out_y.begin(), out_y.end(), x);
      if (!forward && !backward) {
        add(report.edges_ok, "image edge at " + to_string(x) + " -- " + to_string(y) + " has no lattice edge");
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Torus helpers

Coord torus_unit(const GraphFamily& family) {
  switch (iso_formula(family)) {
    case IsoFormula::kProjection: return 2;
    case IsoFormula::kDiamond: return 4;
    default: return family.dim();
  }
}

void check_torus_sizes(const GraphFamily& family, std::span<const Coord> sizes) {
  if (static_cast<int>(sizes.size()) != family.dim() - 1) {
    throw Error(ErrorCode::kIncompatibleSizes, family.name() + " needs " + std::to_string(family.dim() - 1) +
                                                   " transverse sizes");
  }
  const Coord unit = torus_unit(family);
  for (Coord s : sizes) {
    if (s < 3 || s % unit != 0) {
      throw Error(ErrorCode::kIncompatibleSizes, "size " + std::to_string(s) + " must be >= 3 and a multiple of " +
                                                     std::to_string(unit) + " for " + family.name());
    }
  }
}

std::vector<Coord> reduce_key(std::span<const Coord> key, std::span<const Coord> sizes) {
  std::vector<Coord> r(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) r[i] = floor_mod(key[i], sizes[i]);
  return r;
}

std::size_t box_index(std::span<const Coord> key, std::span<const Coord> sizes) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    idx = idx * static_cast<std::size_t>(sizes[i]) + static_cast<std::size_t>(floor_mod(key[i], sizes[i]));
  }
  return idx;
}

std::size_t box_volume(std::span<const Coord> sizes) {
  std::size_t v = 1;
  for (Coord s : sizes) v *= static_cast<std::size_t>(s);
  return v;
}

std::vector<Coord> box_key(std::size_t index, std::span<const Coord> sizes) {
  std::vector<Coord> key(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    key[i] = static_cast<Coord>(index % static_cast<std::size_t>(sizes[i]));
    index /= static_cast<std::size_t>(sizes[i]);
  }
  return key;
}

}  // namespace perc
