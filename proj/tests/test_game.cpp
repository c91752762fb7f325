#include <memory>
#include <random>

#include "doctest.h"
#include "perc/game.hpp"

using namespace perc;

namespace {

constexpr Symbol3 k0 = Symbol3::kZero;
constexpr Symbol3 kQ = Symbol3::kQuestion;
constexpr Symbol3 k1 = Symbol3::kOne;

std::shared_ptr<const Region> share(Region r) { return std::make_shared<const Region>(std::move(r)); }

std::vector<Symbol3> random_boundary(std::mt19937_64& rng, std::size_t n, bool binary) {
  std::vector<Symbol3> v(n);
  for (auto& s : v) s = binary ? (rng() & 1 ? k1 : k0) : symbol_at(static_cast<int>(rng() % 3));
  return v;
}

std::vector<std::shared_ptr<const Region>> test_regions() {
  return {share(Region::triangle(GraphFamily::z2(), 30)),
          share(Region::slab(GraphFamily::z2(), 20, {16})),
          share(Region::slab(GraphFamily::even_sublattice(3), 10, {8, 8})),
          share(Region::slab(GraphFamily::subset_increment(3), 9, {6, 6})),
          share(Region::slab(GraphFamily::zd(3), 8, {6, 6})),
          share(Region::slab(GraphFamily::even_sublattice_extended(3), 8, {8, 8}))};
}

}  // namespace

TEST_CASE("an open site whose moves are all closed is a loss") {
  auto region = share(Region::triangle(GraphFamily::z2(), 2));
  bool found = false;
  for (std::uint64_t seed = 0; seed < 1000 && !found; ++seed) {
    const SiteField f{seed, 0.5};
    if (is_closed(f, Site{0, 0}) || !is_closed(f, Site{1, 0}) || !is_closed(f, Site{0, 1})) continue;
    found = true;
    CHECK(solve(region, BoundarySpec::all(kQ), f).origin() == k1);
  }
  CHECK(found);
}

TEST_CASE("solutions at p = 0 and p = 1") {
  const GraphFamily z2 = GraphFamily::z2();
  const OutcomeField draws = solve_region(z2, RegionSpec::triangle(40, BoundarySpec::all(kQ)), SiteField{1, 0.0});
  for (Symbol3 v : draws.values) CHECK(v == kQ);

  for (int n : {40, 41}) {
    const OutcomeField alt = solve_region(z2, RegionSpec::triangle(n, BoundarySpec::checkerboard()), SiteField{1, 0.0});
    for (std::size_t i = 0; i < alt.region->size(); ++i) {
      const Site& x = alt.region->site(i);
      CHECK(alt.values[i] == ((x[0] + x[1]) % 2 == 1 ? k1 : k0));
    }
  }

  const OutcomeField closed = solve_region(z2, RegionSpec::triangle(30, BoundarySpec::all(kQ)), SiteField{1, 1.0});
  for (std::size_t i = 0; i < closed.region->size(); ++i) {
    if (!closed.region->is_boundary(i)) CHECK(closed.values[i] == k0);
  }
}

TEST_CASE("boundary validation") {
  auto region = share(Region::triangle(GraphFamily::z2(), 5));
  CHECK(region->boundary_sites().size() == 6);
  try {
    solve(region, BoundarySpec::explicit_values({k0, k1}), SiteField{});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBoundaryShapeMismatch);
  }
  const auto sampled = boundary_values(*region, BoundarySpec::sampled(0.5, 3));
  for (Symbol3 s : sampled) CHECK(is_binary(s));
  CHECK(sampled == boundary_values(*region, BoundarySpec::sampled(0.5, 3)));
  CHECK_THROWS_AS(Region::triangle(GraphFamily::even_sublattice(3), 5), Error);
  CHECK_THROWS_AS(Region::slab(GraphFamily::even_sublattice(3), 5, {7, 8}), Error);
}

TEST_CASE("slab geometry wraps on the transverse torus") {
  const Region r = Region::slab(GraphFamily::even_sublattice(3), 6, {8, 8});
  CHECK(r.layer_sites(0).size() == 32);
  CHECK(r.boundary_sites().size() == 64);
  CHECK(r.site(r.origin()) == Site{0, 0, 0});
  CHECK(r.index_of(Site{8, 0, 2}) == r.index_of(Site{0, 0, 2}));
  CHECK(r.index_of(Site{-1, -1, 0}) == r.index_of(Site{7, 7, 0}));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!r.is_boundary(i)) CHECK(r.out(i).size() == 4);
  }
}

TEST_CASE("three-copy envelope domination") {
  std::mt19937_64 rng(1);
  for (const auto& region : test_regions()) {
    const std::size_t nb = region->boundary_sites().size();
    for (int trial = 0; trial < 20; ++trial) {
      const SiteField f{rng(), 0.05 + 0.3 * (trial % 5) / 4.0};
      const auto a = solve(region, random_boundary(rng, nb, true), f);
      const auto b = solve(region, random_boundary(rng, nb, true), f);
      const auto q = solve(region, std::vector<Symbol3>(nb, kQ), f);
      for (std::size_t i = 0; i < region->size(); ++i) {
        if (a.values[i] != b.values[i]) CHECK(q.values[i] == kQ);
        if (q.values[i] != kQ) CHECK(a.values[i] == q.values[i]);
      }
    }
  }
}

TEST_CASE("order reversal and ?-monotonicity") {
  std::mt19937_64 rng(2);
  for (const auto& region : test_regions()) {
    const std::size_t nb = region->boundary_sites().size();
    const Coord k = region->depth();
    const int m = region->family().m();
    for (int trial = 0; trial < 20; ++trial) {
      const SiteField f{rng(), 0.1 + 0.2 * (trial % 3)};
      const auto lo = random_boundary(rng, nb, false);
      auto hi = lo, info = lo;
      for (std::size_t j = 0; j < nb; ++j) {
        hi[j] = symbol_at(index_of(lo[j]) + static_cast<int>(rng() % (3 - index_of(lo[j]))));
        if (rng() % 2) info[j] = kQ;
      }
      const auto a = solve(region, lo, f);
      const auto b = solve(region, hi, f);
      const auto c = solve(region, info, f);
      for (std::size_t i = 0; i < region->size(); ++i) {
        CHECK(info_leq(a.values[i], c.values[i]));
        if (m != 2 || region->family().extended() || region->is_boundary(i)) continue;
        // Each layer step down flips the order.
        const bool flipped = (k - region->layer(i)) % 2 == 1;
        if (flipped) {
          CHECK(leq(b.values[i], a.values[i]));
        } else {
          CHECK(leq(a.values[i], b.values[i]));
        }
      }
    }
  }
}

TEST_CASE("deepening keeps resolved values") {
  const GraphFamily even3 = GraphFamily::even_sublattice(3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SiteField f{seed, 0.15};
    const auto shallow = solve_region(even3, RegionSpec::slab(8, {8, 8}, BoundarySpec::all(kQ)), f);
    const auto deep = solve_region(even3, RegionSpec::slab(14, {8, 8}, BoundarySpec::all(kQ)), f);
    for (std::size_t i = 0; i < shallow.region->size(); ++i) {
      if (shallow.values[i] == kQ) continue;
      CHECK(deep.at(shallow.region->site(i)) == shallow.values[i]);
    }
    const auto t1 = solve_region(GraphFamily::z2(), RegionSpec::triangle(20, BoundarySpec::all(kQ)), f);
    const auto t2 = solve_region(GraphFamily::z2(), RegionSpec::triangle(35, BoundarySpec::all(kQ)), f);
    for (std::size_t i = 0; i < t1.region->size(); ++i) {
      if (t1.values[i] != kQ) CHECK(t2.at(t1.region->site(i)) == t1.values[i]);
    }
  }
}

TEST_CASE("draw density profiles") {
  const GraphFamily z2 = GraphFamily::z2();
  const std::vector<Coord> ring{64};
  for (const auto& row : draw_density_profile(z2, {5, 10}, ring, 1.0, {1, 2})) CHECK(row.q_fraction == 0.0);
  for (const auto& row : draw_density_profile(z2, {5, 10}, ring, 0.0, {1, 2})) CHECK(row.q_fraction == 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rows = draw_density_profile(GraphFamily::even_sublattice(3), {2, 4, 8, 16}, {8, 8}, 0.2, {seed});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].q_fraction <= rows[i - 1].q_fraction);
  }
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 100; ++s) seeds.push_back(s);
  const auto rows = draw_density_profile(z2, {20, 200}, {256}, 0.1, seeds);
  CHECK(rows[1].q_fraction < rows[0].q_fraction);
  CHECK(rows[0].seeds == 100);
}

TEST_CASE("boundary sensitivity") {
  const auto s = boundary_sensitivity(GraphFamily::z2(), 20, {32}, 1.0, {1, 2, 3});
  CHECK(s.origin_fraction == 0.0);
  CHECK(s.site_fraction == 0.0);
  const auto t = boundary_sensitivity(GraphFamily::z2(), 20, {32}, 0.0, {1});
  CHECK(t.origin_fraction == 1.0);
  CHECK_THROWS_AS(boundary_sensitivity(GraphFamily::zd(3), 10, {6, 6}, 0.1, {1}), Error);
}

TEST_CASE("rendered images") {
  const GraphFamily z2 = GraphFamily::z2();
  const std::string black = render_ppm_bytes(solve_region(z2, RegionSpec::triangle(10, BoundarySpec::all(kQ)), SiteField{4, 1.0}));
  const std::string header = "P6\n11 11\n255\n";
  REQUIRE(black.substr(0, header.size()) == header);
  // Pixel (x1, x2) sits at row N - x2, column x1; outside the triangle stays white.
  for (int row = 0; row <= 10; ++row) {
    for (int col = 0; col <= 10; ++col) {
      const std::size_t at = header.size() + (static_cast<std::size_t>(row) * 11 + col) * 3;
      const bool inside = col + (10 - row) <= 10;
      const unsigned char expect = inside ? 0 : 255;
      CHECK(static_cast<unsigned char>(black[at]) == expect);
    }
  }
  const std::string red = render_ppm_bytes(solve_region(z2, RegionSpec::triangle(10, BoundarySpec::all(kQ)), SiteField{4, 0.0}));
  const std::size_t origin_px = header.size() + (10 * 11 + 0) * 3;
  CHECK(static_cast<unsigned char>(red[origin_px]) == 220);
  CHECK(static_cast<unsigned char>(red[origin_px + 1]) == 0);

  const auto spec = RegionSpec::triangle(200, BoundarySpec::all(kQ));
  CHECK(render_ppm_bytes(solve_region(z2, spec, SiteField{9, 0.2})) ==
        render_ppm_bytes(solve_region(z2, spec, SiteField{9, 0.2})));
  const auto slab = solve_region(z2, RegionSpec::slab(4, {8}, BoundarySpec::all(kQ)), SiteField{});
  CHECK_THROWS_AS(render_ppm_bytes(slab), Error);
}
