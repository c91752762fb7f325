#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "perc/percolation.hpp"

using namespace perc;

TEST_CASE("mix64 is the splitmix64 output function") {
  // First outputs of the reference splitmix64 generator seeded with 0.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("closure at the extreme probabilities") {
  for (Coord i = -50; i <= 50; ++i) {
    CHECK_FALSE(is_closed(SiteField{7, 0.0}, Site{i, 3 * i}));
    CHECK(is_closed(SiteField{7, 1.0}, Site{i, 3 * i}));
  }
}

TEST_CASE("uniforms are deterministic and keyed by seed, site and tag") {
  const SiteField f{42, 0.3};
  const Site x{5, -9, 12};
  CHECK(uniform_at(f, x, 3) == uniform_at(f, x, 3));
  CHECK(uniform_at(f, x, 3) != uniform_at(f, x, 4));
  CHECK(uniform_at(f, x, 3) != uniform_at(SiteField{43, 0.3}, x, 3));
  CHECK(uniform_at(f, x, 3) != uniform_at(f, Site{5, -9, 13}, 3));
  // Longer coordinate vectors chain a second word.
  const Site y{1, 2, 3, 4, 5};
  CHECK(uniform_at(f, y, 0) != uniform_at(f, Site{1, 2, 3, 4, 6}, 0));
  CHECK_THROWS_AS(uniform_at(f, Site{Coord{1} << 20, 0}, 0), Error);
}

TEST_CASE("closed fraction concentrates around p") {
  const SiteField f{2024, 0.3};
  long closed = 0;
  const int side = 1000;
  for (Coord a = 0; a < side; ++a) {
    for (Coord b = 0; b < side; ++b) closed += is_closed(f, Site{a, b});
  }
  const double n = static_cast<double>(side) * side;
  CHECK(std::abs(closed / n - 0.3) <= 3.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST_CASE("streams with different tags are uncorrelated") {
  const int n = 100000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const Site x{i % 317, i / 317};
    const double a = uniform_at(9, x.span(), 0);
    const double b = uniform_at(9, x.span(), 1);
    sx += a, sy += b, sxx += a * a, syy += b * b, sxy += a * b;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double rho = cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) * (syy / n - (sy / n) * (sy / n)));
  CHECK(std::abs(rho) < 0.01);
}

TEST_CASE("uniforms pass a Kolmogorov-Smirnov test") {
  const int n = 1000000;
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = uniform_at(77, std::vector<Coord>{i % 1000, i / 1000, -i % 7}, 5);
  std::sort(u.begin(), u.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max({d, (i + 1.0) / n - u[i], u[i] - static_cast<double>(i) / n});
  }
  // 1% critical value of the one-sample KS statistic.
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
  CHECK(u.front() >= 0.0);
  CHECK(u.back() < 1.0);
}
