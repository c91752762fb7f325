#include <cmath>
#include <random>

#include "doctest.h"
#include "perc/pca.hpp"

using namespace perc;

namespace {

constexpr Symbol3 k0 = Symbol3::kZero;
constexpr Symbol3 kQ = Symbol3::kQuestion;
constexpr Symbol3 k1 = Symbol3::kOne;

bool contains_pattern(const Word& ring, const Word& pat) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool hit = true;
    for (std::size_t j = 0; j < pat.size() && hit; ++j) hit = ring[(i + j) % n] == pat[j];
    if (hit) return true;
  }
  return false;
}

Word random_word(std::mt19937_64& rng, std::size_t n, bool binary) {
  Word w(n);
  for (auto& s : w) s = binary ? (rng() & 1 ? k1 : k0) : symbol_at(static_cast<int>(rng() % 3));
  return w;
}

}  // namespace

TEST_CASE("local rules of the worked examples") {
  CHECK(local_rule(PcaKind::kDdet, k0, k0, 0.5, 0.5) == k1);
  CHECK(local_rule(PcaKind::kDdet, kQ, k1, 0.5, 0.5) == k0);
  CHECK(local_rule(PcaKind::kDdet, kQ, k0, 0.5, 0.5) == kQ);
  for (double u : {0.0, 0.3, 0.99}) {
    for (Symbol3 s : kAllSymbols) {
      CHECK(local_rule(PcaKind::kF, k1, s, u, 0.4) == k0);
      CHECK(local_rule(PcaKind::kF, s, k1, u, 0.4) == k0);
    }
  }
  CHECK(local_rule(PcaKind::kF, kQ, k0, 0.9, 0.1) == kQ);
  CHECK(local_rule(PcaKind::kF, kQ, k0, 0.05, 0.1) == k0);
  CHECK(local_rule(PcaKind::kF, k0, k0, 0.05, 0.1) == k0);
  CHECK(local_rule(PcaKind::kF, k0, k0, 0.5, 0.1) == k1);
  // G: the "0 w. prob. 1-p" branch is taken iff u >= p.
  CHECK(local_rule(PcaKind::kG, k1, k0, 0.5, 0.1) == k0);
  CHECK(local_rule(PcaKind::kG, k1, k0, 0.05, 0.1) == k1);
  CHECK(local_rule(PcaKind::kG, k0, k0, 0.99, 0.1) == k1);
  CHECK(local_rule(PcaKind::kG, kQ, kQ, 0.5, 0.1) == kQ);
  CHECK(local_rule(PcaKind::kB, k0, k0, 0.0, 0.5) == k1);
  CHECK(local_rule(PcaKind::kA, k0, k1, 0.9, 0.5) == k0);
  CHECK(local_rule(PcaKind::kR0, kQ, k1, 0.1, 0.5) == k0);
  CHECK(local_rule(PcaKind::kR0, kQ, k1, 0.6, 0.5) == kQ);
  CHECK(local_rule(PcaKind::kR1, k0, k1, 0.1, 0.5) == k1);
  CHECK(local_rule(PcaKind::kStavskaya, k0, k1, 0.9, 0.5) == k1);
  CHECK(local_rule(PcaKind::kStavskaya, k0, k1, 0.1, 0.5) == k0);
  CHECK(local_rule(PcaKind::kFlip, kQ, k1, 0.1, 0.5) == kQ);
  CHECK(local_rule(PcaKind::kFlip, k0, k1, 0.1, 0.5) == k1);
  try {
    local_rule(PcaKind::kA, kQ, k0, 0.5, 0.5);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidSymbol);
  }
  CHECK_THROWS_AS(local_rule(PcaKind::kB, k0, kQ, 0.5, 0.5), Error);
}

TEST_CASE("local kernels are probability vectors") {
  for (PcaKind kind : {PcaKind::kF, PcaKind::kG, PcaKind::kDdet, PcaKind::kR0, PcaKind::kR1, PcaKind::kFlip}) {
    for (Symbol3 a : kAllSymbols) {
      for (Symbol3 b : kAllSymbols) {
        const auto k = local_kernel(kind, a, b, 0.3);
        CHECK(k[0] + k[1] + k[2] == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("ring steps") {
  const SiteField f{3, 0.4};
  CHECK(step(PcaKind::kDdet, parse_word("00000"), f, 0) == parse_word("11111"));
  for (std::uint64_t t = 0; t < 20; ++t) CHECK(step(PcaKind::kA, parse_word("1111111"), f, t) == parse_word("0000000"));
  // Window (i, i+1): cell i sees its right neighbour.
  CHECK(step(PcaKind::kDdet, parse_word("0010"), f, 0) == parse_word("1001"));
  CHECK_THROWS_AS(coupled_step(PcaKind::kF, {parse_word("000"), parse_word("0000")}, f, 0), Error);
}

TEST_CASE("F and G restrict to A and B pathwise on binary rings") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Word w = random_word(rng, 3 + rng() % 20, true);
    const SiteField f{rng(), (rng() % 1000) / 1000.0};
    const std::uint64_t t = rng() % 1000;
    CHECK(step(PcaKind::kF, w, f, t) == step(PcaKind::kA, w, f, t));
    CHECK(step(PcaKind::kG, w, f, t) == step(PcaKind::kB, w, f, t));
  }
}

TEST_CASE("compositions agree pathwise and as exact kernels") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const Word w = random_word(rng, 3 + rng() % 12, false);
    const SiteField f{rng(), (rng() % 1000) / 1000.0};
    const std::uint64_t t = rng() % 100;
    CHECK(step(PcaKind::kF, w, f, t) == step(PcaKind::kR0, step(PcaKind::kDdet, w, f, t), f, t));
    CHECK(step(PcaKind::kG, w, f, t) == step(PcaKind::kR1, step(PcaKind::kDdet, w, f, t), f, t));
  }
  for (int n = 3; n <= 5; ++n) {
    for (double p : {0.25, 0.5}) {
      const ExactKernel d = exact_kernel(PcaKind::kDdet, n, p);
      CHECK(kernel_distance(exact_kernel(PcaKind::kF, n, p), compose(d, exact_kernel(PcaKind::kR0, n, p))) <= 1e-12);
      CHECK(kernel_distance(exact_kernel(PcaKind::kG, n, p), compose(d, exact_kernel(PcaKind::kR1, n, p))) <= 1e-12);
      // F and G differ, so the distance is a real test.
      CHECK(kernel_distance(exact_kernel(PcaKind::kF, n, p), exact_kernel(PcaKind::kG, n, p)) > 0.1);
    }
  }
}

TEST_CASE("exact kernel rows are stochastic and match a hand-computed entry") {
  const ExactKernel k = exact_kernel(PcaKind::kA, 3, 0.3);
  for (std::uint32_t s = 0; s < k.rows.size(); ++s) {
    if (k.rows[s].empty()) continue;
    double total = 0.0;
    for (const auto& e : k.rows[s]) total += e.second;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  // 000 -> each cell is 1 with probability 0.7 independently.
  const auto& row = k.rows[ring_index(parse_word("000"))];
  for (const auto& [target, prob] : row) {
    const Word w = ring_from_index(target, 3);
    int ones = 0;
    for (Symbol3 s : w) ones += s == k1;
    CHECK(prob == doctest::Approx(std::pow(0.7, ones) * std::pow(0.3, 3 - ones)));
  }
  CHECK(k.rows[ring_index(parse_word("0?0"))].empty());
}

TEST_CASE("B is Flip after Stavskaya") {
  CHECK(stavskaya_identity_check(0.3, 5));
  CHECK(stavskaya_identity_check(0.0, 4));
  CHECK(stavskaya_identity_check(1.0, 4));
  // At p = 1 everything maps to all-1.
  const ExactKernel b = exact_kernel(PcaKind::kB, 4, 1.0);
  for (const auto& row : b.rows) {
    if (row.empty()) continue;
    REQUIRE(row.size() == 1);
    CHECK(ring_from_index(row[0].first, 4) == parse_word("1111"));
  }
}

TEST_CASE("1?1 has no preimage under F") {
  for (int n = 3; n <= 6; ++n) {
    const ExactKernel k = exact_kernel(PcaKind::kF, n, 0.4);
    for (const auto& row : k.rows) {
      for (const auto& [target, prob] : row) {
        if (prob > 0.0) CHECK_FALSE(contains_pattern(ring_from_index(target, n), parse_word("1?1")));
      }
    }
  }
}

TEST_CASE("monotone couplings under shared randomness") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t n = 3 + rng() % 15;
    Word a = random_word(rng, n, false), b = a, c = a;
    for (std::size_t i = 0; i < n; ++i) {
      // b >= a in 0 < ? < 1; c has ? wherever it differs from a.
      const int lo = index_of(a[i]);
      b[i] = symbol_at(lo + static_cast<int>(rng() % (3 - lo)));
      if (rng() % 3 == 0) c[i] = kQ;
    }
    const SiteField f{rng(), (rng() % 1000) / 1000.0};
    const auto out = coupled_step(PcaKind::kF, {a, b, c}, f, trial);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(leq(out[1][i], out[0][i]));
      CHECK(info_leq(out[0][i], out[2][i]));
    }
    CHECK(out[0] == step(PcaKind::kF, a, f, trial));
  }
}

TEST_CASE("trajectory statistics") {
  const Word all_q(64, kQ);
  const auto full = trajectory_stats(PcaKind::kF, all_q, SiteField{1, 1.0}, 3);
  CHECK(full[0][1] == 1.0);
  CHECK(full[1][1] == 0.0);
  const auto none = trajectory_stats(PcaKind::kF, all_q, SiteField{1, 0.0}, 50);
  for (const auto& row : none) CHECK(row[1] == 1.0);
  const auto some = trajectory_stats(PcaKind::kF, all_q, SiteField{8, 0.3}, 200);
  CHECK(some.back()[1] < some.front()[1]);
  for (const auto& row : some) CHECK(row[0] + row[1] + row[2] == doctest::Approx(1.0));
}
