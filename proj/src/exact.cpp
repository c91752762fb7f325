#include "perc/exact.hpp"

#include <algorithm>
#include <cmath>

namespace perc {

namespace {

constexpr Symbol3 k0 = Symbol3::kZero;
constexpr Symbol3 kQ = Symbol3::kQuestion;
constexpr Symbol3 k1 = Symbol3::kOne;

int binary_state(Symbol3 s) { return s == k1 ? 1 : 0; }

std::size_t word_index(const Word& w) {
  std::size_t idx = 0;
  for (std::size_t i = w.size(); i-- > 0;) idx = idx * 3 + static_cast<std::size_t>(index_of(w[i]));
  return idx;
}

std::size_t pow3(int n) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

// Occurrences of w in the cyclic word c plus occurrences in its reversal.
long orbit_count(const Word& c, const Word& w) {
  const std::size_t n = c.size();
  long count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool fwd = true, bwd = true;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (c[(i + j) % n] != w[j]) fwd = false;
      if (c[(i + n - j) % n] != w[j]) bwd = false;
    }
    count += fwd + bwd;
  }
  return count;
}

Word apply_d(const Word& c) {
  const std::size_t n = c.size();
  Word d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = local_rule(PcaKind::kDdet, c[i], c[(i + 1) % n], 0.0, 0.0);
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// Markov measures

double MarkovMeasure::cylinder(const Word& w) const {
  if (w.empty()) return 1.0;
  for (Symbol3 s : w) {
    if (s == kQ) return 0.0;
  }
  double prob = pi[binary_state(w[0])];
  for (std::size_t i = 1; i < w.size(); ++i) prob *= T[binary_state(w[i - 1])][binary_state(w[i])];
  return prob;
}

MarkovMeasure matrix_P(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::kDomain, "matrix_P needs 0 < p < 1");
  const double s = std::sqrt(p * (4.0 - 3.0 * p));
  const double q = 1.0 - p;
  MarkovMeasure m;
  m.T[0][0] = (2.0 - p - s) / (2.0 * q * q);
  m.T[0][1] = (2.0 * p * p - 3.0 * p + s) / (2.0 * q * q);
  m.T[1][0] = (-p + s) / (2.0 * q);
  m.T[1][1] = (2.0 - p - s) / (2.0 * q);
  m.pi[0] = m.T[1][0] / (m.T[1][0] + m.T[0][1]);
  m.pi[1] = 1.0 - m.pi[0];
  return m;
}

MarkovMeasure matrix_Q(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::kDomain, "matrix_Q needs lambda > 0");
  const double s = std::sqrt(lambda);
  const double t[2][2] = {{1.0, s}, {s, 0.0}};
  const double rho = (1.0 + std::sqrt(1.0 + 4.0 * lambda)) / 2.0;
  const double r[2] = {rho, s};
  MarkovMeasure m;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) m.T[a][b] = t[a][b] * r[b] / (rho * r[a]);
  }
  // Symmetric T_hc: left and right eigenvectors coincide.
  const double z = r[0] * r[0] + r[1] * r[1];
  m.pi = {r[0] * r[0] / z, r[1] * r[1] / z};
  return m;
}

std::array<std::array<double, 2>, 2> square(const std::array<std::array<double, 2>, 2>& m) {
  std::array<std::array<double, 2>, 2> out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = m[i][0] * m[0][j] + m[i][1] * m[1][j];
  }
  return out;
}

double win_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kDomain, "p must lie in [0,1]");
  return 0.5 * (1.0 + std::sqrt(p / (4.0 - 3.0 * p)));
}

double conditional_win_probability(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorCode::kDomain, "p must lie in [0,1)");
  return (win_probability(p) - p) / (1.0 - p);
}

// ---------------------------------------------------------------------------
// Cylinder tables

CylinderTable::CylinderTable(int max_len) : max_len_(max_len), probs_(max_len + 1) {
  if (max_len < 0 || max_len > 8) throw Error(ErrorCode::kWordTooLong, "cylinder tables hold words of length <= 8");
  for (int l = 1; l <= max_len; ++l) probs_[l].assign(pow3(l), 0.0);
}

CylinderTable CylinderTable::from_function(const CylinderFn& f, int max_len) {
  CylinderTable t(max_len);
  for (int l = 1; l <= max_len; ++l) {
    for (std::size_t i = 0; i < t.probs_[l].size(); ++i) {
      t.probs_[l][i] = f(ring_from_index(static_cast<std::uint32_t>(i), l));
    }
  }
  return t;
}

CylinderTable CylinderTable::from_markov(const MarkovMeasure& m, int max_len) {
  return from_function([&m](const Word& w) { return m.cylinder(w); }, max_len);
}

CylinderTable CylinderTable::from_ring_orbit(const Word& ring, int max_len) {
  const double denom = 2.0 * static_cast<double>(ring.size());
  return from_function([&](const Word& w) { return static_cast<double>(orbit_count(ring, w)) / denom; }, max_len);
}

double CylinderTable::prob(const Word& w) const {
  if (w.empty()) return 1.0;
  if (static_cast<int>(w.size()) > max_len_) {
    throw Error(ErrorCode::kWordTooLong, "word longer than the table's max length");
  }
  return probs_[w.size()][word_index(w)];
}

void CylinderTable::set(const Word& w, double value) {
  if (w.empty() || static_cast<int>(w.size()) > max_len_) {
    throw Error(ErrorCode::kWordTooLong, "word length outside the table");
  }
  probs_[w.size()][word_index(w)] = value;
}

CylinderFn CylinderTable::as_function() const {
  return [this](const Word& w) { return prob(w); };
}

double CylinderTable::consistency_error() const {
  double worst = 0.0;
  for (int l = 1; l <= max_len_; ++l) {
    double total = 0.0;
    for (double v : probs_[l]) total += v;
    worst = std::max(worst, std::abs(total - 1.0));
    if (l == max_len_) continue;
    for (std::size_t i = 0; i < probs_[l].size(); ++i) {
      Word w = ring_from_index(static_cast<std::uint32_t>(i), l);
      double right = 0.0, left = 0.0;
      for (Symbol3 s : kAllSymbols) {
        Word a = w;
        a.push_back(s);
        right += prob(a);
        Word b;
        b.push_back(s);
        b.insert(b.end(), w.begin(), w.end());
        left += prob(b);
      }
      worst = std::max({worst, std::abs(right - probs_[l][i]), std::abs(left - probs_[l][i])});
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Pushforward

double pushforward_cylinder(PcaKind kind, const CylinderFn& measure, const Word& w, double p) {
  const std::size_t len = w.size() + 1;
  Word u(len);
  double total = 0.0;
  const bool binary = binary_only(kind);

  auto dfs = [&](auto&& self, std::size_t pos, double weight) -> void {
    if (pos == len) {
      total += weight * measure(u);
      return;
    }
    for (Symbol3 s : kAllSymbols) {
      if (binary && s == kQ) continue;
      u[pos] = s;
      double next = weight;
      if (pos > 0) next *= local_kernel(kind, u[pos - 1], s, p)[index_of(w[pos - 1])];
      if (next == 0.0) continue;
      if (measure(Word(u.begin(), u.begin() + static_cast<long>(pos) + 1)) == 0.0) continue;
      self(self, pos + 1, next);
    }
  };
  dfs(dfs, 0, 1.0);
  return total;
}

double pushforward_cylinder(PcaKind kind, const MarkovMeasure& measure, const Word& w, double p) {
  return pushforward_cylinder(kind, [&measure](const Word& u) { return measure.cylinder(u); }, w, p);
}

double pushforward_cylinder(PcaKind kind, const CylinderTable& table, const Word& w, double p) {
  if (static_cast<int>(w.size()) + 1 > table.max_len()) {
    throw Error(ErrorCode::kWordTooLong, "pushforward of a length-" + std::to_string(w.size()) +
                                             " word needs cylinders of length " + std::to_string(w.size() + 1));
  }
  return pushforward_cylinder(kind, table.as_function(), w, p);
}

CylinderTable pushforward_table(PcaKind kind, const CylinderTable& table, double p) {
  const auto f = table.as_function();
  return CylinderTable::from_function(
      [&](const Word& w) { return pushforward_cylinder(kind, f, w, p); }, table.max_len() - 1);
}

// ---------------------------------------------------------------------------
// Weights

int right_weight(const Word& w, std::size_t pos) {
  if (pos >= w.size() || w[pos] != kQ) throw Error(ErrorCode::kNotAQuestion, "weight of a non-? symbol");
  if (pos + 1 < w.size() && w[pos + 1] == k0) {
    return (pos + 2 < w.size() && w[pos + 2] == k1) ? 3 : 2;
  }
  return 1;
}

int left_weight(const Word& w, std::size_t pos) {
  const Word rev(w.rbegin(), w.rend());
  return right_weight(rev, w.size() - 1 - pos);
}

int symmetric_weight(const Word& w, std::size_t pos) { return left_weight(w, pos) + right_weight(w, pos); }

WeightReport weight_report(const Word& ring) {
  WeightReport r;
  const std::size_t n = ring.size();
  r.weights.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (ring[i] != kQ) continue;
    const Symbol3 a = ring[(i + 1) % n];
    const Symbol3 b = ring[(i + 2) % n];
    r.weights[i] = a == k0 ? (b == k1 ? 3 : 2) : 1;
  }
  const double denom = 2.0 * static_cast<double>(n);
  r.per_site = static_cast<double>(orbit_count(ring, parse_word("?01")) + orbit_count(ring, parse_word("?0")) +
                                   orbit_count(ring, parse_word("?"))) /
               denom;
  return r;
}

WeightCheckReport weight_identities_check(int n, bool fault) {
  if (n < 5) throw Error(ErrorCode::kRingTooSmall, "weight identities need n >= 5, got " + std::to_string(n));
  if (n > 10) throw Error(ErrorCode::kWordTooLong, "weight identities enumerate n <= 10");
  WeightCheckReport rep;
  rep.n = n;

  const Word q = parse_word("?"), qq = parse_word("??"), zq = parse_word("0?"), qz = parse_word("?0");
  const Word qq1 = parse_word("??1"), zq1 = parse_word("0?1"), qz1 = parse_word("?01"), oqo = parse_word("1?1");
  const double denom = 2.0 * n;

  auto note = [&](const Word& c, const std::string& what) {
    if (rep.examples.size() < 8) rep.examples.push_back(to_string(c) + ": " + what);
  };

  const std::size_t total = pow3(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Word c = ring_from_index(static_cast<std::uint32_t>(idx), n);
    Word d = apply_d(c);
    if (fault) d[0] = kQ;
    ++rep.words_checked;

    const long d_q = orbit_count(d, q), d_qz = orbit_count(d, qz), d_qz1 = orbit_count(d, qz1);
    const long c_q = orbit_count(c, q), c_qz = orbit_count(c, qz), c_qz1 = orbit_count(c, qz1);
    if (d_q != orbit_count(c, qq) + orbit_count(c, zq) + orbit_count(c, qz) ||
        d_qz != orbit_count(c, qq1) + orbit_count(c, zq1) + orbit_count(c, qz1) || d_qz1 != 0) {
      ++rep.identity_failures;
      note(c, "pre-image identity");
    }
    const long before = c_q + c_qz + c_qz1;
    const long after = d_q + d_qz + d_qz1;
    const long bumps = orbit_count(c, oqo);
    if (after > before) {
      ++rep.inequality_failures;
      note(c, "weight increased");
    }
    if (bumps > 0 && after >= before) {
      ++rep.strict_failures;
      note(c, "no strict decrease despite 1?1");
    }
    if (before - after != bumps) {
      ++rep.balance_failures;
      note(c, "weight drop differs from mu(1?1)");
    }

    // The pushforward of the orbit measure under D is the orbit measure of D(c).
    const CylinderTable table = CylinderTable::from_ring_orbit(c, 4);
    for (const Word* w : {&q, &qz, &qz1}) {
      const double pushed = pushforward_cylinder(PcaKind::kDdet, table, *w, 0.0);
      if (std::abs(pushed - static_cast<double>(orbit_count(d, *w)) / denom) > 1e-12) {
        ++rep.pushforward_failures;
        note(c, "pushforward disagrees with D(c)");
        break;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Hard-core Gibbs distributions

namespace {

std::vector<std::uint32_t> neighbor_masks(const Graph& g) {
  std::vector<std::uint32_t> masks(g.size(), 0);
  for (int v = 0; v < g.size(); ++v) {
    for (int w : g.adj[v]) masks[v] |= 1u << w;
  }
  return masks;
}

}  // namespace

GibbsResult gibbs_exact(const Graph& g, double lambda) {
  const int n = g.size();
  if (n > 20) throw Error(ErrorCode::kGraphTooLarge, "exact Gibbs enumeration limited to 20 vertices");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kDomain, "activity must be non-negative");
  const auto nb = neighbor_masks(g);
  GibbsResult r;
  const std::uint32_t states = 1u << n;
  r.prob.assign(states, 0.0);
  r.marginals.assign(n, 0.0);
  for (std::uint32_t s = 0; s < states; ++s) {
    bool independent = true;
    for (int v = 0; v < n && independent; ++v) {
      if ((s >> v & 1u) && (s & nb[v])) independent = false;
    }
    if (!independent) continue;
    const double w = std::pow(lambda, __builtin_popcount(s));
    r.prob[s] = w;
    r.Z += w;
  }
  for (std::uint32_t s = 0; s < states; ++s) {
    r.prob[s] /= r.Z;
    for (int v = 0; v < n; ++v) {
      if (s >> v & 1u) r.marginals[v] += r.prob[s];
    }
  }
  return r;
}

double kernel_stationarity_check(const Graph& g, double lambda, UpdateVariant variant) {
  const int n = g.size();
  if (n > 14) throw Error(ErrorCode::kGraphTooLarge, "exact kernels limited to 14 vertices");
  const double p = p_from_activity(lambda, variant);
  const GibbsResult gibbs = gibbs_exact(g, lambda);
  const auto nb = neighbor_masks(g);
  const std::uint32_t states = 1u << n;

  double worst = 0.0;
  std::vector<double> next(states);
  for (int c = 0; c < g.classes; ++c) {
    std::uint32_t class_mask = 0;
    for (int v = 0; v < n; ++v) {
      if (g.cls[v] == c) class_mask |= 1u << v;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t s = 0; s < states; ++s) {
      const double w = gibbs.prob[s];
      if (w == 0.0) continue;
      std::vector<int> free;
      for (int v = 0; v < n; ++v) {
        if (!(class_mask >> v & 1u)) continue;
        if (s & nb[v]) continue;  // blocked by an occupied neighbour
        if (variant == UpdateVariant::kExtended && (s >> v & 1u)) continue;  // forced 1 -> 0
        free.push_back(v);
      }
      const std::uint32_t base = s & ~class_mask;
      const std::uint32_t subsets = 1u << free.size();
      for (std::uint32_t sub = 0; sub < subsets; ++sub) {
        std::uint32_t t = base;
        const int ones = __builtin_popcount(sub);
        for (std::size_t j = 0; j < free.size(); ++j) {
          if (sub >> j & 1u) t |= 1u << free[j];
        }
        next[t] += w * std::pow(1.0 - p, ones) * std::pow(p, static_cast<int>(free.size()) - ones);
      }
    }
    for (std::uint32_t s = 0; s < states; ++s) worst = std::max(worst, std::abs(next[s] - gibbs.prob[s]));
  }
  return worst;
}

}  // namespace perc
