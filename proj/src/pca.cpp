#include "perc/pca.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace perc {

namespace {

constexpr Symbol3 k0 = Symbol3::kZero;
constexpr Symbol3 kQ = Symbol3::kQuestion;
constexpr Symbol3 k1 = Symbol3::kOne;

struct Branches {
  Symbol3 closed;  // taken iff u < p
  Symbol3 open;
};

Branches branches(PcaKind kind, Symbol3 l, Symbol3 r) {
  const bool any_one = l == k1 || r == k1;
  const bool zeros = l == k0 && r == k0;
  switch (kind) {
    case PcaKind::kA:
    case PcaKind::kB:
    case PcaKind::kStavskaya:
      if (l == kQ || r == kQ) {
        throw Error(ErrorCode::kInvalidSymbol, std::string("PCA ") + to_string(kind) + " is defined on {0,1} only");
      }
      if (kind == PcaKind::kA) return zeros ? Branches{k0, k1} : Branches{k0, k0};
      if (kind == PcaKind::kB) return zeros ? Branches{k1, k1} : Branches{k1, k0};
      return Branches{k0, any_one ? k1 : k0};
    case PcaKind::kF:
      if (zeros) return {k0, k1};
      if (any_one) return {k0, k0};
      return {k0, kQ};
    case PcaKind::kG:
      if (zeros) return {k1, k1};
      if (any_one) return {k1, k0};
      return {k1, kQ};
    case PcaKind::kDdet: {
      const Symbol3 out = zeros ? k1 : (any_one ? k0 : kQ);
      return {out, out};
    }
    case PcaKind::kR0: return {k0, l};
    case PcaKind::kR1: return {k1, l};
    case PcaKind::kFlip: return {flip(l), flip(l)};
  }
  return {kQ, kQ};
}

}  // namespace

PcaKind parse_pca_kind(std::string_view name) {
  static const std::pair<const char*, PcaKind> table[] = {
      {"A", PcaKind::kA},       {"B", PcaKind::kB},   {"F", PcaKind::kF},
      {"G", PcaKind::kG},       {"D", PcaKind::kDdet}, {"R0", PcaKind::kR0},
      {"R1", PcaKind::kR1},     {"stavskaya", PcaKind::kStavskaya}, {"flip", PcaKind::kFlip},
  };
  for (const auto& [s, k] : table) {
    if (name == s) return k;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown PCA kind '" + std::string(name) + "'");
}

const char* to_string(PcaKind kind) {
  switch (kind) {
    case PcaKind::kA: return "A";
    case PcaKind::kB: return "B";
    case PcaKind::kF: return "F";
    case PcaKind::kG: return "G";
    case PcaKind::kDdet: return "D";
    case PcaKind::kR0: return "R0";
    case PcaKind::kR1: return "R1";
    case PcaKind::kStavskaya: return "stavskaya";
    case PcaKind::kFlip: return "flip";
  }
  return "?";
}

bool uses_randomness(PcaKind kind) { return kind != PcaKind::kDdet && kind != PcaKind::kFlip; }

bool binary_only(PcaKind kind) {
  return kind == PcaKind::kA || kind == PcaKind::kB || kind == PcaKind::kStavskaya;
}

Symbol3 local_rule(PcaKind kind, Symbol3 left, Symbol3 right, double u, double p) {
  const Branches b = branches(kind, left, right);
  return u < p ? b.closed : b.open;
}

std::array<double, 3> local_kernel(PcaKind kind, Symbol3 left, Symbol3 right, double p) {
  const Branches b = branches(kind, left, right);
  std::array<double, 3> out{0.0, 0.0, 0.0};
  if (!uses_randomness(kind)) {
    out[index_of(b.closed)] = 1.0;
    return out;
  }
  out[index_of(b.closed)] += p;
  out[index_of(b.open)] += 1.0 - p;
  return out;
}

Word step(PcaKind kind, const Word& ring, const SiteField& field, std::uint64_t time) {
  const std::size_t n = ring.size();
  Word out(n);
  const bool random = uses_randomness(kind);
  for (std::size_t i = 0; i < n; ++i) {
    const Coord site[2] = {static_cast<Coord>(i), static_cast<Coord>(time)};
    const double u = random ? uniform_at(field.seed, site, 0) : 1.0;
    out[i] = local_rule(kind, ring[i], ring[(i + 1) % n], u, field.p);
  }
  return out;
}

std::vector<Word> coupled_step(PcaKind kind, const std::vector<Word>& rings, const SiteField& field,
                               std::uint64_t time) {
  std::vector<Word> out;
  out.reserve(rings.size());
  for (const Word& r : rings) {
    if (r.size() != rings.front().size()) throw Error(ErrorCode::kLengthMismatch, "coupled rings differ in length");
    out.push_back(step(kind, r, field, time));
  }
  return out;
}

std::vector<std::array<double, 3>> trajectory_stats(PcaKind kind, const Word& initial, const SiteField& field,
                                                    int steps) {
  std::vector<std::array<double, 3>> rows;
  rows.reserve(static_cast<std::size_t>(steps) + 1);
  auto densities = [](const Word& w) {
    std::array<double, 3> d{0.0, 0.0, 0.0};
    for (Symbol3 s : w) d[index_of(s)] += 1.0;
    for (double& x : d) x /= static_cast<double>(w.size());
    return d;
  };
  Word cur = initial;
  rows.push_back(densities(cur));
  for (int t = 0; t < steps; ++t) {
    cur = step(kind, cur, field, static_cast<std::uint64_t>(t));
    rows.push_back(densities(cur));
  }
  return rows;
}

std::uint32_t ring_index(const Word& ring) {
  std::uint32_t idx = 0;
  for (std::size_t i = ring.size(); i-- > 0;) idx = idx * 3 + static_cast<std::uint32_t>(index_of(ring[i]));
  return idx;
}

Word ring_from_index(std::uint32_t index, int n) {
  Word w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = symbol_at(static_cast<int>(index % 3));
    index /= 3;
  }
  return w;
}

ExactKernel exact_kernel(PcaKind kind, int n, double p) {
  if (n < 1 || n > 10) throw Error(ErrorCode::kWordTooLong, "exact kernels need 1 <= n <= 10");
  ExactKernel k;
  k.n = n;
  std::uint32_t states = 1;
  for (int i = 0; i < n; ++i) states *= 3;
  k.rows.resize(states);
  std::vector<std::uint32_t> pow3(n);
  pow3[0] = 1;
  for (int i = 1; i < n; ++i) pow3[i] = pow3[i - 1] * 3;

  for (std::uint32_t s = 0; s < states; ++s) {
    const Word in = ring_from_index(s, n);
    if (binary_only(kind) && std::find(in.begin(), in.end(), kQ) != in.end()) continue;
    std::map<std::uint32_t, double> acc;
    acc[0] = 1.0;
    for (int i = 0; i < n; ++i) {
      const auto cell = local_kernel(kind, in[i], in[(i + 1) % n], p);
      std::map<std::uint32_t, double> next;
      for (const auto& [idx, w] : acc) {
        for (int c = 0; c < 3; ++c) {
          if (cell[c] == 0.0) continue;
          next[idx + pow3[i] * static_cast<std::uint32_t>(c)] += w * cell[c];
        }
      }
      acc.swap(next);
    }
    k.rows[s].assign(acc.begin(), acc.end());
  }
  return k;
}

ExactKernel compose(const ExactKernel& first, const ExactKernel& second) {
  if (first.n != second.n) throw Error(ErrorCode::kLengthMismatch, "kernels on different ring sizes");
  ExactKernel k;
  k.n = first.n;
  k.rows.resize(first.rows.size());
  for (std::size_t s = 0; s < first.rows.size(); ++s) {
    if (first.rows[s].empty()) continue;
    std::map<std::uint32_t, double> acc;
    for (const auto& [mid, w1] : first.rows[s]) {
      if (second.rows[mid].empty()) {
        throw Error(ErrorCode::kInvalidSymbol, "composition leaves the domain of the second kernel");
      }
      for (const auto& [t, w2] : second.rows[mid]) acc[t] += w1 * w2;
    }
    k.rows[s].assign(acc.begin(), acc.end());
  }
  return k;
}

double kernel_distance(const ExactKernel& a, const ExactKernel& b) {
  if (a.n != b.n) throw Error(ErrorCode::kLengthMismatch, "kernels on different ring sizes");
  double worst = 0.0;
  for (std::size_t s = 0; s < a.rows.size(); ++s) {
    const auto& ra = a.rows[s];
    const auto& rb = b.rows[s];
    if (ra.empty() != rb.empty()) return 1.0;
    std::size_t i = 0, j = 0;
    while (i < ra.size() || j < rb.size()) {
      if (j == rb.size() || (i < ra.size() && ra[i].first < rb[j].first)) {
        worst = std::max(worst, std::abs(ra[i++].second));
      } else if (i == ra.size() || rb[j].first < ra[i].first) {
        worst = std::max(worst, std::abs(rb[j++].second));
      } else {
        worst = std::max(worst, std::abs(ra[i++].second - rb[j++].second));
      }
    }
  }
  return worst;
}

bool stavskaya_identity_check(double p, int n, double tol) {
  if (n > 8) throw Error(ErrorCode::kWordTooLong, "exact kernel enumeration limited to n <= 8");
  const ExactKernel b = exact_kernel(PcaKind::kB, n, p);
  const ExactKernel composed = compose(exact_kernel(PcaKind::kStavskaya, n, p), exact_kernel(PcaKind::kFlip, n, p));
  return kernel_distance(b, composed) <= tol;
}

}  // namespace perc
