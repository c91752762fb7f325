#pragma once

// Closed forms and exhaustive computations: the stationary Markov measure of
// the hard-core PCA, its transfer-matrix square root, cylinder pushforwards,
// the ?-weight system, and exact hard-core Gibbs distributions.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "perc/graph.hpp"
#include "perc/pca.hpp"
#include "perc/symbols.hpp"

namespace perc {

struct MarkovMeasure {
  std::array<std::array<double, 2>, 2> T{};
  std::array<double, 2> pi{};

  // Stationary chain probability of a {0,1} word; words containing ? get 0.
  double cylinder(const Word& w) const;
};

MarkovMeasure matrix_P(double p);
// Doob transform of the hard-core transfer matrix [[1, sqrt(l)], [sqrt(l), 0]].
MarkovMeasure matrix_Q(double lambda);
std::array<std::array<double, 2>, 2> square(const std::array<std::array<double, 2>, 2>& m);

double win_probability(double p);
double conditional_win_probability(double p);

using CylinderFn = std::function<double(const Word&)>;

// Cylinder probabilities for every word of length 1..max_len.
class CylinderTable {
 public:
  explicit CylinderTable(int max_len = 0);

  static CylinderTable from_function(const CylinderFn& f, int max_len);
  static CylinderTable from_markov(const MarkovMeasure& m, int max_len);
  // Uniform measure over the rotations and reflections of a ring word.
  static CylinderTable from_ring_orbit(const Word& ring, int max_len);

  int max_len() const { return max_len_; }
  double prob(const Word& w) const;
  void set(const Word& w, double value);
  CylinderFn as_function() const;

  // Max violation of prob(w) = sum_s prob(w s) = sum_s prob(s w) and of
  // normalization at each length.
  double consistency_error() const;

 private:
  int max_len_;
  std::vector<std::vector<double>> probs_;  // [len][base-3 index, first symbol least significant]
};

// sum over u of length |w|+1 of measure(u) * prod_i K(u_i u_{i+1} -> w_i).
double pushforward_cylinder(PcaKind kind, const CylinderFn& measure, const Word& w, double p);
double pushforward_cylinder(PcaKind kind, const MarkovMeasure& measure, const Word& w, double p);
// Throws word-too-long unless |w| + 1 <= table.max_len().
double pushforward_cylinder(PcaKind kind, const CylinderTable& table, const Word& w, double p);
CylinderTable pushforward_table(PcaKind kind, const CylinderTable& table, double p);

// One-sided weight of the ? at `pos` looking right: 3 before "01", 2 before
// "0", else 1. Positions past the end count as absent.
int right_weight(const Word& w, std::size_t pos);
int left_weight(const Word& w, std::size_t pos);
int symmetric_weight(const Word& w, std::size_t pos);

struct WeightReport {
  std::vector<int> weights;  // right weight per position, 0 for non-?
  double per_site = 0.0;     // mu(?01) + mu(?0) + mu(?) under the orbit measure
};

WeightReport weight_report(const Word& ring);

struct WeightCheckReport {
  int n = 0;
  std::size_t words_checked = 0;
  std::size_t identity_failures = 0;
  std::size_t inequality_failures = 0;
  std::size_t strict_failures = 0;   // contains 1?1 but weight did not drop
  std::size_t balance_failures = 0;  // drop differs from mu(1?1)
  std::size_t pushforward_failures = 0;
  std::vector<std::string> examples;
  bool ok() const {
    return identity_failures + inequality_failures + strict_failures + balance_failures + pushforward_failures == 0;
  }
};

// Exhaustive over all ring words of length n (5 <= n <= 10).
// `fault` perturbs the D image to exercise the failure path.
WeightCheckReport weight_identities_check(int n, bool fault = false);

struct GibbsResult {
  std::vector<double> prob;  // indexed by occupation bitmask
  double Z = 0.0;
  std::vector<double> marginals;
};

GibbsResult gibbs_exact(const Graph& g, double lambda);

// Max over classes of max_sigma |(pi K_i)(sigma) - pi(sigma)|.
double kernel_stationarity_check(const Graph& g, double lambda, UpdateVariant variant);

}  // namespace perc
