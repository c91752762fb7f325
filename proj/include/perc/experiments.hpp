#pragma once

// Run configurations and the experiment drivers behind the command-line tool.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "perc/exact.hpp"
#include "perc/game.hpp"
#include "perc/graph.hpp"
#include "perc/hardcore.hpp"
#include "perc/lattice.hpp"

namespace perc {

struct RunConfig {
  std::string command;
  std::vector<std::string> families{"z2"};
  std::vector<double> p_grid{0.2};
  std::vector<int> depths{200};
  std::vector<Coord> sizes;  // empty: per-family default
  std::vector<std::uint64_t> seeds{1};
  int steps = 100;
  std::string variant = "standard";
  std::string kind = "F";     // pca-run
  std::string init = "?";     // pca-run: repeated pattern; glauber: empty/class0/class1
  int ring = 0;               // verify: weight-identity ring length (0 = battery default)
  bool fault_inject = false;  // verify: perturb P before the stationarity check
  std::string out;            // CSV path (empty = stdout)
  std::string image;          // solve2d PPM path
};

std::string to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& text);

// "N" -> 0..N-1, "a:b" -> a..b-1, "1,5,9" -> list.
std::vector<std::uint64_t> parse_seeds(const std::string& text);
std::vector<double> parse_p_grid(const std::string& text);
// "32x32" or "32,32".
std::vector<Coord> parse_sizes(const std::string& text);
UpdateVariant parse_variant(const std::string& text);

// Default transverse sizes: 256 for d = 2, else 32 per axis rounded up to the
// family's torus unit.
std::vector<Coord> default_sizes(const GraphFamily& family);

// CSV headers (schema version 1).
inline constexpr const char* kProfileHeader = "depth,q_fraction,stderr,seeds";
inline constexpr const char* kTrajectoryHeader = "step,density0,densityQ,density1";
inline constexpr const char* kGlauberHeader = "sweep,class,occupation,staggered_diff";
inline constexpr const char* kWinCurveExactHeader = "p,win_probability,conditional_win_probability";
inline constexpr const char* kWinCurveMcHeader = "p,depth,seeds,empirical,stderr,win_probability";
inline constexpr const char* kDrawScanHeader = "family,p,depth,sensitivity,stderr,q_fraction,q_stderr,seeds";
inline constexpr const char* kSolve2dHeader = "p,N,seed,closed,win,loss,draw";

// Each command writes CSV to `out` and returns a process exit code.
int cmd_solve2d(const RunConfig& cfg, std::ostream& out);
int cmd_win_curve(const RunConfig& cfg, std::ostream& out);
int cmd_draw_scan(const RunConfig& cfg, std::ostream& out);
int cmd_glauber(const RunConfig& cfg, std::ostream& out);
int cmd_couple_verify(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_pca_run(const RunConfig& cfg, std::ostream& out);

struct WinEstimate {
  double empirical = 0.0;
  double stderr_ = 0.0;
  int seeds = 0;
};

// Fraction of seeds whose origin solves to 0 on Triangle2D(n) with the
// all-zero boundary.
WinEstimate estimate_win_probability(double p, int n, const std::vector<std::uint64_t>& seeds);

// ---------------------------------------------------------------------------
// Exact checks shared by `verify` and the tests.

// Max |A-pushforward - cylinder| over words of length 1..max_len under the
// Markov measure of matrix_P(p). `perturb` is added to P(0,0) (and removed
// from P(0,1)) before the check.
double stationarity_error(double p, int max_len, double perturb = 0.0);
// Max entrywise |Q^2 - P| with Q = matrix_Q(1/p - 1).
double pq_error(double p);
// Max kernel distance of F vs R0 o D, G vs R1 o D and B vs Flip o Stavskaya.
double composition_error(int n, double p);

// Small graphs used for exact stationarity checks.
Graph grid_cylinder_3x4();     // 3 rows, 4 columns wrapped, parity classes
Graph triangular_patch_12();   // 3x4 parallelogram of the triangular lattice, classes (a+b) mod 3

}  // namespace perc
