#include "perc/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "perc/parallel.hpp"
#include "perc/pca.hpp"

namespace perc {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  std::istringstream is(s);
  T v{};
  is >> v;
  if (!is || !is.eof()) throw Error(ErrorCode::kInvalidConfig, std::string("bad ") + what + " '" + s + "'");
  return v;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

std::vector<Coord> sizes_for(const RunConfig& cfg, const GraphFamily& family) {
  if (static_cast<int>(cfg.sizes.size()) == family.dim() - 1) return cfg.sizes;
  if (cfg.sizes.size() == 1) return std::vector<Coord>(family.dim() - 1, cfg.sizes[0]);
  return default_sizes(family);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::string to_json(const RunConfig& cfg) {
  json j = {{"command", cfg.command}, {"families", cfg.families}, {"p_grid", cfg.p_grid},
            {"depths", cfg.depths},   {"sizes", cfg.sizes},       {"seeds", cfg.seeds},
            {"steps", cfg.steps},     {"variant", cfg.variant},   {"kind", cfg.kind},
            {"init", cfg.init},       {"ring", cfg.ring},         {"fault_inject", cfg.fault_inject},
            {"out", cfg.out},         {"image", cfg.image}};
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
  RunConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") cfg.command = value.get<std::string>();
      else if (key == "families") cfg.families = value.get<std::vector<std::string>>();
      else if (key == "family") cfg.families = {value.get<std::string>()};
      else if (key == "p_grid") cfg.p_grid = value.get<std::vector<double>>();
      else if (key == "p") cfg.p_grid = {value.get<double>()};
      else if (key == "depths") cfg.depths = value.get<std::vector<int>>();
      else if (key == "depth") cfg.depths = {value.get<int>()};
      else if (key == "sizes") cfg.sizes = value.get<std::vector<Coord>>();
      else if (key == "seeds") {
        cfg.seeds = value.is_string() ? parse_seeds(value.get<std::string>())
                                      : value.get<std::vector<std::uint64_t>>();
      }
      else if (key == "steps") cfg.steps = value.get<int>();
      else if (key == "variant") cfg.variant = value.get<std::string>();
      else if (key == "kind") cfg.kind = value.get<std::string>();
      else if (key == "init") cfg.init = value.get<std::string>();
      else if (key == "ring") cfg.ring = value.get<int>();
      else if (key == "fault_inject") cfg.fault_inject = value.get<bool>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "image") cfg.image = value.get<std::string>();
      else throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad config value: ") + e.what());
  }
  return cfg;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (text.find(',') != std::string::npos) {
    for (const auto& s : split(text, ',')) seeds.push_back(parse_number<std::uint64_t>(s, "seed"));
  } else if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw Error(ErrorCode::kInvalidConfig, "seed range must be a:b");
    const auto a = parse_number<std::uint64_t>(parts[0], "seed");
    const auto b = parse_number<std::uint64_t>(parts[1], "seed");
    for (std::uint64_t s = a; s < b; ++s) seeds.push_back(s);
  } else {
    const auto n = parse_number<std::uint64_t>(text, "seed count");
    for (std::uint64_t s = 0; s < n; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw Error(ErrorCode::kInvalidConfig, "empty seed list");
  return seeds;
}

std::vector<double> parse_p_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& s : split(text, ',')) {
    const double p = parse_number<double>(s, "p");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "p outside [0,1]: " + s);
    grid.push_back(p);
  }
  return grid;
}

std::vector<Coord> parse_sizes(const std::string& text) {
  const char sep = text.find('x') != std::string::npos ? 'x' : ',';
  std::vector<Coord> sizes;
  for (const auto& s : split(text, sep)) sizes.push_back(parse_number<Coord>(s, "size"));
  return sizes;
}

UpdateVariant parse_variant(const std::string& text) {
  if (text == "standard") return UpdateVariant::kStandard;
  if (text == "extended") return UpdateVariant::kExtended;
  throw Error(ErrorCode::kInvalidConfig, "variant must be standard or extended");
}

std::vector<Coord> default_sizes(const GraphFamily& family) {
  const Coord unit = torus_unit(family);
  if (family.dim() == 2) return {((256 + unit - 1) / unit) * unit};
  return std::vector<Coord>(family.dim() - 1, ((32 + unit - 1) / unit) * unit);
}

// ---------------------------------------------------------------------------
// Exact checks

double stationarity_error(double p, int max_len, double perturb) {
  MarkovMeasure m = matrix_P(p);
  m.T[0][0] += perturb;
  m.T[0][1] -= perturb;
  double worst = 0.0;
  for (int len = 1; len <= max_len; ++len) {
    const std::uint32_t count = 1u << len;
    for (std::uint32_t bits = 0; bits < count; ++bits) {
      Word w(len);
      for (int i = 0; i < len; ++i) w[i] = (bits >> i & 1u) ? Symbol3::kOne : Symbol3::kZero;
      worst = std::max(worst, std::abs(pushforward_cylinder(PcaKind::kA, m, w, p) - m.cylinder(w)));
    }
  }
  return worst;
}

double pq_error(double p) {
  const auto q2 = square(matrix_Q(1.0 / p - 1.0).T);
  const auto pm = matrix_P(p).T;
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(q2[i][j] - pm[i][j]));
  }
  return worst;
}

double composition_error(int n, double p) {
  const ExactKernel d = exact_kernel(PcaKind::kDdet, n, p);
  const double f = kernel_distance(exact_kernel(PcaKind::kF, n, p), compose(d, exact_kernel(PcaKind::kR0, n, p)));
  const double g = kernel_distance(exact_kernel(PcaKind::kG, n, p), compose(d, exact_kernel(PcaKind::kR1, n, p)));
  const double b = kernel_distance(exact_kernel(PcaKind::kB, n, p),
                                   compose(exact_kernel(PcaKind::kStavskaya, n, p), exact_kernel(PcaKind::kFlip, n, p)));
  return std::max({f, g, b});
}

Graph grid_cylinder_3x4() {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> cls(12);
  auto id = [](int r, int c) { return r * 4 + ((c % 4) + 4) % 4; };
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      cls[id(r, c)] = (r + c) % 2;
      edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < 3) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return graph_from_edges(12, edges, cls, 2);
}

Graph triangular_patch_12() {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> cls(12);
  auto id = [](int a, int b) { return a * 4 + b; };
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 4; ++b) {
      cls[id(a, b)] = (a + b) % 3;
      if (a + 1 < 3) edges.emplace_back(id(a, b), id(a + 1, b));
      if (b + 1 < 4) edges.emplace_back(id(a, b), id(a, b + 1));
      if (a + 1 < 3 && b + 1 < 4) edges.emplace_back(id(a, b), id(a + 1, b + 1));
    }
  }
  return graph_from_edges(12, edges, cls, 3);
}

WinEstimate estimate_win_probability(double p, int n, const std::vector<std::uint64_t>& seeds) {
  auto region = std::make_shared<const Region>(Region::triangle(GraphFamily::z2(), n));
  const auto boundary = boundary_values(*region, BoundarySpec::all(Symbol3::kZero));
  std::vector<double> wins(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    wins[s] = solve(region, boundary, SiteField{seeds[s], p}).origin() == Symbol3::kZero ? 1.0 : 0.0;
  });
  return {mean_of(wins), stderr_of(wins), static_cast<int>(seeds.size())};
}

// ---------------------------------------------------------------------------
// Commands

int cmd_solve2d(const RunConfig& cfg, std::ostream& out) {
  const GraphFamily family = GraphFamily::parse(cfg.families.at(0));
  const int n = cfg.depths.at(0);
  auto region = std::make_shared<const Region>(Region::triangle(family, n));
  const auto boundary = boundary_values(*region, BoundarySpec::all(Symbol3::kQuestion));
  const bool many = cfg.p_grid.size() * cfg.seeds.size() > 1;
  out << kSolve2dHeader << '\n';
  for (double p : cfg.p_grid) {
    for (std::uint64_t seed : cfg.seeds) {
      const OutcomeField f = solve(region, boundary, SiteField{seed, p});
      std::size_t closed = 0, win = 0, loss = 0, draw = 0;
      for (std::size_t i = 0; i < region->size(); ++i) {
        if (region->is_boundary(i)) continue;
        if (f.closed[i]) ++closed;
        else if (f.values[i] == Symbol3::kZero) ++win;
        else if (f.values[i] == Symbol3::kOne) ++loss;
        else ++draw;
      }
      out << p << ',' << n << ',' << seed << ',' << closed << ',' << win << ',' << loss << ',' << draw << '\n';
      if (!cfg.image.empty()) {
        std::string path = cfg.image;
        if (many) {
          std::ostringstream suffix;
          suffix << "_p" << p << "_s" << seed;
          const auto dot = path.rfind('.');
          path.insert(dot == std::string::npos ? path.size() : dot, suffix.str());
        }
        render_outcomes(f, path);
      }
    }
  }
  return 0;
}

int cmd_win_curve(const RunConfig& cfg, std::ostream& out) {
  out << std::setprecision(10);
  if (cfg.seeds.empty() || cfg.depths.empty() || cfg.depths[0] <= 0) {
    out << kWinCurveExactHeader << '\n';
    for (double p : cfg.p_grid) {
      out << p << ',' << win_probability(p) << ',' << (p < 1.0 ? conditional_win_probability(p) : 1.0) << '\n';
    }
    return 0;
  }
  out << kWinCurveMcHeader << '\n';
  const int n = cfg.depths[0];
  for (double p : cfg.p_grid) {
    const WinEstimate e = estimate_win_probability(p, n, cfg.seeds);
    out << p << ',' << n << ',' << e.seeds << ',' << e.empirical << ',' << e.stderr_ << ',' << win_probability(p)
        << '\n';
  }
  return 0;
}

int cmd_draw_scan(const RunConfig& cfg, std::ostream& out) {
  out << std::setprecision(8) << kDrawScanHeader << '\n';
  for (const auto& name : cfg.families) {
    const GraphFamily family = GraphFamily::parse(name);
    const auto sizes = sizes_for(cfg, family);
    for (double p : cfg.p_grid) {
      const auto profile = draw_density_profile(family, cfg.depths, sizes, p, cfg.seeds);
      for (std::size_t i = 0; i < cfg.depths.size(); ++i) {
        out << family.name() << ',' << p << ',' << cfg.depths[i] << ',';
        if (family.has_a2()) {
          const auto s = boundary_sensitivity(family, cfg.depths[i], sizes, p, cfg.seeds);
          out << s.origin_fraction << ',' << s.origin_stderr;
        } else {
          out << "nan,nan";
        }
        out << ',' << profile[i].q_fraction << ',' << profile[i].stderr_ << ',' << profile[i].seeds << '\n';
      }
    }
  }
  return 0;
}

int cmd_glauber(const RunConfig& cfg, std::ostream& out) {
  const GraphFamily family = GraphFamily::parse(cfg.families.at(0));
  const DoublingTorus torus = build_doubling_torus(family, sizes_for(cfg, family));
  const UpdateVariant variant = parse_variant(cfg.variant);
  const InitialState init = parse_initial_state(cfg.init == "?" ? "empty" : cfg.init);
  const double p = cfg.p_grid.at(0);
  std::vector<std::vector<SweepRow>> runs(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), [&](std::size_t s) {
    runs[s] = sweep_chain(torus, p, variant, cfg.steps, cfg.seeds[s], init);
  });
  out << std::setprecision(8) << kGlauberHeader << '\n';
  const int m = torus.graph.classes;
  for (std::size_t r = 0; r < runs[0].size(); ++r) {
    std::vector<double> occ(m, 0.0);
    double stag = 0.0;
    for (const auto& run : runs) {
      for (int i = 0; i < m; ++i) occ[i] += run[r].occupation[i] / runs.size();
      stag += run[r].staggered / runs.size();
    }
    for (int i = 0; i < m; ++i) out << runs[0][r].sweep << ',' << i << ',' << occ[i] << ',' << stag << '\n';
  }
  return 0;
}

int cmd_couple_verify(const RunConfig& cfg, std::ostream& out) {
  out << "family,depth,p,seed,comparisons,mismatches\n";
  int failures = 0;
  for (const auto& name : cfg.families) {
    const GraphFamily family = GraphFamily::parse(name);
    const auto sizes = sizes_for(cfg, family);
    for (double p : cfg.p_grid) {
      std::vector<CouplingReport> reps(cfg.seeds.size());
      parallel_for(cfg.seeds.size(), [&](std::size_t s) {
        reps[s] = game_glauber_coupling_check(family, cfg.depths.at(0), sizes, p, cfg.seeds[s]);
      });
      for (std::size_t s = 0; s < reps.size(); ++s) {
        out << family.name() << ',' << cfg.depths[0] << ',' << p << ',' << cfg.seeds[s] << ','
            << reps[s].comparisons << ',' << reps[s].mismatches << '\n';
        failures += !reps[s].ok;
      }
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  int passed = 0, failed = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    (ok ? passed : failed)++;
  };
  auto num = [](double x) {
    std::ostringstream os;
    os << std::setprecision(3) << x;
    return os.str();
  };

  if (cfg.ring != 0) {
    // A single weight-identity request; rejects rings below 5.
    const auto rep = weight_identities_check(cfg.ring);
    report("weight-identities n=" + std::to_string(cfg.ring), rep.ok(),
           std::to_string(rep.words_checked) + " words");
    return failed == 0 ? 0 : 1;
  }

  const double perturb = cfg.fault_inject ? 1e-6 : 0.0;
  double worst = 0.0, pq = 0.0;
  for (int i = 1; i <= 9; ++i) {
    worst = std::max(worst, stationarity_error(i / 10.0, 6, perturb));
    pq = std::max(pq, pq_error(i / 10.0));
  }
  report("stationarity A_p mu_p = mu_p", worst <= 1e-12, "max error " + num(worst));
  report("P = Q^2", pq <= 1e-10, "max error " + num(pq));

  double comp = 0.0;
  for (int n = 4; n <= 6; ++n) {
    for (double p : {0.25, 0.5, 0.75}) comp = std::max(comp, composition_error(n, p));
  }
  report("composition F=R0.D, G=R1.D, B=Flip.Stavskaya", comp <= 1e-12, "max error " + num(comp));

  bool weights = true;
  std::size_t words = 0;
  for (int n = 5; n <= 7; ++n) {
    const auto rep = weight_identities_check(n);
    weights = weights && rep.ok();
    words += rep.words_checked;
  }
  report("weight identities", weights, std::to_string(words) + " ring words");

  double kern = 0.0;
  for (double lambda : {0.5, 1.0, 3.0}) {
    for (const Graph& g : {cycle_graph(10), grid_cylinder_3x4(), triangular_patch_12()}) {
      kern = std::max(kern, kernel_stationarity_check(g, lambda, UpdateVariant::kStandard));
      if (lambda <= 1.0) kern = std::max(kern, kernel_stationarity_check(g, lambda, UpdateVariant::kExtended));
    }
  }
  report("class-update stationarity", kern <= 1e-12, "max deviation " + num(kern));

  struct Case {
    GraphFamily family;
    int depth;
    std::vector<Coord> sizes;
    double p;
  };
  const std::vector<Case> cases = {{GraphFamily::z2(), 50, {64}, 0.3},
                                   {GraphFamily::even_sublattice(3), 30, {16, 16}, 0.2},
                                   {GraphFamily::subset_increment(3), 30, {12, 12}, 0.3},
                                   {GraphFamily::even_sublattice_extended(3), 30, {16, 16}, 0.5}};
  for (const auto& c : cases) {
    std::size_t mismatches = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      mismatches += game_glauber_coupling_check(c.family, c.depth, c.sizes, c.p, seed).mismatches;
    }
    report("coupling " + c.family.name(), mismatches == 0, std::to_string(mismatches) + " mismatches");
  }

  out << "verify: " << passed << " passed, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

int cmd_pca_run(const RunConfig& cfg, std::ostream& out) {
  const PcaKind kind = parse_pca_kind(cfg.kind);
  const std::size_t n = cfg.sizes.empty() ? 512 : static_cast<std::size_t>(cfg.sizes[0]);
  const Word pattern = parse_word(cfg.init.empty() ? "?" : cfg.init);
  Word initial(n);
  for (std::size_t i = 0; i < n; ++i) initial[i] = pattern[i % pattern.size()];
  const double p = cfg.p_grid.at(0);
  std::vector<std::vector<std::array<double, 3>>> runs(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), [&](std::size_t s) {
    runs[s] = trajectory_stats(kind, initial, SiteField{cfg.seeds[s], p}, cfg.steps);
  });
  out << std::setprecision(8) << kTrajectoryHeader << '\n';
  for (std::size_t t = 0; t < runs[0].size(); ++t) {
    std::array<double, 3> d{0.0, 0.0, 0.0};
    for (const auto& run : runs) {
      for (int c = 0; c < 3; ++c) d[c] += run[t][c] / runs.size();
    }
    out << t << ',' << d[0] << ',' << d[1] << ',' << d[2] << '\n';
  }
  return 0;
}

}  // namespace perc
