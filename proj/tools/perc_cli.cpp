#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "perc/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> families;
  std::string p, p_grid, sizes, seeds, depth;
  int steps = -1;
  std::string variant, kind, init, out, image;
  int ring = 0;
  bool fault = false;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--family", f.families, "graph family, e.g. z2, even:3, subset:3 (repeatable)");
  sub->add_option("--p", f.p, "closed-site probability");
  sub->add_option("--p-grid", f.p_grid, "comma-separated list of p values");
  sub->add_option("--depth", f.depth, "depth N / K, or a comma-separated list");
  sub->add_option("--size", f.sizes, "transverse sizes, e.g. 32x32 (ring length for pca-run)");
  sub->add_option("--seeds", f.seeds, "seed count N, range a:b, or list s1,s2,...");
  sub->add_option("--steps", f.steps, "PCA steps or Glauber sweeps");
  sub->add_option("--variant", f.variant, "standard or extended");
  sub->add_option("--kind", f.kind, "PCA kind: A B F G D R0 R1 stavskaya flip");
  sub->add_option("--init", f.init, "pca-run: repeated initial pattern; glauber: empty, class0, class1");
  sub->add_option("--out", f.out, "CSV output path (default stdout)");
  sub->add_option("--image", f.image, "PPM output path (solve2d)");
}

perc::RunConfig build_config(const std::string& command, const Flags& f) {
  perc::RunConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw perc::Error(perc::ErrorCode::kIo, "cannot read " + f.config);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = perc::config_from_json(ss.str());
  }
  cfg.command = command;
  if (!f.families.empty()) cfg.families = f.families;
  if (!f.p.empty()) cfg.p_grid = perc::parse_p_grid(f.p);
  if (!f.p_grid.empty()) cfg.p_grid = perc::parse_p_grid(f.p_grid);
  if (!f.depth.empty()) {
    cfg.depths.clear();
    std::stringstream ss(f.depth);
    for (std::string part; std::getline(ss, part, ',');) cfg.depths.push_back(std::stoi(part));
  }
  if (!f.sizes.empty()) cfg.sizes = perc::parse_sizes(f.sizes);
  if (!f.seeds.empty()) cfg.seeds = perc::parse_seeds(f.seeds);
  if (f.steps >= 0) cfg.steps = f.steps;
  if (!f.variant.empty()) cfg.variant = f.variant;
  if (!f.kind.empty()) cfg.kind = f.kind;
  if (!f.init.empty()) cfg.init = f.init;
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.image.empty()) cfg.image = f.image;
  if (f.ring != 0) cfg.ring = f.ring;
  if (f.fault) cfg.fault_inject = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Percolation games, PCAs and hard-core dynamics"};
  app.require_subcommand(1);
  Flags flags;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve2d", "solve the game on a triangle of Z^2 and draw it"},
      {"win-curve", "first-player win probability: closed form, or Monte Carlo with --seeds"},
      {"draw-scan", "boundary sensitivity and draw density across families and depths"},
      {"glauber", "class-update hard-core chain on a doubling torus"},
      {"couple-verify", "check the game / Glauber pathwise coupling"},
      {"verify", "run the exact verification battery"},
      {"pca-run", "run a one-dimensional PCA on a ring"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_flags(sub, flags);
    subs[name] = sub;
  }
  subs["verify"]->add_flag("--fault-inject", flags.fault, "perturb P before the stationarity check");
  subs["verify"]->add_option("--ring", flags.ring, "check the weight identities on one ring length");

  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }

  try {
    const perc::RunConfig cfg = build_config(command, flags);
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw perc::Error(perc::ErrorCode::kIo, "cannot write " + cfg.out);
    }
    std::ostream& out = cfg.out.empty() ? std::cout : file;
    if (command == "solve2d") return perc::cmd_solve2d(cfg, out);
    if (command == "win-curve") return perc::cmd_win_curve(cfg, out);
    if (command == "draw-scan") return perc::cmd_draw_scan(cfg, out);
    if (command == "glauber") return perc::cmd_glauber(cfg, out);
    if (command == "couple-verify") return perc::cmd_couple_verify(cfg, out);
    if (command == "verify") return perc::cmd_verify(cfg, out);
    if (command == "pca-run") return perc::cmd_pca_run(cfg, out);
  } catch (const perc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
