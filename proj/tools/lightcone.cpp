#include <cstdio>
#include <optional>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "lightcone/config.hpp"
#include "lightcone/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* c = cmd->add_option("--config", args.config_path, "experiment config JSON");
  if (config_required) c->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
  cmd->add_option("--jobs", args.jobs, "worker thread count");
  cmd->add_option("--seed", args.seed, "seed override");
}

int run_from_config(const CommonArgs& args, lightcone::ExperimentKind expected) {
  lightcone::ParseOutcome outcome = lightcone::parse_config(args.config_path);
  if (!outcome.config) {
    std::fprintf(stderr, "config errors in %s:\n", args.config_path.c_str());
    for (const std::string& e : outcome.errors) std::fprintf(stderr, "  %s\n", e.c_str());
    return 2;
  }
  lightcone::ExperimentConfig cfg = std::move(*outcome.config);
  if (cfg.kind != expected) {
    std::fprintf(stderr, "config kind '%s' does not match subcommand '%s'\n",
                 lightcone::kind_name(cfg.kind), lightcone::kind_name(expected));
    return 2;
  }
  if (args.jobs > 0) omp_set_num_threads(args.jobs);
  if (args.seed) cfg.seed = *args.seed;
  std::string out_dir = args.out_dir.empty() ? cfg.output.directory : args.out_dir;
  lightcone::RunResult result = lightcone::run_experiment(cfg, out_dir);
  std::printf("%s\n", result.summary.c_str());
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral light-cone simulator and bound verifier"};
  app.require_subcommand(1);

  struct Sub {
    lightcone::ExperimentKind kind;
    CLI::App* cmd;
    CommonArgs args;
  };
  std::vector<Sub> subs;
  subs.reserve(8);  // option bindings point into the vector, no reallocation allowed
  auto add_sub = [&](lightcone::ExperimentKind kind, const char* help, bool config_required = true) {
    Sub s;
    s.kind = kind;
    s.cmd = app.add_subcommand(lightcone::kind_name(kind), help);
    subs.push_back(s);
    add_common(subs.back().cmd, subs.back().args, config_required);
    return subs.back().cmd;
  };

  add_sub(lightcone::ExperimentKind::Simulate, "evolve a state and dump the trajectory");
  add_sub(lightcone::ExperimentKind::VerifyBound,
          "measure leakage outside the light cone against the exponential bound");
  add_sub(lightcone::ExperimentKind::Sharpness,
          "free-evolution front tracking inside the cone (bound saturation)");
  add_sub(lightcone::ExperimentKind::CheckPotential,
          "admissibility of a potential family for unitary evolution");
  add_sub(lightcone::ExperimentKind::SymbolAudit,
          "lattice audit of the square-root symbols and the contraction bound");
  CLI::App* tiling = add_sub(lightcone::ExperimentKind::TilingConstant,
                             "lattice sum constant of the cube-decomposition bound", false);
  add_sub(lightcone::ExperimentKind::ConeProfile, "shell-resolved mass profile around a region");

  // tiling-constant also runs straight from flags, no config file needed
  double tiling_dist = 0.0, tiling_edge = 0.5;
  int tiling_dim = 1;
  tiling->add_option("--dist", tiling_dist, "separation distance");
  tiling->add_option("--edge", tiling_edge, "cube edge (default 0.5)");
  tiling->add_option("--dim", tiling_dim, "spatial dimension (default 1)");

  CLI11_PARSE(app, argc, argv);

  for (Sub& s : subs) {
    if (!s.cmd->parsed()) continue;
    if (s.kind == lightcone::ExperimentKind::TilingConstant && s.args.config_path.empty()) {
      if (!(tiling_dist > 0.0)) {
        std::fprintf(stderr, "tiling-constant needs --config or --dist/--edge/--dim\n");
        return 2;
      }
      lightcone::ExperimentConfig cfg;
      cfg.kind = lightcone::ExperimentKind::TilingConstant;
      cfg.tiling = {tiling_dist, tiling_edge, tiling_dim};
      cfg.raw_text = "";
      cfg.source_path = "(flags)";
      if (s.args.jobs > 0) omp_set_num_threads(s.args.jobs);
      std::string out_dir = s.args.out_dir.empty() ? cfg.output.directory : s.args.out_dir;
      lightcone::RunResult result = lightcone::run_experiment(cfg, out_dir);
      std::printf("%s\n", result.summary.c_str());
      return result.exit_code;
    }
    return run_from_config(s.args, s.kind);
  }
  return 2;
}
