#include "revwalk/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  revwalk::cli::RunConfig config;
  CLI::App app{"Markov chain reversibilization and quantum walk reflections"};
  app.add_option("command", config.command, "analyze | sweep | reflect | qsd | verify")
      ->required()
      ->check(CLI::IsMember({"analyze", "sweep", "reflect", "qsd", "verify"}));
  app.add_option("--kernel", config.kernel_path, "kernel spec (JSON)");
  double eps = 0.0;
  auto* eps_opt = app.add_option("--eps", eps, "accuracy / mixing threshold");
  app.add_option("--rho", config.rho, "reversibility ratio threshold")->capture_default_str();
  app.add_option("--jmax", config.j_max, "largest j in sweeps")->capture_default_str();
  app.add_option("--kmax", config.k_max, "largest k in the pseudo-spectral gap")->capture_default_str();
  app.add_option("--tmax", config.t_max, "mixing time search limit (0: 10 n^3)")->capture_default_str();
  app.add_option("--method", config.method, "reflection route")
      ->check(CLI::IsMember({"flat", "curved", "mixed"}))
      ->capture_default_str();
  app.add_option("--subset", config.subsets, "state set such as 0-6 (repeatable)");
  app.add_option("--j", config.js, "step counts for qsd (repeatable)");
  app.add_option("--eps-mix", config.eps_mix, "mixing threshold for the mixed route")->capture_default_str();
  app.add_option("--out", config.out_path, "output file (default stdout)");
  app.add_option("--poly-out", config.poly_out_path, "write the reflection polynomial here");
  app.add_option("--filter", config.filter, "verify: run one invariant group");
  app.add_option("--seed", config.seed, "reserved");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(revwalk::cli::Exit::parse_error);
  }
  if (eps_opt->count() > 0) config.eps = eps;
  return static_cast<int>(revwalk::cli::run(config, std::cout, std::cerr));
}
