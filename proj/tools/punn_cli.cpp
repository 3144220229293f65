#include <iostream>

#include "CLI11.hpp"
#include "punn/cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pair-circuit + neural-amplitude ground-state energy toolkit"};
  app.require_subcommand(1);
  punn::CliOptions opt;

  CLI::App* inspect =
      app.add_subcommand("inspect", "parse a FCIDUMP file and report reference energies");
  CLI::App* vqe = app.add_subcommand("vqe", "optimize the pair-circuit angles");
  CLI::App* train =
      app.add_subcommand("train", "train the neural amplitude model on a fixed circuit");
  for (CLI::App* cmd : {inspect, vqe, train}) {
    cmd->add_option("--fcidump", opt.fcidump, "FCIDUMP integral file")->required();
    cmd->add_option("--seed", opt.seed, "global random seed");
    cmd->add_option("--out", opt.out, "artifact output path");
  }
  for (CLI::App* cmd : {vqe, train}) {
    cmd->add_option("--mode", opt.mode, "estimator mode: exact or shots");
    cmd->add_option("--shots", opt.shots, "shots per measured basis");
  }
  train->add_option("--seeds", opt.seeds, "independent training restarts");
  train->add_option("--k", opt.k_width, "network width multiplier");
  train->add_option("--circuit", opt.circuit, "puccd, or hadamard for the baseline comparison");
  train->add_option("--threads", opt.threads, "worker cap for seed restarts");
  train->add_option("--theta", opt.theta_artifact, "vqe artifact supplying the circuit angles");
  train->add_option("--steps", opt.max_nn_steps, "exact-mode optimizer steps");
  train->add_option("--macros", opt.macro_iterations, "shot-mode sample acquisitions");
  train->add_option("--interval", opt.resample_interval, "shot-mode steps per sample set");
  train->add_option("--stop-tol", opt.stop_tol, "plateau improvement threshold (0 disables)");
  train->add_option("--stop-window", opt.stop_window, "plateau patience in steps");
  train->add_option("--min-steps", opt.min_steps, "steps before the plateau stop may fire");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  opt.command = app.get_subcommands().front()->get_name();
  return punn::run_cli(opt, std::cout, std::cerr);
}
