#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace punn {

/// Parsed command line for the batch driver; echoed into every artifact.
struct CliOptions {
  std::string command;  // inspect | vqe | train
  std::string fcidump;
  std::string mode = "exact";  // exact | shots
  long shots = 1024;
  int seeds = 5;
  int k_width = 2;
  std::uint64_t seed = 1;
  std::string circuit = "puccd";  // puccd | hadamard (train: hadamard runs the comparison)
  std::string out;                // artifact path; empty prints JSON to stdout
  int threads = 1;
  std::string theta_artifact;  // train: reuse angles from a vqe artifact
  long max_nn_steps = 64000;
  int macro_iterations = 15;
  long resample_interval = 30;
  double stop_tol = 0.0;
  long stop_window = 2000;
  long min_steps = 0;
};

/// System summary with the mean-field and exact-diagonalization reference
/// energies.  Exit 0 on success, 2 on unreadable/malformed input.
int cmd_inspect(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Optimize the pair-circuit angles and store them as a JSON artifact.
/// Exit 3 when the optimizer stops without meeting its gradient tolerance.
int cmd_vqe(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Train the amplitude model on top of a fixed circuit (optionally taking the
/// angles from a vqe artifact) and write the report JSON plus per-step trace
/// CSV.  --circuit hadamard runs the paired circuit/uniform comparison.
int cmd_train(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Dispatch on opt.command and map failures to exit codes: 0 success,
/// 1 usage, 2 input parsing, 3 numerical.
int run_cli(const CliOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace punn
