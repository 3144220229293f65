#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "punn/hamiltonians.hpp"
#include "punn/integrals.hpp"
#include "punn/measurement.hpp"
#include "punn/statevector.hpp"

namespace punn {

/// Circuit-optimizer settings.
struct VqeOptions {
  std::string mode = "exact";  // exact | shots
  long shots = 1024;
  std::uint64_t seed = 1;
  int max_iterations = 200;  // exact mode: quasi-Newton iteration cap
  double grad_tol = 1e-7;    // exact mode: infinity-norm gradient stop
  int sweeps = 8;            // shot mode: coordinate sweeps over all angles
  double delta = 0.1;        // shot mode: probe offset in radians
};

struct VqeResult {
  std::vector<double> theta;
  double energy = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trace;  // energy per accepted iterate / sweep
};

/// 3-basis sampled estimate of <state| sz_to_pauli(h) |state>: diagonal terms
/// from computational draws, XX terms in the all-H basis, YY terms in the
/// S^dag-then-H basis, each family on its own sub-stream of `seed`.
TermEstimate sampled_pair_energy(const State& state, const SzHamiltonian& h, long shots,
                                 std::uint64_t seed);

/// Optimize the pair-circuit angles from the Hartree-Fock start (theta = 0).
/// Exact mode: limited-memory quasi-Newton on the exact expectation with
/// central-difference gradients (step 1e-6).  Shot mode: sequential
/// single-parameter quadratic-fit coordinate descent on the sampled estimate,
/// three evaluations per angle per sweep.
VqeResult vqe_puccd(const SzHamiltonian& h, int n_pairs, const VqeOptions& opt = {});

struct TrainConfig {
  std::string mode = "exact";  // exact | shots
  std::string circuit = "puccd";  // puccd | hadamard
  long shots = 1024;
  int seeds = 5;
  int k_width = 2;
  std::uint64_t base_seed = 1;
  long max_nn_steps = 64000;    // exact mode: optimizer step cap
  long resample_interval = 30;  // shot mode: steps per frozen sample set
  int macro_iterations = 15;    // shot mode: number of sample acquisitions
  bool joint_finetune = false;  // exact mode: interleave circuit passes
  long finetune_interval = 1000;
  // plateau stop (exact mode): end a seed after stop_window consecutive steps
  // without improving the best energy by more than stop_tol (0 disables),
  // never before min_steps.
  double stop_tol = 0.0;
  long stop_window = 2000;
  long min_steps = 0;
  int threads = 1;
};

struct SeedRun {
  int seed_index = 0;
  double e_initial = 0.0;
  double e_final = 0.0;
  double e_best = 0.0;
  long steps = 0;
  std::vector<double> trace;  // length steps + 1
};

struct TrainReport {
  TrainConfig config;
  std::vector<double> theta;  // circuit angles the run used
  double e_circuit = 0.0;     // exact pair-Hamiltonian energy of the circuit
  std::vector<SeedRun> seeds;
  double e_best = 0.0;  // lowest energy over all seeds
  int best_seed = 0;
};

/// Train the amplitude model on top of a fixed circuit.  Exact mode contracts
/// the full particle-number sector (the enumerated A/B quotient) for machine-
/// precision gradients; shot mode redraws measurement streams every
/// resample_interval steps for macro_iterations rounds.  Per seed: warm-start
/// model, AdaMax with the step-decay schedule, energy trace per step; the
/// lowest energy across seeds is reported.
TrainReport train_punn(const IntegralSet& ints, const std::vector<double>& theta_star,
                       const TrainConfig& cfg);

struct BaselineReport {
  TrainReport puccd;
  TrainReport hadamard;
  // per-step statistics across seeds, length = common trace length
  std::vector<double> puccd_mean, puccd_std;
  std::vector<double> hadamard_mean, hadamard_std;
};

/// Identical training protocol with the pair circuit and with a uniform
/// superposition in its place, for accuracy/variance comparison.
BaselineReport baseline_compare(const IntegralSet& ints, const std::vector<double>& theta_star,
                                const TrainConfig& cfg);

std::string report_to_json(const TrainReport& report);
std::string trace_csv(const TrainReport& report);
std::string baseline_to_json(const BaselineReport& report);
std::string baseline_trace_csv(const BaselineReport& report);

}  // namespace punn
