#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "punn/ansatz.hpp"
#include "punn/hamiltonians.hpp"
#include "punn/integrals.hpp"
#include "punn/measurement.hpp"
#include "punn/neural.hpp"
#include "punn/oracles.hpp"
#include "punn/rng.hpp"
#include "punn/solvers.hpp"
#include "punn/statevector.hpp"

using namespace punn;

namespace {

IntegralSet load_h4() { return parse_fcidump(test::data_path("h4_chain_1.0.fcidump")); }

}  // namespace

TEST_CASE("solvers: sampled pair energy is unbiased and deterministic") {
  const IntegralSet ints = load_h4();
  const SzHamiltonian h = build_sz_hamiltonian(ints);

  Rng rng(91);
  std::vector<double> theta(puccd_param_count(4, 2));
  for (double& t : theta) t = rng.next_uniform(-0.4, 0.4);
  const State state = puccd_state({4, 2, theta});
  const double exact = exact_expectation(state, sz_to_pauli(h));

  const TermEstimate est = sampled_pair_energy(state, h, 20000, 7);
  CHECK(est.shots == 3 * 20000);
  CHECK(est.std_err > 0.0);
  CHECK(std::abs(est.mean - exact) < 5.0 * est.std_err + 1e-9);

  const TermEstimate again = sampled_pair_energy(state, h, 20000, 7);
  CHECK(again.mean == est.mean);
  CHECK(again.std_err == est.std_err);
  const TermEstimate other = sampled_pair_energy(state, h, 20000, 8);
  CHECK(other.mean != est.mean);

  // with no hopping channel every family is deterministic for a basis state:
  // the diagonal draws repeat one configuration and the rotated values vanish
  SzHamiltonian diag_h = h;
  diag_h.v.assign(16, 0.0);
  const State hf = State::basis(4, hf_pair_index(4, 2));
  const TermEstimate diag = sampled_pair_energy(hf, diag_h, 64, 3);
  CHECK(diag.mean == doctest::Approx(diag_h.diagonal_energy(hf_pair_index(4, 2))).epsilon(1e-12));
  CHECK(diag.std_err < 1e-12);

  CHECK_THROWS_AS(sampled_pair_energy(state, h, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sampled_pair_energy(State::basis(3, 0), h, 16, 1), std::invalid_argument);
}

TEST_CASE("solvers: diagonal pair hamiltonian keeps the reference optimal") {
  SzHamiltonian h;
  h.n = 4;
  h.e_nuc = 0.25;
  h.h = {-2.0, -1.0, 0.5, 1.0};
  h.v.assign(16, 0.0);
  h.w.assign(16, 0.0);

  const VqeResult res = vqe_puccd(h, 2);
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  REQUIRE(res.theta.size() == 4);
  for (double t : res.theta) CHECK(t == 0.0);
  CHECK(res.energy == doctest::Approx(h.diagonal_energy(hf_pair_index(4, 2))).epsilon(1e-12));
  CHECK(res.energy == doctest::Approx(doci_ground_energy(h, 2)).epsilon(1e-12));
  CHECK(res.trace.size() == 1);
}

TEST_CASE("solvers: exact circuit optimization reaches the pair ground state") {
  const IntegralSet ints = load_h4();
  const SzHamiltonian h = build_sz_hamiltonian(ints);
  const double doci = doci_ground_energy(h, 2);
  const double hf = hf_reference_energy(ints);

  const VqeResult res = vqe_puccd(h, 2);
  CHECK(res.converged);
  CHECK(res.energy >= doci - 1e-9);
  CHECK(res.energy - doci < 5e-3);
  CHECK(res.energy < hf - 0.01);
  CHECK(res.trace.size() == static_cast<std::size_t>(res.iterations) + 1);
  // the trace is monotone: the line search only accepts descent steps
  for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] <= res.trace[i - 1]);

  // restarting from the optimum terminates immediately
  const double replay = exact_expectation(puccd_state({4, 2, res.theta}), sz_to_pauli(h));
  CHECK(replay == doctest::Approx(res.energy).epsilon(1e-12));
}

TEST_CASE("solvers: sampled-mode circuit optimization approaches the pair ground state") {
  const IntegralSet ints = load_h4();
  const SzHamiltonian h = build_sz_hamiltonian(ints);
  const double doci = doci_ground_energy(h, 2);

  VqeOptions opt;
  opt.mode = "shots";
  opt.shots = 2048;
  opt.seed = 5;
  opt.sweeps = 4;
  const VqeResult res = vqe_puccd(h, 2, opt);
  CHECK(res.iterations == 4);
  CHECK(res.trace.size() == 5);
  CHECK(std::abs(res.energy - doci) < 0.05);
  // the true energy of the returned angles should be close as well
  const double true_energy = exact_expectation(puccd_state({4, 2, res.theta}), sz_to_pauli(h));
  CHECK(std::abs(true_energy - doci) < 0.02);

  const VqeResult again = vqe_puccd(h, 2, opt);
  CHECK(again.theta == res.theta);
  CHECK(again.trace == res.trace);

  VqeOptions bad = opt;
  bad.mode = "annealed";
  CHECK_THROWS_WITH_AS(vqe_puccd(h, 2, bad), doctest::Contains("unknown mode"),
                       std::invalid_argument);
}

TEST_CASE("solvers: exact training starts at the hybrid energy and stays variational") {
  const IntegralSet ints = load_h4();
  const SzHamiltonian h = build_sz_hamiltonian(ints);
  const double fci = fci_ground_energy_determinant(ints);

  const VqeResult vqe = vqe_puccd(h, 2);

  TrainConfig cfg;
  cfg.seeds = 2;
  cfg.max_nn_steps = 300;
  cfg.base_seed = 11;
  const TrainReport report = train_punn(ints, vqe.theta, cfg);

  CHECK(report.e_circuit == doctest::Approx(vqe.energy).epsilon(1e-10));
  REQUIRE(report.seeds.size() == 2);
  for (const SeedRun& run : report.seeds) {
    CHECK(run.steps == 300);
    CHECK(run.trace.size() == 301);
    CHECK(run.e_initial == run.trace.front());
    CHECK(run.e_final == run.trace.back());
    // exact mode is a true Rayleigh quotient, so it can never undercut FCI
    CHECK(run.e_best >= fci - 1e-9);
    CHECK(run.e_best <= run.e_initial + 1e-12);
  }
  CHECK(report.e_best == std::min(report.seeds[0].e_best, report.seeds[1].e_best));

  // the warm start multiplies by the bare particle-number mask, so the first
  // trace entry must match the dense hybrid expectation exactly
  const State psi = puccd_state({4, 2, vqe.theta});
  const State phi = perturbation_state(4);
  const AmplitudeFn mask = [](std::uint64_t k, std::uint64_t j) {
    return sector_mask(k, j, 2, 2) ? 1.0 : 0.0;
  };
  const auto [num, denom] = exact_hybrid_expectation(psi, phi, mask, full_jw_hamiltonian(ints));
  CHECK(report.seeds[0].e_initial == doctest::Approx(num / denom).epsilon(1e-10));
  CHECK(std::abs(report.seeds[0].e_initial - report.e_circuit) < 0.05);

  // training should actually help within a few hundred steps
  CHECK(report.e_best < report.seeds[0].e_initial - 1e-6);

  // deterministic replay, sequential or threaded
  const TrainReport again = train_punn(ints, vqe.theta, cfg);
  TrainConfig threaded = cfg;
  threaded.threads = 2;
  const TrainReport parallel = train_punn(ints, vqe.theta, threaded);
  for (int s = 0; s < 2; ++s) {
    CHECK(again.seeds[s].trace == report.seeds[s].trace);
    CHECK(parallel.seeds[s].trace == report.seeds[s].trace);
  }
}

TEST_CASE("solvers: zero training steps reproduce the warm-start energy") {
  const IntegralSet ints = load_h4();
  TrainConfig cfg;
  cfg.seeds = 1;
  cfg.max_nn_steps = 0;
  const std::vector<double> theta(4, 0.0);
  const TrainReport report = train_punn(ints, theta, cfg);
  REQUIRE(report.seeds.size() == 1);
  CHECK(report.seeds[0].trace.size() == 1);
  CHECK(report.seeds[0].steps == 0);
  CHECK(report.seeds[0].e_initial == report.seeds[0].e_final);
  CHECK(report.seeds[0].e_best == report.seeds[0].e_initial);
  CHECK(report.e_best == report.seeds[0].e_best);
}

TEST_CASE("solvers: plateau stop ends a stalled seed early") {
  const IntegralSet ints = load_h4();
  TrainConfig cfg;
  cfg.seeds = 1;
  cfg.max_nn_steps = 1000;
  cfg.stop_tol = 1e9;  // nothing ever counts as an improvement
  cfg.stop_window = 5;
  const TrainReport report = train_punn(ints, std::vector<double>(4, 0.1), cfg);
  CHECK(report.seeds[0].steps == 5);
  CHECK(report.seeds[0].trace.size() == 6);

  TrainConfig floor = cfg;
  floor.min_steps = 20;
  const TrainReport later = train_punn(ints, std::vector<double>(4, 0.1), floor);
  CHECK(later.seeds[0].steps == 20);
}

TEST_CASE("solvers: sampled-mode training is deterministic and traceable") {
  const IntegralSet ints = load_h4();
  const double fci = fci_ground_energy_determinant(ints);

  TrainConfig cfg;
  cfg.mode = "shots";
  cfg.shots = 256;
  cfg.seeds = 1;
  cfg.base_seed = 23;
  cfg.macro_iterations = 2;
  cfg.resample_interval = 5;
  const std::vector<double> theta(4, 0.05);
  const TrainReport report = train_punn(ints, theta, cfg);
  REQUIRE(report.seeds.size() == 1);
  CHECK(report.seeds[0].steps == 10);
  CHECK(report.seeds[0].trace.size() == 11);
  CHECK(std::abs(report.seeds[0].e_final - fci) < 1.0);

  const TrainReport again = train_punn(ints, theta, cfg);
  CHECK(again.seeds[0].trace == report.seeds[0].trace);

  TrainConfig other = cfg;
  other.base_seed = 24;
  const TrainReport different = train_punn(ints, theta, other);
  CHECK(different.seeds[0].trace != report.seeds[0].trace);
}

TEST_CASE("solvers: degenerate sampled estimates carry the seed index") {
  const IntegralSet ints = load_h4();
  TrainConfig cfg;
  cfg.mode = "shots";
  cfg.circuit = "hadamard";
  cfg.shots = 1;  // a single norm draw frequently misses the sector
  cfg.seeds = 1;
  cfg.macro_iterations = 1;
  cfg.resample_interval = 1;
  bool threw = false;
  for (std::uint64_t seed = 1; seed <= 40 && !threw; ++seed) {
    cfg.base_seed = seed;
    try {
      train_punn(ints, std::vector<double>(4, 0.0), cfg);
    } catch (const std::runtime_error& err) {
      threw = true;
      const std::string what = err.what();
      CHECK(what.rfind("seed 0:", 0) == 0);
      CHECK(what.find("not positive") != std::string::npos);
    }
  }
  CHECK(threw);
}

TEST_CASE("solvers: training rejects invalid configurations") {
  const IntegralSet ints = load_h4();
  const std::vector<double> theta(4, 0.0);
  TrainConfig cfg;
  cfg.mode = "estimated";
  CHECK_THROWS_WITH_AS(train_punn(ints, theta, cfg), doctest::Contains("unknown mode"),
                       std::invalid_argument);
  cfg = {};
  cfg.circuit = "bell";
  CHECK_THROWS_WITH_AS(train_punn(ints, theta, cfg), doctest::Contains("unknown circuit"),
                       std::invalid_argument);
  cfg = {};
  cfg.seeds = 0;
  CHECK_THROWS_AS(train_punn(ints, theta, cfg), std::invalid_argument);
  cfg = {};
  CHECK_THROWS_WITH_AS(train_punn(ints, std::vector<double>(3, 0.0), cfg),
                       doctest::Contains("angle count"), std::invalid_argument);
  cfg = {};
  cfg.mode = "shots";
  cfg.macro_iterations = 0;
  CHECK_THROWS_AS(train_punn(ints, theta, cfg), std::invalid_argument);
}

TEST_CASE("solvers: joint finetuning keeps the energy variational") {
  const IntegralSet ints = load_h4();
  TrainConfig cfg;
  cfg.seeds = 1;
  cfg.max_nn_steps = 60;
  cfg.joint_finetune = true;
  cfg.finetune_interval = 20;
  const TrainReport report = train_punn(ints, std::vector<double>(4, 0.1), cfg);
  const double fci = fci_ground_energy_determinant(ints);
  CHECK(report.seeds[0].trace.size() == 61);
  CHECK(report.seeds[0].e_best >= fci - 1e-9);
  CHECK(report.seeds[0].e_best <= report.seeds[0].e_initial + 1e-12);
}

TEST_CASE("solvers: baseline comparison pairs the two circuits") {
  const IntegralSet ints = load_h4();
  const SzHamiltonian h = build_sz_hamiltonian(ints);
  const VqeResult vqe = vqe_puccd(h, 2);

  TrainConfig cfg;
  cfg.seeds = 2;
  cfg.max_nn_steps = 50;
  const BaselineReport base = baseline_compare(ints, vqe.theta, cfg);
  CHECK(base.puccd.config.circuit == "puccd");
  CHECK(base.hadamard.config.circuit == "hadamard");
  CHECK(base.puccd_mean.size() == 51);
  CHECK(base.puccd_std.size() == 51);
  CHECK(base.hadamard_mean.size() == 51);
  // the optimized pair circuit starts far below the uniform superposition
  CHECK(base.puccd.e_circuit < base.hadamard.e_circuit - 0.1);
  CHECK(base.puccd_mean[0] < base.hadamard_mean[0]);

  const std::string json_text = baseline_to_json(base);
  const nlohmann::json parsed = nlohmann::json::parse(json_text);
  CHECK(parsed["format_version"] == 1);
  CHECK(parsed["kind"] == "baseline");
  CHECK(parsed["puccd"]["config"]["circuit"] == "puccd");
  CHECK(parsed["stats"]["puccd_mean"].size() == 51);

  const std::string csv = baseline_trace_csv(base);
  CHECK(csv.rfind("step,puccd_mean,puccd_std,hadamard_mean,hadamard_std\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 52);
}

TEST_CASE("solvers: reports round-trip through json and csv") {
  const IntegralSet ints = load_h4();
  TrainConfig cfg;
  cfg.seeds = 2;
  cfg.max_nn_steps = 10;
  cfg.base_seed = 3;
  const TrainReport report = train_punn(ints, std::vector<double>(4, 0.1), cfg);

  const nlohmann::json parsed = nlohmann::json::parse(report_to_json(report));
  CHECK(parsed["format_version"] == 1);
  CHECK(parsed["kind"] == "train");
  CHECK(parsed["config"]["mode"] == "exact");
  CHECK(parsed["config"]["base_seed"] == 3);
  CHECK(parsed["theta"].size() == 4);
  CHECK(parsed["seeds"].size() == 2);
  CHECK(parsed["seeds"][0]["trace"].size() == 11);
  CHECK(parsed["e_best"].get<double>() == doctest::Approx(report.e_best).epsilon(1e-14));
  CHECK(parsed["best_seed"] == report.best_seed);

  const std::string csv = trace_csv(report);
  CHECK(csv.rfind("step,seed_0,seed_1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);  // header + 11 rows
  // first data row starts with step 0 and the two initial energies
  const std::size_t line_end = csv.find('\n');
  const std::size_t row_end = csv.find('\n', line_end + 1);
  const std::string row = csv.substr(line_end + 1, row_end - line_end - 1);
  CHECK(row.rfind("0,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 2);
}
