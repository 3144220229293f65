#include "punn/cli_commands.hpp"

#include <exception>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "punn/ansatz.hpp"
#include "punn/hamiltonians.hpp"
#include "punn/integrals.hpp"
#include "punn/oracles.hpp"
#include "punn/solvers.hpp"

namespace punn {

namespace {

/// Unreadable or malformed input; mapped to exit code 2.
struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

IntegralSet load_integrals(const std::string& path) {
  try {
    return parse_fcidump(path);
  } catch (const std::exception& e) {
    throw ParseFailure(e.what());
  }
}

void require_closed_shell(const IntegralSet& ints, const std::string& command) {
  if (ints.n_alpha() != ints.n_beta())
    throw std::invalid_argument(command + ": open-shell systems are not supported");
}

std::string json_path(const std::string& out) {
  if (out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0) return out;
  return out + ".json";
}

std::string csv_path(const std::string& out) {
  const std::string j = json_path(out);
  return j.substr(0, j.size() - 5) + ".csv";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file.good()) throw std::invalid_argument("cannot write '" + path + "'");
  file << text;
  if (!file.good()) throw std::invalid_argument("write failed for '" + path + "'");
}

/// Print the artifact to stdout, or write it to `path` and log the location.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text << "\n";
  } else {
    write_file(path, text);
    out << "wrote " << path << "\n";
  }
}

nlohmann::json config_echo(const CliOptions& opt) {
  return {{"command", opt.command}, {"fcidump", opt.fcidump}, {"mode", opt.mode},
          {"shots", opt.shots},     {"seed", opt.seed},       {"out", opt.out}};
}

std::vector<double> circuit_angles(const CliOptions& opt, const IntegralSet& ints,
                                   std::ostream& err) {
  if (opt.theta_artifact.empty()) {
    VqeOptions vo;
    vo.seed = opt.seed;
    const VqeResult res = vqe_puccd(build_sz_hamiltonian(ints), ints.n_alpha(), vo);
    if (!res.converged)
      err << "punn: circuit optimization stopped before reaching tolerance; using best angles\n";
    return res.theta;
  }
  std::ifstream file(opt.theta_artifact);
  if (!file.good()) throw ParseFailure("cannot open '" + opt.theta_artifact + "'");
  try {
    nlohmann::json artifact;
    file >> artifact;
    return artifact.at("theta").get<std::vector<double>>();
  } catch (const std::exception& e) {
    throw ParseFailure("'" + opt.theta_artifact + "': " + e.what());
  }
}

TrainConfig train_config(const CliOptions& opt) {
  TrainConfig cfg;
  cfg.mode = opt.mode;
  cfg.shots = opt.shots;
  cfg.seeds = opt.seeds;
  cfg.k_width = opt.k_width;
  cfg.base_seed = opt.seed;
  cfg.max_nn_steps = opt.max_nn_steps;
  cfg.resample_interval = opt.resample_interval;
  cfg.macro_iterations = opt.macro_iterations;
  cfg.stop_tol = opt.stop_tol;
  cfg.stop_window = opt.stop_window;
  cfg.min_steps = opt.min_steps;
  cfg.threads = opt.threads;
  return cfg;
}

}  // namespace

int cmd_inspect(const CliOptions& opt, std::ostream& out, std::ostream&) {
  const IntegralSet ints = load_integrals(opt.fcidump);
  nlohmann::json j;
  j["format_version"] = 1;
  j["kind"] = "inspect";
  j["config"] = config_echo(opt);
  j["n_orb"] = ints.n_orb;
  j["n_elec"] = ints.n_elec;
  j["ms2"] = ints.ms2;
  j["n_alpha"] = ints.n_alpha();
  j["n_beta"] = ints.n_beta();
  j["e_nuc"] = ints.e_nuc;
  j["hf_energy"] = hf_reference_energy(ints);
  j["fci_energy"] = fci_ground_energy_determinant(ints);
  if (ints.n_alpha() == ints.n_beta())
    j["doci_energy"] = doci_ground_energy(build_sz_hamiltonian(ints), ints.n_alpha());
  emit(j.dump(2), opt.out.empty() ? std::string() : json_path(opt.out), out);
  return 0;
}

int cmd_vqe(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  const IntegralSet ints = load_integrals(opt.fcidump);
  require_closed_shell(ints, "vqe");
  VqeOptions vo;
  vo.mode = opt.mode;
  vo.shots = opt.shots;
  vo.seed = opt.seed;
  const VqeResult res = vqe_puccd(build_sz_hamiltonian(ints), ints.n_alpha(), vo);

  nlohmann::json j;
  j["format_version"] = 1;
  j["kind"] = "vqe";
  j["config"] = config_echo(opt);
  j["n_orb"] = ints.n_orb;
  j["n_pairs"] = ints.n_alpha();
  j["theta"] = res.theta;
  j["e_puccd"] = res.energy;
  j["converged"] = res.converged;
  j["iterations"] = res.iterations;
  j["trace"] = res.trace;
  emit(j.dump(2), opt.out.empty() ? std::string() : json_path(opt.out), out);
  if (!res.converged) {
    err << "punn: circuit optimization stopped before reaching tolerance\n";
    return 3;
  }
  return 0;
}

int cmd_train(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  const IntegralSet ints = load_integrals(opt.fcidump);
  require_closed_shell(ints, "train");
  if (opt.circuit != "puccd" && opt.circuit != "hadamard")
    throw std::invalid_argument("train: unknown circuit '" + opt.circuit + "'");
  const std::vector<double> theta = circuit_angles(opt, ints, err);
  const TrainConfig cfg = train_config(opt);

  std::string artifact, csv;
  if (opt.circuit == "hadamard") {
    const BaselineReport base = baseline_compare(ints, theta, cfg);
    artifact = baseline_to_json(base);
    csv = baseline_trace_csv(base);
  } else {
    const TrainReport report = train_punn(ints, theta, cfg);
    artifact = report_to_json(report);
    csv = trace_csv(report);
  }
  emit(artifact, opt.out.empty() ? std::string() : json_path(opt.out), out);
  if (!opt.out.empty()) emit(csv, csv_path(opt.out), out);
  return 0;
}

int run_cli(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.command == "inspect") return cmd_inspect(opt, out, err);
    if (opt.command == "vqe") return cmd_vqe(opt, out, err);
    if (opt.command == "train") return cmd_train(opt, out, err);
    err << "punn: unknown command '" << opt.command << "'\n";
    return 1;
  } catch (const ParseFailure& e) {
    err << "punn: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "punn: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "punn: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace punn
