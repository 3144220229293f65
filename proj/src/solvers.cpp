#include "punn/solvers.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "punn/ansatz.hpp"
#include "punn/neural.hpp"
#include "punn/oracles.hpp"
#include "punn/rng.hpp"

namespace punn {

namespace {

constexpr std::uint64_t kModelTag = 0x6d6f64656cull;  // per-seed warm-start stream
constexpr std::uint64_t kSampleTag = 0x73616d70ull;   // shot-mode measurement rounds
constexpr std::uint64_t kProbeTag = 0x70726f6265ull;  // shot-mode coordinate probes

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  Rng rng = Rng::stream(base, tags);
  return rng.next_u64();
}

TermEstimate reduce_draws(const std::vector<double>& values) {
  TermEstimate est;
  est.shots = static_cast<long>(values.size());
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  est.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.std_err = std::sqrt(ss / ((n - 1.0) * n));
  }
  return est;
}

using Objective = std::function<double(const std::vector<double>&)>;

std::vector<double> fd_gradient(const Objective& f, std::vector<double> x, double step) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + step;
    const double fp = f(x);
    x[i] = orig - step;
    const double fm = f(x);
    x[i] = orig;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trace;
};

/// Limited-memory BFGS (two-loop recursion, memory 10) with a backtracking
/// Armijo line search; restarts from steepest descent whenever the
/// quasi-Newton direction fails to point downhill.
MinimizeResult lbfgs_minimize(const Objective& f, std::vector<double> x0, int max_iterations,
                              double grad_tol, double fd_step) {
  const std::size_t memory = 10;
  MinimizeResult res;
  std::vector<double> x = std::move(x0);
  double fx = f(x);
  std::vector<double> g = fd_gradient(f, x, fd_step);
  res.trace.push_back(fx);
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho;
  int it = 0;
  for (; it < max_iterations; ++it) {
    double g_inf = 0.0;
    for (double v : g) g_inf = std::max(g_inf, std::abs(v));
    if (g_inf <= grad_tol) {
      res.converged = true;
      break;
    }
    std::vector<double> d = g;
    std::vector<double> alpha(s_hist.size(), 0.0);
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho[i] * dot(s_hist[i], d);
      for (std::size_t r = 0; r < d.size(); ++r) d[r] -= alpha[i] * y_hist[i][r];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& v : d) v *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho[i] * dot(y_hist[i], d);
      for (std::size_t r = 0; r < d.size(); ++r) d[r] += (alpha[i] - beta) * s_hist[i][r];
    }
    for (double& v : d) v = -v;
    double gd = dot(g, d);
    if (!(gd < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho.clear();
      for (std::size_t r = 0; r < d.size(); ++r) d[r] = -g[r];
      gd = -dot(g, g);
    }
    double step = 1.0;
    std::vector<double> xn(x.size());
    double fn = fx;
    bool accepted = false;
    for (int ls = 0; ls < 48; ++ls) {
      for (std::size_t r = 0; r < x.size(); ++r) xn[r] = x[r] + step * d[r];
      fn = f(xn);
      if (fn <= fx + 1e-4 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no progress at line-search resolution
    std::vector<double> gn = fd_gradient(f, xn, fd_step);
    std::vector<double> s(x.size()), y(x.size());
    for (std::size_t r = 0; r < x.size(); ++r) {
      s[r] = xn[r] - x[r];
      y[r] = gn[r] - g[r];
    }
    const double ys = dot(y, s);
    if (ys > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho.push_back(1.0 / ys);
      if (s_hist.size() > memory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho.erase(rho.begin());
      }
    }
    x = std::move(xn);
    fx = fn;
    g = std::move(gn);
    res.trace.push_back(fx);
  }
  res.x = std::move(x);
  res.value = fx;
  res.iterations = it;
  return res;
}

void run_parallel(const std::function<void(int)>& work, int jobs, int threads) {
  const int workers = std::max(1, std::min(threads, jobs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int j = next.fetch_add(1);
        if (j >= jobs) return;
        try {
          work(j);
        } catch (...) {
          errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Shared per-run data for exact-mode training: the particle-number sector,
/// the Hamiltonian restricted to it, the circuit-side amplitudes
/// c_u = psi_k * phi_{k xor m}, and the term lists that make
/// energy_gradient reproduce <Psi|H|Psi> / <Psi|Psi> exactly (the modulator
/// zeroes every configuration outside the sector, so nothing is lost by
/// contracting over it).
struct ExactContext {
  int n_orb = 0;
  SectorBasis basis;
  Eigen::SparseMatrix<double> h_sector;
  std::vector<double> amp;
  std::vector<PairTerm> pairs;
  std::vector<NormTerm> norms;
  TermBatch batch;  // compiled once; reused by every step of every seed
};

void compile_context(ExactContext& ctx) {
  ctx.batch =
      TermBatch::build(ctx.pairs, ctx.norms, ctx.n_orb, ctx.basis.n_alpha, ctx.basis.n_beta);
}

std::vector<double> sector_amplitudes(const SectorBasis& basis, const State& psi,
                                      const State& phi, int n_orb) {
  std::vector<double> amp(basis.size());
  const std::uint64_t low = (1ull << n_orb) - 1;
  for (std::size_t u = 0; u < basis.size(); ++u) {
    const std::uint64_t s = basis.states[u];
    const std::uint64_t k = s >> n_orb;
    const std::uint64_t m = s & low;
    amp[u] = psi.amp[k].real() * phi.amp[k ^ m].real();
  }
  return amp;
}

void fill_weights(ExactContext& ctx) {
  ctx.pairs.clear();
  ctx.norms.clear();
  const int n = ctx.n_orb;
  const std::uint64_t low = (1ull << n) - 1;
  for (int outer = 0; outer < ctx.h_sector.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(ctx.h_sector, outer); it; ++it) {
      const double w = ctx.amp[static_cast<std::size_t>(it.row())] *
                       ctx.amp[static_cast<std::size_t>(it.col())] * it.value();
      if (w == 0.0) continue;
      const std::uint64_t su = ctx.basis.states[static_cast<std::size_t>(it.row())];
      const std::uint64_t sv = ctx.basis.states[static_cast<std::size_t>(it.col())];
      ctx.pairs.push_back({su >> n, su & low, sv >> n, sv & low, w, 0});
    }
  }
  for (std::size_t u = 0; u < ctx.basis.size(); ++u) {
    const double w = ctx.amp[u] * ctx.amp[u];
    if (w == 0.0) continue;
    const std::uint64_t s = ctx.basis.states[u];
    ctx.norms.push_back({s >> n, s & low, w});
  }
}

/// One frozen-network pass over the circuit angles: steepest descent with
/// backtracking on the exact sector energy, then a weight-list rebuild so the
/// network loop continues against the updated circuit.
void finetune_theta(ExactContext& ctx, const IntegralSet& ints, const NeuralAmplitudeModel& model,
                    std::vector<double>& theta) {
  const int n = ints.n_orb;
  const int n_pairs = ints.n_alpha();
  const std::uint64_t low = (1ull << n) - 1;
  Eigen::VectorXd b_vals(static_cast<long>(ctx.basis.size()));
  for (std::size_t u = 0; u < ctx.basis.size(); ++u) {
    const std::uint64_t s = ctx.basis.states[u];
    b_vals[static_cast<long>(u)] = model.forward(s >> n, s & low);
  }
  const State phi = perturbation_state(n);
  Objective energy_of = [&](const std::vector<double>& th) {
    const State psi = puccd_state({n, n_pairs, th});
    Eigen::VectorXd y(static_cast<long>(ctx.basis.size()));
    for (std::size_t u = 0; u < ctx.basis.size(); ++u) {
      const std::uint64_t s = ctx.basis.states[u];
      const std::uint64_t k = s >> n;
      const std::uint64_t m = s & low;
      y[static_cast<long>(u)] =
          psi.amp[k].real() * phi.amp[k ^ m].real() * b_vals[static_cast<long>(u)];
    }
    const double denom = y.squaredNorm();
    if (denom <= 0.0) throw std::runtime_error("degenerate estimate: zero-norm hybrid state");
    return y.dot(ctx.h_sector * y) / denom;
  };
  const double e0 = energy_of(theta);
  const std::vector<double> g = fd_gradient(energy_of, theta, 1e-6);
  const double gg = dot(g, g);
  if (gg > 0.0) {
    double step = 0.1;
    std::vector<double> trial(theta.size());
    for (int ls = 0; ls < 20; ++ls) {
      for (std::size_t i = 0; i < theta.size(); ++i) trial[i] = theta[i] - step * g[i];
      if (energy_of(trial) <= e0 - 1e-4 * step * gg) {
        theta = trial;
        break;
      }
      step *= 0.5;
    }
  }
  const State psi = puccd_state({n, n_pairs, theta});
  ctx.amp = sector_amplitudes(ctx.basis, psi, phi, n);
  fill_weights(ctx);
  compile_context(ctx);
}

SeedRun run_exact_seed(const ExactContext& shared, const IntegralSet& ints, const TrainConfig& cfg,
                       const std::vector<double>& theta0, int seed_index) {
  Rng init = Rng::stream(cfg.base_seed, {static_cast<std::uint64_t>(seed_index), kModelTag});
  NeuralAmplitudeModel model =
      NeuralAmplitudeModel::warm_start(ints.n_orb, cfg.k_width, ints.n_alpha(), ints.n_beta(), init);
  std::vector<double> params = model.flatten();
  AdaMaxState opt;
  SeedRun run;
  run.seed_index = seed_index;
  run.trace.reserve(static_cast<std::size_t>(cfg.max_nn_steps) + 1);

  ExactContext local;
  const ExactContext* ctx = &shared;
  std::vector<double> theta = theta0;
  if (cfg.joint_finetune) {
    local = shared;
    ctx = &local;
  }

  double best = std::numeric_limits<double>::infinity();
  long last_gain = 0;
  for (long t = 0;; ++t) {
    const auto [energy, grads] = energy_gradient(model, ctx->batch);
    run.trace.push_back(energy);
    if (energy < best - cfg.stop_tol) last_gain = t;
    if (energy < best) best = energy;
    if (t >= cfg.max_nn_steps) break;
    if (cfg.stop_tol > 0.0 && t >= cfg.min_steps && t - last_gain >= cfg.stop_window) break;
    adamax_step(opt, params, grads);
    model.unflatten(params);
    if (cfg.joint_finetune && cfg.finetune_interval > 0 && (t + 1) % cfg.finetune_interval == 0) {
      finetune_theta(local, ints, model, theta);
    }
  }
  run.e_initial = run.trace.front();
  run.e_final = run.trace.back();
  run.e_best = best;
  run.steps = static_cast<long>(run.trace.size()) - 1;
  return run;
}

SeedRun run_shot_seed(const PauliSum& h_full, const State& psi, const State& phi,
                      const IntegralSet& ints, const TrainConfig& cfg, int seed_index) {
  Rng init = Rng::stream(cfg.base_seed, {static_cast<std::uint64_t>(seed_index), kModelTag});
  NeuralAmplitudeModel model =
      NeuralAmplitudeModel::warm_start(ints.n_orb, cfg.k_width, ints.n_alpha(), ints.n_beta(), init);
  std::vector<double> params = model.flatten();
  AdaMaxState opt;
  SeedRun run;
  run.seed_index = seed_index;
  run.trace.reserve(
      static_cast<std::size_t>(cfg.macro_iterations) * static_cast<std::size_t>(cfg.resample_interval) + 1);
  try {
    for (int macro = 0; macro < cfg.macro_iterations; ++macro) {
      const std::uint64_t stream_seed =
          derive_seed(cfg.base_seed, {kSampleTag, static_cast<std::uint64_t>(seed_index),
                                      static_cast<std::uint64_t>(macro)});
      TermCollection col;
      estimate_energy(psi, phi, model.amplitude_fn(), h_full, cfg.shots, stream_seed, false,
                      nullptr, &col);
      const TermBatch batch = TermBatch::build(col.pair_terms, col.norm_terms, ints.n_orb,
                                               ints.n_alpha(), ints.n_beta());
      for (long s = 0; s < cfg.resample_interval; ++s) {
        const auto [energy, grads] = energy_gradient(model, batch);
        run.trace.push_back(energy);
        adamax_step(opt, params, grads);
        model.unflatten(params);
      }
    }
    // Closing measurement: the final model's energy on a fresh sample stream,
    // not the value of the last (possibly overfit) training objective.
    const std::uint64_t closing_seed =
        derive_seed(cfg.base_seed, {kSampleTag, static_cast<std::uint64_t>(seed_index),
                                    static_cast<std::uint64_t>(cfg.macro_iterations)});
    run.trace.push_back(
        estimate_energy(psi, phi, model.amplitude_fn(), h_full, cfg.shots, closing_seed).energy);
  } catch (const std::exception& err) {
    throw std::runtime_error("seed " + std::to_string(seed_index) + ": " + err.what());
  }
  run.e_initial = run.trace.front();
  run.e_final = run.trace.back();
  run.e_best = *std::min_element(run.trace.begin(), run.trace.end());
  run.steps = static_cast<long>(run.trace.size()) - 1;
  return run;
}

void per_step_stats(const TrainReport& report, std::vector<double>& mean,
                    std::vector<double>& stdev) {
  mean.clear();
  stdev.clear();
  if (report.seeds.empty()) return;
  std::size_t len = std::numeric_limits<std::size_t>::max();
  for (const SeedRun& s : report.seeds) len = std::min(len, s.trace.size());
  const double n = static_cast<double>(report.seeds.size());
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const SeedRun& s : report.seeds) sum += s.trace[i];
    const double mu = sum / n;
    double ss = 0.0;
    for (const SeedRun& s : report.seeds) ss += (s.trace[i] - mu) * (s.trace[i] - mu);
    mean.push_back(mu);
    stdev.push_back(report.seeds.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
  }
}

nlohmann::json config_json(const TrainConfig& c) {
  return {{"mode", c.mode},
          {"circuit", c.circuit},
          {"shots", c.shots},
          {"seeds", c.seeds},
          {"k_width", c.k_width},
          {"base_seed", c.base_seed},
          {"max_nn_steps", c.max_nn_steps},
          {"resample_interval", c.resample_interval},
          {"macro_iterations", c.macro_iterations},
          {"joint_finetune", c.joint_finetune},
          {"finetune_interval", c.finetune_interval},
          {"stop_tol", c.stop_tol},
          {"stop_window", c.stop_window},
          {"min_steps", c.min_steps},
          {"threads", c.threads}};
}

nlohmann::json report_json_value(const TrainReport& r) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const SeedRun& s : r.seeds) {
    seeds.push_back({{"seed_index", s.seed_index},
                     {"e_initial", s.e_initial},
                     {"e_final", s.e_final},
                     {"e_best", s.e_best},
                     {"steps", s.steps},
                     {"trace", s.trace}});
  }
  nlohmann::json j;
  j["format_version"] = 1;
  j["kind"] = "train";
  j["config"] = config_json(r.config);
  j["theta"] = r.theta;
  j["e_circuit"] = r.e_circuit;
  j["e_best"] = r.e_best;
  j["best_seed"] = r.best_seed;
  j["seeds"] = std::move(seeds);
  return j;
}

}  // namespace

TermEstimate sampled_pair_energy(const State& state, const SzHamiltonian& h, long shots,
                                 std::uint64_t seed) {
  if (state.n != h.n) throw std::invalid_argument("sampled_pair_energy: register size mismatch");
  if (shots <= 0) throw std::invalid_argument("sampled_pair_energy: shots must be positive");
  const int n = h.n;
  const auto hop_value = [&](std::uint64_t x) {
    double v = 0.0;
    for (int p = 0; p < n; ++p) {
      const double sp = ((x >> (n - 1 - p)) & 1ull) ? -1.0 : 1.0;
      for (int q = p + 1; q < n; ++q) {
        const double sq = ((x >> (n - 1 - q)) & 1ull) ? -1.0 : 1.0;
        v += 0.5 * h.hop(p, q) * sp * sq;
      }
    }
    return v;
  };

  Rng diag_rng = Rng::stream(seed, {0});
  std::vector<double> diag_vals;
  diag_vals.reserve(static_cast<std::size_t>(shots));
  for (std::uint64_t x : sample(state, shots, diag_rng)) diag_vals.push_back(h.diagonal_energy(x));

  std::vector<GateOp> to_x, to_y;
  for (int q = 0; q < n; ++q) to_x.push_back(GateOp::h(q));
  for (int q = 0; q < n; ++q) {
    to_y.push_back(GateOp::sdg(q));
    to_y.push_back(GateOp::h(q));
  }
  Rng x_rng = Rng::stream(seed, {1});
  std::vector<double> x_vals;
  x_vals.reserve(static_cast<std::size_t>(shots));
  for (std::uint64_t x : sample(apply_gates(state, to_x), shots, x_rng))
    x_vals.push_back(hop_value(x));
  Rng y_rng = Rng::stream(seed, {2});
  std::vector<double> y_vals;
  y_vals.reserve(static_cast<std::size_t>(shots));
  for (std::uint64_t x : sample(apply_gates(state, to_y), shots, y_rng))
    y_vals.push_back(hop_value(x));

  const TermEstimate a = reduce_draws(diag_vals);
  const TermEstimate b = reduce_draws(x_vals);
  const TermEstimate c = reduce_draws(y_vals);
  TermEstimate out;
  out.mean = a.mean + b.mean + c.mean;
  out.std_err = std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err + c.std_err * c.std_err);
  out.shots = a.shots + b.shots + c.shots;
  return out;
}

VqeResult vqe_puccd(const SzHamiltonian& h, int n_pairs, const VqeOptions& opt) {
  const int n_params = puccd_param_count(h.n, n_pairs);
  VqeResult result;
  if (opt.mode == "exact") {
    const PauliSum h_pauli = sz_to_pauli(h);
    const Objective objective = [&](const std::vector<double>& theta) {
      return exact_expectation(puccd_state({h.n, n_pairs, theta}), h_pauli);
    };
    MinimizeResult m = lbfgs_minimize(objective, std::vector<double>(n_params, 0.0),
                                      opt.max_iterations, opt.grad_tol, 1e-6);
    result.theta = std::move(m.x);
    result.energy = m.value;
    result.converged = m.converged;
    result.iterations = m.iterations;
    result.trace = std::move(m.trace);
    return result;
  }
  if (opt.mode != "shots") throw std::invalid_argument("vqe_puccd: unknown mode '" + opt.mode + "'");

  std::vector<double> theta(n_params, 0.0);
  const auto sampled_at = [&](const std::vector<double>& t, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
    const std::uint64_t s = derive_seed(opt.seed, {kProbeTag, a, b, c});
    return sampled_pair_energy(puccd_state({h.n, n_pairs, t}), h, opt.shots, s).mean;
  };
  result.trace.push_back(sampled_at(theta, ~0ull, 0, 0));
  std::vector<double> probe(theta);
  for (int sweep = 0; sweep < opt.sweeps; ++sweep) {
    const std::uint64_t sw = static_cast<std::uint64_t>(sweep);
    for (int p = 0; p < n_params; ++p) {
      const std::uint64_t pu = static_cast<std::uint64_t>(p);
      probe = theta;
      probe[p] = theta[p] - opt.delta;
      const double e_minus = sampled_at(probe, sw, pu, 0);
      probe[p] = theta[p];
      const double e_zero = sampled_at(probe, sw, pu, 1);
      probe[p] = theta[p] + opt.delta;
      const double e_plus = sampled_at(probe, sw, pu, 2);
      const double curvature = e_plus - 2.0 * e_zero + e_minus;
      double shift = 0.0;
      if (curvature > 1e-12) {
        shift = std::clamp(-0.5 * opt.delta * (e_plus - e_minus) / curvature, -2.0 * opt.delta,
                           2.0 * opt.delta);
      } else if (e_minus <= e_zero && e_minus <= e_plus) {
        shift = -opt.delta;
      } else if (e_plus < e_zero && e_plus < e_minus) {
        shift = opt.delta;
      }
      theta[p] += shift;
    }
    result.trace.push_back(sampled_at(theta, sw, ~0ull, 1));
  }
  result.theta = theta;
  result.energy = result.trace.back();
  result.converged = true;
  result.iterations = opt.sweeps;
  return result;
}

TrainReport train_punn(const IntegralSet& ints, const std::vector<double>& theta_star,
                       const TrainConfig& cfg) {
  if (cfg.mode != "exact" && cfg.mode != "shots")
    throw std::invalid_argument("train_punn: unknown mode '" + cfg.mode + "'");
  if (cfg.circuit != "puccd" && cfg.circuit != "hadamard")
    throw std::invalid_argument("train_punn: unknown circuit '" + cfg.circuit + "'");
  if (cfg.seeds < 1) throw std::invalid_argument("train_punn: seeds must be positive");
  if (ints.n_alpha() != ints.n_beta())
    throw std::invalid_argument("train_punn: open-shell systems are not supported");
  if (cfg.mode == "shots" && cfg.macro_iterations < 1)
    throw std::invalid_argument("train_punn: macro_iterations must be positive");
  const int n = ints.n_orb;
  const int n_pairs = ints.n_alpha();
  if (cfg.circuit == "puccd" &&
      static_cast<long>(theta_star.size()) != static_cast<long>(puccd_param_count(n, n_pairs)))
    throw std::invalid_argument("train_punn: circuit angle count does not match the system");

  const State psi = (cfg.circuit == "puccd") ? puccd_state({n, n_pairs, theta_star})
                                             : hadamard_state(n);
  const State phi = perturbation_state(n);

  TrainReport report;
  report.config = cfg;
  report.theta = theta_star;
  report.e_circuit = exact_expectation(psi, sz_to_pauli(build_sz_hamiltonian(ints)));

  ExactContext ctx;
  PauliSum h_full(2 * n);
  if (cfg.mode == "exact") {
    ctx.n_orb = n;
    ctx.basis = SectorBasis::build(n, ints.n_alpha(), ints.n_beta());
    ctx.h_sector = sector_matrix(full_jw_hamiltonian(ints), ctx.basis);
    ctx.amp = sector_amplitudes(ctx.basis, psi, phi, n);
    fill_weights(ctx);
    compile_context(ctx);
  } else {
    h_full = full_jw_hamiltonian(ints);
  }

  report.seeds.resize(static_cast<std::size_t>(cfg.seeds));
  const auto run_one = [&](int s) {
    report.seeds[static_cast<std::size_t>(s)] =
        (cfg.mode == "exact") ? run_exact_seed(ctx, ints, cfg, theta_star, s)
                              : run_shot_seed(h_full, psi, phi, ints, cfg, s);
  };
  if (cfg.threads > 1 && cfg.seeds > 1) {
    run_parallel(run_one, cfg.seeds, cfg.threads);
  } else {
    for (int s = 0; s < cfg.seeds; ++s) run_one(s);
  }

  report.e_best = std::numeric_limits<double>::infinity();
  report.best_seed = 0;
  for (int s = 0; s < cfg.seeds; ++s) {
    if (report.seeds[static_cast<std::size_t>(s)].e_best < report.e_best) {
      report.e_best = report.seeds[static_cast<std::size_t>(s)].e_best;
      report.best_seed = s;
    }
  }
  return report;
}

BaselineReport baseline_compare(const IntegralSet& ints, const std::vector<double>& theta_star,
                                const TrainConfig& cfg) {
  BaselineReport out;
  TrainConfig c = cfg;
  c.circuit = "puccd";
  out.puccd = train_punn(ints, theta_star, c);
  c.circuit = "hadamard";
  out.hadamard = train_punn(ints, theta_star, c);
  per_step_stats(out.puccd, out.puccd_mean, out.puccd_std);
  per_step_stats(out.hadamard, out.hadamard_mean, out.hadamard_std);
  return out;
}

std::string report_to_json(const TrainReport& report) { return report_json_value(report).dump(2); }

std::string trace_csv(const TrainReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "step";
  for (const SeedRun& s : report.seeds) out << ",seed_" << s.seed_index;
  out << "\n";
  std::size_t rows = 0;
  for (const SeedRun& s : report.seeds) rows = std::max(rows, s.trace.size());
  for (std::size_t i = 0; i < rows; ++i) {
    out << i;
    for (const SeedRun& s : report.seeds) {
      // a seed that stopped early keeps reporting its final energy
      out << ',' << (i < s.trace.size() ? s.trace[i] : s.trace.back());
    }
    out << "\n";
  }
  return out.str();
}

std::string baseline_to_json(const BaselineReport& report) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["kind"] = "baseline";
  j["config"] = config_json(report.puccd.config);
  j["puccd"] = report_json_value(report.puccd);
  j["hadamard"] = report_json_value(report.hadamard);
  j["stats"] = {{"puccd_mean", report.puccd_mean},
                {"puccd_std", report.puccd_std},
                {"hadamard_mean", report.hadamard_mean},
                {"hadamard_std", report.hadamard_std}};
  return j.dump(2);
}

std::string baseline_trace_csv(const BaselineReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "step,puccd_mean,puccd_std,hadamard_mean,hadamard_std\n";
  const std::size_t rows = std::min(report.puccd_mean.size(), report.hadamard_mean.size());
  for (std::size_t i = 0; i < rows; ++i) {
    out << i << ',' << report.puccd_mean[i] << ',' << report.puccd_std[i] << ','
        << report.hadamard_mean[i] << ',' << report.hadamard_std[i] << "\n";
  }
  return out.str();
}

}  // namespace punn
