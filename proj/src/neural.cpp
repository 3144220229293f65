#include "punn/neural.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "json.hpp"

namespace punn {

namespace {

int model_width(const NeuralAmplitudeModel& model) { return 2 * model.k_width * model.n_orb; }

std::uint64_t config_key(std::uint64_t k, std::uint64_t j) { return (k << 32) | j; }

}  // namespace

bool sector_mask(std::uint64_t k, std::uint64_t j, int n_alpha, int n_beta) {
  return std::popcount(k) == n_alpha && std::popcount(j) == n_beta;
}

Eigen::VectorXd embed(std::uint64_t k, std::uint64_t j, int n_orb) {
  if (n_orb < 1 || n_orb > 32) throw std::invalid_argument("bad orbital count");
  if ((k >> n_orb) || (j >> n_orb)) throw std::invalid_argument("bitstring exceeds orbital count");
  Eigen::VectorXd x(2 * n_orb);
  for (int q = 0; q < n_orb; ++q) {
    x[q] = ((k >> (n_orb - 1 - q)) & 1) ? 1.0 : -1.0;
    x[n_orb + q] = ((j >> (n_orb - 1 - q)) & 1) ? 1.0 : -1.0;
  }
  return x;
}

long nn_param_count(int n_orb, int k_width) {
  if (n_orb < 4) throw std::invalid_argument("network needs at least 4 orbitals (one hidden layer)");
  if (k_width < 1) throw std::invalid_argument("width multiplier must be positive");
  long width = 2L * k_width * n_orb;
  long hidden = n_orb - 3;
  return (width * 2 * n_orb + width) + (hidden - 1) * (width * width + width) + (width + 1);
}

NeuralAmplitudeModel NeuralAmplitudeModel::warm_start(int n_orb, int k_width, int n_alpha,
                                                      int n_beta, Rng& rng) {
  if (n_orb < 4) throw std::invalid_argument("network needs at least 4 orbitals (one hidden layer)");
  if (k_width < 1) throw std::invalid_argument("width multiplier must be positive");
  NeuralAmplitudeModel model;
  model.n_orb = n_orb;
  model.k_width = k_width;
  model.n_layers = n_orb - 3;
  model.n_alpha = n_alpha;
  model.n_beta = n_beta;
  int width = model_width(model);
  for (int i = 0; i < model.n_layers; ++i) {
    int fan_in = (i == 0) ? 2 * n_orb : width;
    double bound = std::sqrt(6.0 / fan_in);
    Eigen::MatrixXd wi(width, fan_in);
    for (int r = 0; r < width; ++r)
      for (int col = 0; col < fan_in; ++col) wi(r, col) = rng.next_uniform(-bound, bound);
    model.w.push_back(std::move(wi));
    model.c.push_back(Eigen::VectorXd::Zero(width));
  }
  model.w.push_back(Eigen::MatrixXd::Zero(1, width));
  model.c.push_back(Eigen::VectorXd::Ones(1));
  return model;
}

long NeuralAmplitudeModel::param_count() const {
  long total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i].size() + c[i].size();
  return total;
}

double NeuralAmplitudeModel::forward(std::uint64_t k, std::uint64_t j) const {
  if (!sector_mask(k, j, n_alpha, n_beta)) return 0.0;
  Eigen::VectorXd x = embed(k, j, n_orb);
  for (int i = 0; i < n_layers; ++i) x = ((w[i] * x + c[i]).array().max(0.0)).matrix();
  return (w[n_layers] * x)(0) + c[n_layers](0);
}

std::vector<double> NeuralAmplitudeModel::flatten() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(param_count()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (Eigen::Index r = 0; r < w[i].rows(); ++r)
      for (Eigen::Index col = 0; col < w[i].cols(); ++col) out.push_back(w[i](r, col));
    for (Eigen::Index r = 0; r < c[i].size(); ++r) out.push_back(c[i][r]);
  }
  return out;
}

void NeuralAmplitudeModel::unflatten(const std::vector<double>& params) {
  if (params.size() != static_cast<std::size_t>(param_count()))
    throw std::invalid_argument("parameter vector length mismatch");
  std::size_t at = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (Eigen::Index r = 0; r < w[i].rows(); ++r)
      for (Eigen::Index col = 0; col < w[i].cols(); ++col) w[i](r, col) = params[at++];
    for (Eigen::Index r = 0; r < c[i].size(); ++r) c[i][r] = params[at++];
  }
}

AmplitudeFn NeuralAmplitudeModel::amplitude_fn() const {
  auto snapshot = std::make_shared<NeuralAmplitudeModel>(*this);
  auto memo = std::make_shared<std::unordered_map<std::uint64_t, double>>();
  return [snapshot, memo](std::uint64_t k, std::uint64_t j) {
    auto it = memo->find(config_key(k, j));
    if (it != memo->end()) return it->second;
    double v = snapshot->forward(k, j);
    memo->emplace(config_key(k, j), v);
    return v;
  };
}

TermBatch TermBatch::build(const std::vector<PairTerm>& pair_terms,
                           const std::vector<NormTerm>& norm_terms, int n_orb, int n_alpha,
                           int n_beta) {
  // Deduplicate configurations (first-seen order) so every evaluation is one
  // GEMM chain regardless of how many terms repeat a configuration.
  TermBatch batch;
  std::unordered_map<std::uint64_t, int> index;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> configs;
  auto config_id = [&](std::uint64_t k, std::uint64_t j) {
    auto [it, fresh] = index.try_emplace(config_key(k, j), static_cast<int>(configs.size()));
    if (fresh) configs.emplace_back(k, j);
    return it->second;
  };
  batch.pair_u.reserve(pair_terms.size());
  batch.pair_v.reserve(pair_terms.size());
  batch.pair_w.reserve(pair_terms.size());
  for (const auto& t : pair_terms) {
    batch.pair_u.push_back(config_id(t.k, t.j));
    batch.pair_v.push_back(config_id(t.kt, t.jt));
    batch.pair_w.push_back(t.weight);
  }
  batch.norm_id.reserve(norm_terms.size());
  batch.norm_w.reserve(norm_terms.size());
  for (const auto& t : norm_terms) {
    batch.norm_id.push_back(config_id(t.k, t.j));
    batch.norm_w.push_back(t.weight);
  }

  const int n_cfg = static_cast<int>(configs.size());
  batch.x0.resize(2 * n_orb, n_cfg);
  batch.msk.resize(n_cfg);
  for (int u = 0; u < n_cfg; ++u) {
    batch.x0.col(u) = embed(configs[u].first, configs[u].second, n_orb);
    batch.msk[u] = sector_mask(configs[u].first, configs[u].second, n_alpha, n_beta) ? 1.0 : 0.0;
  }
  return batch;
}

std::pair<double, std::vector<double>> energy_gradient(const NeuralAmplitudeModel& model,
                                                       const TermBatch& batch) {
  if (batch.x0.rows() != 2 * model.n_orb)
    throw std::invalid_argument("term batch embedding width mismatch");
  const int n_cfg = static_cast<int>(batch.x0.cols());
  const int n_layers = model.n_layers;
  std::vector<Eigen::MatrixXd> x(static_cast<std::size_t>(n_layers) + 1);
  x[0] = batch.x0;
  for (int i = 0; i < n_layers; ++i)
    x[i + 1] = (((model.w[i] * x[i]).colwise() + model.c[i]).array().max(0.0)).matrix();
  Eigen::RowVectorXd raw = model.w[n_layers] * x[n_layers];
  raw.array() += model.c[n_layers](0);
  Eigen::VectorXd b = raw.transpose().array() * batch.msk.array();

  // Energy and dA/db in one pass; dB/db needs the energy and follows.
  double a_sum = 0.0, b_sum = 0.0;
  Eigen::VectorXd adj = Eigen::VectorXd::Zero(n_cfg);
  for (std::size_t t = 0; t < batch.pair_w.size(); ++t) {
    const int u = batch.pair_u[t], v = batch.pair_v[t];
    const double w = batch.pair_w[t];
    a_sum += w * b[u] * b[v];
    adj[u] += w * b[v];
    adj[v] += w * b[u];
  }
  for (std::size_t t = 0; t < batch.norm_w.size(); ++t)
    b_sum += batch.norm_w[t] * b[batch.norm_id[t]] * b[batch.norm_id[t]];
  if (!(b_sum > 0.0)) throw std::runtime_error("degenerate estimate: denominator is not positive");
  double energy = a_sum / b_sum;

  // dE/db = (dA/db - E dB/db) / B, then reverse through the layers.
  for (std::size_t t = 0; t < batch.norm_w.size(); ++t)
    adj[batch.norm_id[t]] -= energy * 2.0 * batch.norm_w[t] * b[batch.norm_id[t]];
  adj /= b_sum;

  Eigen::RowVectorXd gout = (adj.array() * batch.msk.array()).matrix().transpose();
  std::vector<Eigen::MatrixXd> gw(static_cast<std::size_t>(n_layers) + 1);
  std::vector<Eigen::VectorXd> gc(static_cast<std::size_t>(n_layers) + 1);
  gw[n_layers] = gout * x[n_layers].transpose();
  gc[n_layers] = Eigen::VectorXd::Constant(1, gout.sum());
  Eigen::MatrixXd gx = model.w[n_layers].transpose() * gout;
  for (int i = n_layers - 1; i >= 0; --i) {
    Eigen::MatrixXd gz = ((x[i + 1].array() > 0.0).cast<double>() * gx.array()).matrix();
    gw[i] = gz * x[i].transpose();
    gc[i] = gz.rowwise().sum();
    if (i > 0) gx = model.w[i].transpose() * gz;
  }

  std::vector<double> grad;
  grad.reserve(static_cast<std::size_t>(model.param_count()));
  for (int i = 0; i <= n_layers; ++i) {
    for (Eigen::Index r = 0; r < gw[i].rows(); ++r)
      for (Eigen::Index col = 0; col < gw[i].cols(); ++col) grad.push_back(gw[i](r, col));
    for (Eigen::Index r = 0; r < gc[i].size(); ++r) grad.push_back(gc[i][r]);
  }
  return {energy, std::move(grad)};
}

std::pair<double, std::vector<double>> energy_gradient(const NeuralAmplitudeModel& model,
                                                       const std::vector<PairTerm>& pair_terms,
                                                       const std::vector<NormTerm>& norm_terms) {
  return energy_gradient(
      model, TermBatch::build(pair_terms, norm_terms, model.n_orb, model.n_alpha, model.n_beta));
}

double adamax_learning_rate(const AdaMaxState& opt, long t) {
  if (t <= opt.decay_begin) return opt.alpha0;
  if (t >= opt.decay_end) return opt.alpha_final;
  double f = static_cast<double>(t - opt.decay_begin) /
             static_cast<double>(opt.decay_end - opt.decay_begin);
  return opt.alpha0 + f * (opt.alpha_final - opt.alpha0);
}

void adamax_step(AdaMaxState& opt, std::vector<double>& params,
                 const std::vector<double>& grads) {
  if (params.size() != grads.size())
    throw std::invalid_argument("parameter/gradient length mismatch");
  if (opt.m.empty() && opt.u.empty()) {
    opt.m.assign(params.size(), 0.0);
    opt.u.assign(params.size(), 0.0);
  }
  if (opt.m.size() != params.size() || opt.u.size() != params.size())
    throw std::invalid_argument("optimizer state length mismatch");
  for (double g : grads)
    if (!std::isfinite(g)) throw std::invalid_argument("non-finite gradient component");
  long t = ++opt.step;
  double alpha = adamax_learning_rate(opt, t);
  double correction = 1.0 - std::pow(opt.beta1, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    opt.m[i] = opt.beta1 * opt.m[i] + (1.0 - opt.beta1) * grads[i];
    opt.u[i] = std::max(opt.beta2 * opt.u[i], std::abs(grads[i]));
    if (opt.u[i] > 0.0) params[i] -= (alpha / correction) * opt.m[i] / opt.u[i];
  }
}

std::string model_to_json(const NeuralAmplitudeModel& model) {
  nlohmann::json rec;
  rec["format"] = "punn-model-1";
  rec["n_orb"] = model.n_orb;
  rec["k_width"] = model.k_width;
  rec["n_layers"] = model.n_layers;
  rec["n_alpha"] = model.n_alpha;
  rec["n_beta"] = model.n_beta;
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t i = 0; i < model.w.size(); ++i) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(model.w[i].size()));
    for (Eigen::Index r = 0; r < model.w[i].rows(); ++r)
      for (Eigen::Index col = 0; col < model.w[i].cols(); ++col) flat.push_back(model.w[i](r, col));
    weights.push_back(flat);
    biases.push_back(std::vector<double>(model.c[i].data(), model.c[i].data() + model.c[i].size()));
  }
  rec["weights"] = std::move(weights);
  rec["biases"] = std::move(biases);
  return rec.dump(2);
}

NeuralAmplitudeModel model_from_json(const std::string& text) {
  nlohmann::json rec;
  try {
    rec = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model record is not valid JSON: ") + e.what());
  }
  if (rec.value("format", "") != "punn-model-1")
    throw std::runtime_error("unrecognized model record format");
  NeuralAmplitudeModel model;
  model.n_orb = rec.at("n_orb").get<int>();
  model.k_width = rec.at("k_width").get<int>();
  model.n_layers = rec.at("n_layers").get<int>();
  model.n_alpha = rec.at("n_alpha").get<int>();
  model.n_beta = rec.at("n_beta").get<int>();
  if (model.n_orb < 4 || model.n_layers != model.n_orb - 3 || model.k_width < 1)
    throw std::runtime_error("model record has inconsistent shape header");
  int width = model_width(model);
  const auto& weights = rec.at("weights");
  const auto& biases = rec.at("biases");
  if (weights.size() != static_cast<std::size_t>(model.n_layers) + 1 || biases.size() != weights.size())
    throw std::runtime_error("model record has wrong layer count");
  for (int i = 0; i <= model.n_layers; ++i) {
    int rows = (i == model.n_layers) ? 1 : width;
    int cols = (i == 0) ? 2 * model.n_orb : width;
    auto flat = weights[i].get<std::vector<double>>();
    auto bias = biases[i].get<std::vector<double>>();
    if (flat.size() != static_cast<std::size_t>(rows) * cols ||
        bias.size() != static_cast<std::size_t>(rows))
      throw std::runtime_error("model record has wrong layer shape");
    Eigen::MatrixXd wi(rows, cols);
    std::size_t at = 0;
    for (int r = 0; r < rows; ++r)
      for (int col = 0; col < cols; ++col) wi(r, col) = flat[at++];
    model.w.push_back(std::move(wi));
    model.c.push_back(Eigen::Map<const Eigen::VectorXd>(bias.data(), rows));
  }
  return model;
}

void save_model(const std::string& path, const NeuralAmplitudeModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(model) << '\n';
}

NeuralAmplitudeModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace punn
