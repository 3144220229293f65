#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "punn/rng.hpp"

namespace punn {

/// Amplitude modulator queried as B(k, j) on physical (alpha, beta) index
/// pairs. Implementations must be pure; may memoize internally.
using AmplitudeFn = std::function<double(std::uint64_t, std::uint64_t)>;

/// Particle-number mask: 1 iff popcount(k) = n_alpha and popcount(j) = n_beta.
bool sector_mask(std::uint64_t k, std::uint64_t j, int n_alpha, int n_beta);

/// +/-1 encoding of the two bitstrings, k bits first (most significant bit of
/// each register first), length 2N.
Eigen::VectorXd embed(std::uint64_t k, std::uint64_t j, int n_orb);

/// Total weight+bias count of the masked MLP: width 2KN, L = N-3 hidden
/// layers. Requires N >= 4 so there is at least one hidden layer.
long nn_param_count(int n_orb, int k_width);

/// Masked multilayer perceptron over configuration pairs:
///   x_0 = embed(k, j); x_{i+1} = ReLU(W_i x_i + c_i);
///   B(k, j) = mask(k, j) * (W_L x_L + c_L).
struct NeuralAmplitudeModel {
  int n_orb = 0;
  int k_width = 2;
  int n_layers = 0;  // hidden layers, n_orb - 3
  int n_alpha = 0;
  int n_beta = 0;
  std::vector<Eigen::MatrixXd> w;  // n_layers + 1 matrices
  std::vector<Eigen::VectorXd> c;  // matching bias vectors

  /// Hidden layers drawn uniformly in +/-sqrt(6/fan_in) with zero biases;
  /// final layer W = 0, c = 1, so initially B(k, j) = mask(k, j).
  static NeuralAmplitudeModel warm_start(int n_orb, int k_width, int n_alpha, int n_beta,
                                         Rng& rng);

  long param_count() const;
  double forward(std::uint64_t k, std::uint64_t j) const;

  /// Pack every weight (row-major) and bias, layer by layer, into one flat
  /// vector; unflatten reverses the packing.
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& params);

  /// Snapshot closure over a copy of the model with an internal memo table.
  AmplitudeFn amplitude_fn() const;
};

/// One numerator contribution weight * B(k, j) * B(kt, jt); the measurement
/// basis tag is carried for bookkeeping only.
struct PairTerm {
  std::uint64_t k = 0, j = 0, kt = 0, jt = 0;
  double weight = 0.0;
  int basis = 0;
};

/// One denominator contribution weight * B(k, j)^2.
struct NormTerm {
  std::uint64_t k = 0, j = 0;
  double weight = 0.0;
};

/// Term lists compiled for repeated evaluation against a changing model:
/// configurations are deduplicated and embedded once, and each term becomes a
/// position into that batch.  Building is linear in the list sizes; every
/// later evaluation then costs one batched network pass.
struct TermBatch {
  Eigen::MatrixXd x0;   // embedded configurations, one column per unique (k, j)
  Eigen::VectorXd msk;  // sector mask value per configuration
  std::vector<int> pair_u, pair_v;  // numerator entries weight * B[u] * B[v]
  std::vector<double> pair_w;
  std::vector<int> norm_id;  // denominator entries weight * B[id]^2
  std::vector<double> norm_w;

  static TermBatch build(const std::vector<PairTerm>& pair_terms,
                         const std::vector<NormTerm>& norm_terms, int n_orb, int n_alpha,
                         int n_beta);
};

/// Rayleigh-quotient estimate E = A/B with A = sum of pair terms and
/// B = sum of norm terms, plus dE/dparams by reverse-mode accumulation.
/// Throws "degenerate estimate" when B <= 0.
std::pair<double, std::vector<double>> energy_gradient(const NeuralAmplitudeModel& model,
                                                       const TermBatch& batch);

/// Convenience form: compiles the lists on the fly.  Callers that evaluate
/// the same lists repeatedly should build a TermBatch once instead.
std::pair<double, std::vector<double>> energy_gradient(const NeuralAmplitudeModel& model,
                                                       const std::vector<PairTerm>& pair_terms,
                                                       const std::vector<NormTerm>& norm_terms);

/// AdaMax optimizer state with the linear learning-rate decay schedule.
struct AdaMaxState {
  long step = 0;  // completed updates
  std::vector<double> m;
  std::vector<double> u;
  double alpha0 = 0.01;
  double alpha_final = 0.001;
  double beta1 = 0.8;
  double beta2 = 0.99;
  long decay_begin = 8000;
  long decay_end = 32000;
};

/// alpha0 up to decay_begin, linear to alpha_final at decay_end, constant
/// after.
double adamax_learning_rate(const AdaMaxState& opt, long t);

/// One in-place AdaMax update; moment vectors are lazily sized on first use.
/// Throws on non-finite gradient components.
void adamax_step(AdaMaxState& opt, std::vector<double>& params,
                 const std::vector<double>& grads);

/// Checkpoint round-trip: shapes plus row-major arrays in a JSON record.
std::string model_to_json(const NeuralAmplitudeModel& model);
NeuralAmplitudeModel model_from_json(const std::string& text);
void save_model(const std::string& path, const NeuralAmplitudeModel& model);
NeuralAmplitudeModel load_model(const std::string& path);

}  // namespace punn
