#include "punn/measurement.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "punn/rng.hpp"

namespace punn {

namespace {

constexpr double kRealTol = 1e-9;

double real_coeff(const PauliString& p, const char* what) {
  if (std::abs(p.coeff.imag()) > kRealTol * std::max(1.0, std::abs(p.coeff.real())))
    throw std::invalid_argument(std::string(what) + ": coefficient must be real");
  return p.coeff.real();
}

int zsign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1 : 1; }

/// A two-register term split into per-register factors with unit coefficients.
struct FactorSplit {
  int half = 0;
  PauliString psi;
  PauliString phi;
  double coeff = 0.0;
};

FactorSplit split_registers(const PauliString& term, const char* what) {
  if (term.n % 2 != 0 || term.n == 0)
    throw std::invalid_argument(std::string(what) + ": term must cover two equal registers");
  FactorSplit f;
  f.half = term.n / 2;
  std::uint64_t low = (1ull << f.half) - 1;
  f.psi = PauliString(f.half);
  f.psi.x = term.x >> f.half;
  f.psi.z = term.z >> f.half;
  f.phi = PauliString(f.half);
  f.phi.x = term.x & low;
  f.phi.z = term.z & low;
  f.coeff = real_coeff(term, what);
  return f;
}

TermEstimate reduce(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  TermEstimate out;
  out.mean = mean;
  out.shots = static_cast<long>(values.size());
  if (values.size() > 1) {
    double n = static_cast<double>(values.size());
    out.std_err = std::sqrt(ss / ((n - 1.0) * n));
  }
  return out;
}

/// Collection hooks; null maps mean "do not collect".
struct PairAcc {
  std::map<std::array<std::uint64_t, 4>, double>* pairs = nullptr;
  std::map<std::array<std::uint64_t, 2>, double>* norms = nullptr;

  void add_pair(std::uint64_t k, std::uint64_t j, std::uint64_t kt, std::uint64_t jt, double w) {
    if (pairs) (*pairs)[{k, j, kt, jt}] += w;
  }
  void add_norm(std::uint64_t k, std::uint64_t j, double w) {
    if (norms) (*norms)[{k, j}] += w;
  }
};

/// One weighted phi-register outcome.  Sampled shots use a single outcome of
/// probability 1; exact mode uses the full decoded distribution.
struct PhiOutcome {
  std::uint64_t j = 0;
  double sigma = 1.0;
  double prob = 1.0;
};

using PhiEnsemble = std::vector<PhiOutcome>;

PhiEnsemble enumerate_phi(const State& phi, const DiagonalizedBasis* diag) {
  State rotated = diag ? apply_gates(phi, diag->circuit) : phi;
  PhiEnsemble out;
  for (std::uint64_t x = 0; x < rotated.amp.size(); ++x) {
    double p = std::norm(rotated.amp[x]);
    if (p <= 0.0) continue;
    if (diag) {
      DecodedOutcome d = diag->decode(x);
      out.push_back({d.k, static_cast<double>(d.sigma), p});
    } else {
      out.push_back({x, 1.0, p});
    }
  }
  return out;
}

void check_paired(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>* bdraws,
                  const char* what) {
  if (a.empty()) throw std::invalid_argument(std::string(what) + ": needs at least one draw");
  if (bdraws && bdraws->size() != a.size())
    throw std::invalid_argument(std::string(what) + ": registers must be drawn in pairs");
}

TermEstimate z_core(const std::vector<std::uint64_t>& psi_draws,
                    const std::vector<std::uint64_t>* phi_draws, const State* phi_state,
                    const AmplitudeFn& b, const PauliString& term, PairAcc acc) {
  FactorSplit f = split_registers(term, "z estimator");
  if (term.x != 0) throw std::invalid_argument("z estimator: term has X/Y support");
  check_paired(psi_draws, phi_draws, "z estimator");
  PhiEnsemble fixed;
  if (phi_state) fixed = enumerate_phi(*phi_state, nullptr);
  double inv_n = 1.0 / static_cast<double>(psi_draws.size());
  PhiEnsemble one(1);
  std::vector<double> vals(psi_draws.size());
  for (std::size_t i = 0; i < psi_draws.size(); ++i) {
    std::uint64_t k = psi_draws[i];
    if (!phi_state) one[0] = {(*phi_draws)[i], 1.0, 1.0};
    const PhiEnsemble& ens = phi_state ? fixed : one;
    double tk = f.coeff * zsign(k & f.psi.z);
    double v = 0.0;
    for (const PhiOutcome& o : ens) {
      double t = tk * zsign(o.j & f.phi.z);
      double q = b(k, k ^ o.j);
      v += o.prob * t * q * q;
      acc.add_pair(k, k ^ o.j, k, k ^ o.j, o.prob * inv_n * t);
    }
    vals[i] = v;
  }
  return reduce(vals);
}

TermEstimate norm_core(const std::vector<std::uint64_t>& psi_draws,
                       const std::vector<std::uint64_t>* phi_draws, const State* phi_state,
                       const AmplitudeFn& b, PairAcc acc) {
  check_paired(psi_draws, phi_draws, "norm estimator");
  PhiEnsemble fixed;
  if (phi_state) fixed = enumerate_phi(*phi_state, nullptr);
  double inv_n = 1.0 / static_cast<double>(psi_draws.size());
  PhiEnsemble one(1);
  std::vector<double> vals(psi_draws.size());
  for (std::size_t i = 0; i < psi_draws.size(); ++i) {
    std::uint64_t k = psi_draws[i];
    if (!phi_state) one[0] = {(*phi_draws)[i], 1.0, 1.0};
    const PhiEnsemble& ens = phi_state ? fixed : one;
    double v = 0.0;
    for (const PhiOutcome& o : ens) {
      double q = b(k, k ^ o.j);
      v += o.prob * q * q;
      acc.add_norm(k, k ^ o.j, o.prob * inv_n);
    }
    vals[i] = v;
  }
  return reduce(vals);
}

TermEstimate mixed_core(const std::vector<std::uint64_t>& psi_draws,
                        const std::vector<std::uint64_t>* phi_draws, const State* phi_state,
                        const AmplitudeFn& b, const PauliString& term, PairAcc acc) {
  FactorSplit f = split_registers(term, "mixed estimator");
  bool psi_active = f.psi.x != 0;
  if (psi_active == (f.phi.x != 0))
    throw std::invalid_argument("mixed estimator: needs X/Y support in exactly one register");
  check_paired(psi_draws, phi_draws, "mixed estimator");
  double inv_n = 1.0 / static_cast<double>(psi_draws.size());
  std::vector<double> vals(psi_draws.size());
  if (psi_active) {
    DiagonalizedBasis d = build_diagonalizer(f.psi);
    PhiEnsemble fixed;
    if (phi_state) fixed = enumerate_phi(*phi_state, nullptr);
    PhiEnsemble one(1);
    for (std::size_t i = 0; i < psi_draws.size(); ++i) {
      DecodedOutcome dec = d.decode(psi_draws[i]);
      std::uint64_t k = dec.k, kt = k ^ f.psi.x;
      if (!phi_state) one[0] = {(*phi_draws)[i], 1.0, 1.0};
      const PhiEnsemble& ens = phi_state ? fixed : one;
      double v = 0.0;
      for (const PhiOutcome& o : ens) {
        double w = f.coeff * dec.sigma * zsign(o.j & f.phi.z);
        v += o.prob * w * b(k, k ^ o.j) * b(kt, kt ^ o.j);
        acc.add_pair(k, k ^ o.j, kt, kt ^ o.j, o.prob * inv_n * w);
      }
      vals[i] = v;
    }
  } else {
    DiagonalizedBasis d = build_diagonalizer(f.phi);
    PhiEnsemble fixed;
    if (phi_state) fixed = enumerate_phi(*phi_state, &d);
    PhiEnsemble one(1);
    for (std::size_t i = 0; i < psi_draws.size(); ++i) {
      std::uint64_t k = psi_draws[i];
      double tk = f.coeff * zsign(k & f.psi.z);
      if (!phi_state) {
        DecodedOutcome dec = d.decode((*phi_draws)[i]);
        one[0] = {dec.k, static_cast<double>(dec.sigma), 1.0};
      }
      const PhiEnsemble& ens = phi_state ? fixed : one;
      double v = 0.0;
      for (const PhiOutcome& o : ens) {
        std::uint64_t jt = o.j ^ f.phi.x;
        double w = tk * o.sigma;
        v += o.prob * w * b(k, k ^ o.j) * b(k, k ^ jt);
        acc.add_pair(k, k ^ o.j, k, k ^ jt, o.prob * inv_n * w);
      }
      vals[i] = v;
    }
  }
  return reduce(vals);
}

TermEstimate xy_core(const std::vector<std::uint64_t>& psi_h,
                     const std::vector<std::uint64_t>* phi_h,
                     const std::vector<std::uint64_t>& psi_j,
                     const std::vector<std::uint64_t>* phi_j, const State* phi_state,
                     const AmplitudeFn& b, const PauliString& term, PairAcc acc) {
  FactorSplit f = split_registers(term, "xy estimator");
  if (f.psi.x == 0 || f.phi.x == 0)
    throw std::invalid_argument("xy estimator: needs X/Y support in both registers");
  check_paired(psi_h, phi_h, "xy estimator");
  check_paired(psi_j, phi_j, "xy estimator");

  DiagonalizedBasis d_psi_h = build_diagonalizer(f.psi);
  DiagonalizedBasis d_psi_j = build_diagonalizer(companion_operator(f.psi));
  DiagonalizedBasis d_phi_h = build_diagonalizer(f.phi);
  DiagonalizedBasis d_phi_j = build_diagonalizer(companion_operator(f.phi));

  // kernel sign (+1): per-shot (b1 + b2)/2 on the factor bases;
  // kernel sign (-1): per-shot (b2 - b1)/2 on the companion bases.
  auto stream = [&](const std::vector<std::uint64_t>& pd, const std::vector<std::uint64_t>* fd,
                    const DiagonalizedBasis& dp, const DiagonalizedBasis& df, double b1_sign) {
    PhiEnsemble fixed;
    if (phi_state) fixed = enumerate_phi(*phi_state, &df);
    PhiEnsemble one(1);
    double inv_n = 1.0 / static_cast<double>(pd.size());
    std::vector<double> vals(pd.size());
    for (std::size_t i = 0; i < pd.size(); ++i) {
      DecodedOutcome dec = dp.decode(pd[i]);
      std::uint64_t k = dec.k, kt = k ^ f.psi.x;
      if (!phi_state) {
        DecodedOutcome fdec = df.decode((*fd)[i]);
        one[0] = {fdec.k, static_cast<double>(fdec.sigma), 1.0};
      }
      const PhiEnsemble& ens = phi_state ? fixed : one;
      double v = 0.0;
      for (const PhiOutcome& o : ens) {
        std::uint64_t j = o.j, jt = j ^ f.phi.x;
        double w = 0.5 * f.coeff * dec.sigma * o.sigma;
        double b1 = b(k, k ^ j) * b(kt, kt ^ jt);
        double b2 = b(k, k ^ jt) * b(kt, kt ^ j);
        v += o.prob * w * (b1_sign * b1 + b2);
        acc.add_pair(k, k ^ j, kt, kt ^ jt, o.prob * inv_n * w * b1_sign);
        acc.add_pair(k, k ^ jt, kt, kt ^ j, o.prob * inv_n * w);
      }
      vals[i] = v;
    }
    return reduce(vals);
  };

  TermEstimate own = stream(psi_h, phi_h, d_psi_h, d_phi_h, 1.0);
  TermEstimate companion = stream(psi_j, phi_j, d_psi_j, d_phi_j, -1.0);
  TermEstimate out;
  out.mean = own.mean + companion.mean;
  out.std_err = std::hypot(own.std_err, companion.std_err);
  out.shots = own.shots + companion.shots;
  return out;
}

std::vector<std::uint64_t> draw_stream(const State& s, const std::vector<GateOp>& circuit,
                                       long shots, std::uint64_t seed, std::uint64_t tag0,
                                       std::uint64_t side, std::uint64_t basis) {
  State rotated = apply_gates(s, circuit);
  Rng rng = Rng::stream(seed, {tag0, side, basis});
  return sample(rotated, shots, rng);
}

constexpr std::uint64_t kNormTag = 0x6e6f726dull;

}  // namespace

DiagonalizedBasis build_diagonalizer(const PauliString& p) {
  if (p.x == 0)
    throw std::invalid_argument(
        "diagonalizer: Z-only strings are measured computationally, not rotated");
  double c = real_coeff(p, "diagonalizer");
  if (std::abs(std::abs(c) - 1.0) > kRealTol)
    throw std::invalid_argument("diagonalizer: coefficient must be +1 or -1");

  DiagonalizedBasis out;
  out.source = p;
  out.pivot_bit = std::bit_floor(p.x);
  out.tilde_mask = p.x;
  out.sign_mask = p.z & ~out.pivot_bit;

  int pivot_q = p.n - 1 - std::countr_zero(out.pivot_bit);
  for (int q = pivot_q + 1; q < p.n; ++q)
    if (p.x & p.bit(q)) out.circuit.push_back(GateOp::cnot(pivot_q, q));

  // orbit phase unit u = coeff * i^y; an imaginary u needs the extra S^dag so
  // the pivot superposition lands on the +/- axis before the Hadamard.
  int y = p.y_count() & 3;
  bool imaginary = (y & 1) != 0;
  if (imaginary) out.circuit.push_back(GateOp::sdg(pivot_q));
  out.circuit.push_back(GateOp::h(pivot_q));

  double unit = (y == 0 || y == 1) ? 1.0 : -1.0;  // real part of i^y, or of -i*i^y
  out.u_star = c * unit;
  return out;
}

TermEstimate estimate_z_term(const std::vector<std::uint64_t>& psi_draws,
                             const std::vector<std::uint64_t>& phi_draws, const AmplitudeFn& b,
                             const PauliString& term) {
  return z_core(psi_draws, &phi_draws, nullptr, b, term, {});
}

TermEstimate estimate_z_term_exact_phi(const std::vector<std::uint64_t>& psi_draws,
                                       const State& phi, const AmplitudeFn& b,
                                       const PauliString& term) {
  return z_core(psi_draws, nullptr, &phi, b, term, {});
}

TermEstimate estimate_mixed_term(const std::vector<std::uint64_t>& psi_draws,
                                 const std::vector<std::uint64_t>& phi_draws, const AmplitudeFn& b,
                                 const PauliString& term) {
  return mixed_core(psi_draws, &phi_draws, nullptr, b, term, {});
}

TermEstimate estimate_mixed_term_exact_phi(const std::vector<std::uint64_t>& psi_draws,
                                           const State& phi, const AmplitudeFn& b,
                                           const PauliString& term) {
  return mixed_core(psi_draws, nullptr, &phi, b, term, {});
}

TermEstimate estimate_xy_term(const std::vector<std::uint64_t>& psi_h,
                              const std::vector<std::uint64_t>& phi_h,
                              const std::vector<std::uint64_t>& psi_j,
                              const std::vector<std::uint64_t>& phi_j, const AmplitudeFn& b,
                              const PauliString& term) {
  return xy_core(psi_h, &phi_h, psi_j, &phi_j, nullptr, b, term, {});
}

TermEstimate estimate_xy_term_exact_phi(const std::vector<std::uint64_t>& psi_h,
                                        const std::vector<std::uint64_t>& psi_j, const State& phi,
                                        const AmplitudeFn& b, const PauliString& term) {
  return xy_core(psi_h, nullptr, psi_j, nullptr, &phi, b, term, {});
}

HybridEstimate estimate_energy(const State& psi, const State& phi, const AmplitudeFn& b,
                               const PauliSum& h_full, long shots, std::uint64_t seed,
                               bool exact_phi, std::vector<TermTrace>* traces,
                               TermCollection* collect) {
  if (h_full.n % 2 != 0 || h_full.n == 0)
    throw std::invalid_argument("estimate_energy: Hamiltonian must cover two equal registers");
  int half = h_full.n / 2;
  if (psi.n != half || phi.n != half)
    throw std::invalid_argument("estimate_energy: register sizes do not match the Hamiltonian");
  if (shots <= 0) throw std::invalid_argument("estimate_energy: shots must be positive");

  std::map<std::array<std::uint64_t, 4>, double> pair_map;
  std::map<std::array<std::uint64_t, 2>, double> norm_map;
  PairAcc acc;
  if (collect) {
    acc.pairs = &pair_map;
    acc.norms = &norm_map;
  }

  const State* phi_exact = exact_phi ? &phi : nullptr;
  std::uint64_t low = (1ull << half) - 1;
  double c_identity = 0.0;
  double rest_sum = 0.0, rest_var = 0.0;

  for (std::size_t t = 0; t < h_full.terms.size(); ++t) {
    PauliString conj = conjugate_by_entangler(h_full.terms[t]);
    double c = real_coeff(conj, "estimate_energy");
    if (conj.is_identity()) {
      c_identity += c;
      if (traces) traces->push_back({conj.letters(), "identity", c, 0.0, 0});
      continue;
    }
    if (conj.y_count() % 2 != 0)
      throw std::runtime_error("estimate_energy: conjugated term has odd Y count: " +
                               conj.letters());

    std::uint64_t xh = conj.x >> half, xl = conj.x & low;
    std::uint64_t tag = static_cast<std::uint64_t>(t);
    TermEstimate te;
    const char* route = nullptr;
    if (xh == 0 && xl == 0) {
      route = "z";
      std::vector<std::uint64_t> pd = draw_stream(psi, {}, shots, seed, tag, 0, 0);
      if (exact_phi) {
        te = z_core(pd, nullptr, phi_exact, b, conj, acc);
      } else {
        std::vector<std::uint64_t> fd = draw_stream(phi, {}, shots, seed, tag, 1, 0);
        te = z_core(pd, &fd, nullptr, b, conj, acc);
      }
    } else if (xh == 0 || xl == 0) {
      route = "mixed";
      FactorSplit f = split_registers(conj, "estimate_energy");
      std::vector<GateOp> psi_circ, phi_circ;
      if (xh != 0) psi_circ = build_diagonalizer(f.psi).circuit;
      if (xl != 0) phi_circ = build_diagonalizer(f.phi).circuit;
      std::vector<std::uint64_t> pd = draw_stream(psi, psi_circ, shots, seed, tag, 0, 0);
      if (exact_phi) {
        te = mixed_core(pd, nullptr, phi_exact, b, conj, acc);
      } else {
        std::vector<std::uint64_t> fd = draw_stream(phi, phi_circ, shots, seed, tag, 1, 0);
        te = mixed_core(pd, &fd, nullptr, b, conj, acc);
      }
    } else {
      route = "xy";
      FactorSplit f = split_registers(conj, "estimate_energy");
      std::vector<std::uint64_t> ph =
          draw_stream(psi, build_diagonalizer(f.psi).circuit, shots, seed, tag, 0, 0);
      std::vector<std::uint64_t> pj = draw_stream(
          psi, build_diagonalizer(companion_operator(f.psi)).circuit, shots, seed, tag, 0, 1);
      if (exact_phi) {
        te = xy_core(ph, nullptr, pj, nullptr, phi_exact, b, conj, acc);
      } else {
        std::vector<std::uint64_t> fh =
            draw_stream(phi, build_diagonalizer(f.phi).circuit, shots, seed, tag, 1, 0);
        std::vector<std::uint64_t> fj = draw_stream(
            phi, build_diagonalizer(companion_operator(f.phi)).circuit, shots, seed, tag, 1, 1);
        te = xy_core(ph, &fh, pj, &fj, nullptr, b, conj, acc);
      }
    }
    rest_sum += te.mean;
    rest_var += te.std_err * te.std_err;
    if (traces) traces->push_back({conj.letters(), route, te.mean, te.std_err, te.shots});
  }

  // denominator: the norm stream, also reused for the identity coefficient
  TermEstimate nrm;
  {
    std::vector<std::uint64_t> pd = draw_stream(psi, {}, shots, seed, kNormTag, 0, 0);
    if (exact_phi) {
      nrm = norm_core(pd, nullptr, phi_exact, b, acc);
    } else {
      std::vector<std::uint64_t> fd = draw_stream(phi, {}, shots, seed, kNormTag, 1, 0);
      nrm = norm_core(pd, &fd, nullptr, b, acc);
    }
  }
  if (traces) traces->push_back({std::string(static_cast<std::size_t>(h_full.n), 'I'), "norm",
                                 nrm.mean, nrm.std_err, nrm.shots});
  if (!(nrm.mean > 0.0)) throw std::runtime_error("estimate_energy: norm estimate is not positive");

  if (collect) {
    for (const auto& [key, w] : norm_map)
      if (c_identity != 0.0) pair_map[{key[0], key[1], key[0], key[1]}] += c_identity * w;
    collect->pair_terms.clear();
    collect->norm_terms.clear();
    collect->pair_terms.reserve(pair_map.size());
    collect->norm_terms.reserve(norm_map.size());
    for (const auto& [key, w] : pair_map)
      collect->pair_terms.push_back({key[0], key[1], key[2], key[3], w, 0});
    for (const auto& [key, w] : norm_map) collect->norm_terms.push_back({key[0], key[1], w});
  }

  HybridEstimate out;
  out.denominator = nrm.mean;
  out.numerator = rest_sum + c_identity * nrm.mean;
  out.energy = c_identity + rest_sum / nrm.mean;
  double b2 = nrm.mean * nrm.mean;
  out.std_err = std::sqrt(rest_var / b2 +
                          rest_sum * rest_sum * nrm.std_err * nrm.std_err / (b2 * b2));
  out.shots_per_string = shots;
  return out;
}

std::pair<double, double> exact_hybrid_expectation(const State& psi, const State& phi,
                                                   const AmplitudeFn& b, const PauliSum& h_full) {
  if (psi.n != phi.n || h_full.n != 2 * psi.n)
    throw std::invalid_argument("exact_hybrid_expectation: register sizes do not match");
  if (h_full.n > 16)
    throw std::invalid_argument("exact_hybrid_expectation: more than 16 total qubits");

  int half = psi.n;
  std::uint64_t dim = 1ull << half;
  State full = State::zero(2 * half);
  for (std::uint64_t k = 0; k < dim; ++k)
    for (std::uint64_t m = 0; m < dim; ++m)
      full.amp[(k << half) | m] = psi.amp[k] * phi.amp[k ^ m] * b(k, m);

  double denom = 0.0;
  for (const auto& a : full.amp) denom += std::norm(a);
  double num = 0.0;
  for (const PauliString& term : h_full.terms) num += exact_expectation_term(full, term).real();
  return {num, denom};
}

}  // namespace punn
