#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "punn/neural.hpp"
#include "punn/pauli.hpp"
#include "punn/statevector.hpp"

namespace punn {

/// Decoded single-register measurement outcome: orbit representative k (the
/// member of {k, k~} whose pivot bit is 0) and the +/-1 eigenvalue sign.
struct DecodedOutcome {
  std::uint64_t k = 0;
  int sigma = 1;
};

/// Measurement basis for one Pauli factor P with X/Y support: a circuit V
/// such that measuring V|state> computationally and decoding the outcome x
/// yields (k, sigma) with V^dag|x> = (|k> + sigma S_k |k~>)/sqrt(2), where
/// k~ = k xor x-mask and P|k> = S_k|k~>.  Each decoded vector is an exact
/// eigenvector of P with eigenvalue sigma.
struct DiagonalizedBasis {
  PauliString source;
  std::vector<GateOp> circuit;
  std::uint64_t pivot_bit = 0;   // X/Y support qubit measured in the +/- basis
  std::uint64_t tilde_mask = 0;  // x-mask of the source string (k~ = k xor this)
  std::uint64_t sign_mask = 0;   // remaining z-support; its parity flips sigma
  double u_star = 1.0;           // orbit phase unit folded to a +/-1 decode sign

  DecodedOutcome decode(std::uint64_t x) const {
    int sigma = ((x & pivot_bit) ? -1 : 1) * (std::popcount(x & sign_mask) & 1 ? -1 : 1);
    return {x & ~pivot_bit, u_star > 0 ? sigma : -sigma};
  }
};

/// Synthesize the measurement circuit for a Pauli string with nonempty X/Y
/// support and coefficient +1 or -1: CNOTs fanning out from the most
/// significant support qubit (exactly m-1 two-qubit gates for support size
/// m), an S^dag on the pivot when the string has odd Y count, and a final H.
/// Z-only strings are rejected (they are measured computationally).
DiagonalizedBasis build_diagonalizer(const PauliString& p);

struct TermEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  long shots = 0;
};

/// Estimate <Psi| T |Psi> (unnormalized) for an entangler-conjugated term T
/// on 2N qubits whose letters are all I/Z, from paired computational draws
/// of the two registers: mean of eigenvalue(k, j) * B(k, k xor j)^2.  The
/// identity string estimates the norm <Psi|Psi>.
TermEstimate estimate_z_term(const std::vector<std::uint64_t>& psi_draws,
                             const std::vector<std::uint64_t>& phi_draws, const AmplitudeFn& b,
                             const PauliString& term);

/// Same term types with the second register replaced by its exact
/// distribution |phi_j|^2 (variance then comes from the first register only).
TermEstimate estimate_z_term_exact_phi(const std::vector<std::uint64_t>& psi_draws,
                                       const State& phi, const AmplitudeFn& b,
                                       const PauliString& term);

/// Conjugated term with X/Y support in exactly one register.  The active
/// register's draws come from measuring V|state| for V built on that factor;
/// the passive register's draws are computational.  Per shot:
/// sigma_active * eigenvalue_passive * B-product over the flipped pair.
TermEstimate estimate_mixed_term(const std::vector<std::uint64_t>& psi_draws,
                                 const std::vector<std::uint64_t>& phi_draws, const AmplitudeFn& b,
                                 const PauliString& term);

TermEstimate estimate_mixed_term_exact_phi(const std::vector<std::uint64_t>& psi_draws,
                                           const State& phi, const AmplitudeFn& b,
                                           const PauliString& term);

/// Conjugated term with X/Y support in both registers: the two-circuit
/// protocol.  The H streams measure the factors' own bases, the J streams
/// measure the companion-operator bases; the two per-shot kernels
///   term1 = sigma_k sigma_j (b1 + b2)/2,   term2 = sigma_k sigma_j (b2 - b1)/2
/// with b1 = B(k,k^j)B(k~,k~^j~), b2 = B(k,k^j~)B(k~,k~^j) add up to an
/// unbiased estimate.  With B constant, term2 is zero shot by shot.
TermEstimate estimate_xy_term(const std::vector<std::uint64_t>& psi_h,
                              const std::vector<std::uint64_t>& phi_h,
                              const std::vector<std::uint64_t>& psi_j,
                              const std::vector<std::uint64_t>& phi_j, const AmplitudeFn& b,
                              const PauliString& term);

TermEstimate estimate_xy_term_exact_phi(const std::vector<std::uint64_t>& psi_h,
                                        const std::vector<std::uint64_t>& psi_j, const State& phi,
                                        const AmplitudeFn& b, const PauliString& term);

/// Per-term record of an energy estimate, for traces and debugging.
struct TermTrace {
  std::string letters;  // conjugated letters actually measured
  std::string route;    // identity | z | mixed | xy | norm
  double mean = 0.0;
  double std_err = 0.0;
  long shots = 0;
};

/// Model-independent sampled terms, replayable against any model state:
/// numerator contributions weight*B(k,j)*B(kt,jt) and denominator
/// contributions weight*B(k,j)^2 (physical indices).
struct TermCollection {
  std::vector<PairTerm> pair_terms;
  std::vector<NormTerm> norm_terms;
};

struct HybridEstimate {
  double energy = 0.0;
  double std_err = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  long shots_per_string = 0;
};

/// Full sampled energy of the hybrid state N E (|psi> (x) |phi>) under the
/// physical Hamiltonian h_full on 2N qubits: every term is conjugated by the
/// entangler, routed to the z / mixed / xy estimator with its own
/// deterministic sub-stream of `seed`, and the denominator is estimated once
/// as the norm.  The identity coefficient reuses the norm stream, so a pure
/// identity Hamiltonian is reproduced exactly.  With exact_phi the phi
/// register is enumerated instead of sampled.  Optional outputs: per-term
/// traces and the replayable term collection.
HybridEstimate estimate_energy(const State& psi, const State& phi, const AmplitudeFn& b,
                               const PauliSum& h_full, long shots, std::uint64_t seed,
                               bool exact_phi = false, std::vector<TermTrace>* traces = nullptr,
                               TermCollection* collect = nullptr);

/// Dense reference: numerator <Psi|H|Psi> and denominator <Psi|Psi> of the
/// same hybrid state, built explicitly over all 4^N basis states (2N <= 16).
std::pair<double, double> exact_hybrid_expectation(const State& psi, const State& phi,
                                                   const AmplitudeFn& b, const PauliSum& h_full);

}  // namespace punn
