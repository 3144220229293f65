#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "punn/statevector.hpp"

namespace punn {

/// Pair-excitation circuit ansatz on one qubit per spatial orbital: a swap
/// network of GIVENS_SWAP gates that rotates every occupied-virtual pair
/// exactly once.
struct PuccdAnsatz {
  int n_orb = 0;
  int n_pairs = 0;
  std::vector<double> theta;
};

/// Number of circuit parameters: n_pairs * (n_orb - n_pairs).
/// Requires 0 < n_pairs < n_orb.
int puccd_param_count(int n_orb, int n_pairs);

/// Gate sequence of the odd-even swap network. Layer l applies GIVENS_SWAP
/// on qubit pairs (i, i+1) with i = l mod 2; the rotation angle is the theta
/// component of the (occupied, virtual) orbital pair meeting there, zero when
/// two occupied or two virtual tracks meet. After n_orb layers the orbital
/// tracks end up in reversed order.
std::vector<GateOp> puccd_gates(int n_orb, int n_pairs, const std::vector<double>& theta);

/// Reverse an n-bit string (bit 0 <-> bit n-1).
std::uint64_t reverse_bits(std::uint64_t k, int n);

/// Relabel qubit q as qubit n-1-q: out.amp[c] = in.amp[reverse_bits(c, n)].
State reverse_qubit_order(const State& s);

/// Prepared circuit state: the Hartree-Fock pair string (qubits
/// 0..n_pairs-1 set) run through the swap network, with the network's track
/// reversal undone classically, so theta = 0 gives Hartree-Fock exactly.
/// Conserves Hamming weight for all theta.
State puccd_state(const PuccdAnsatz& a);

/// Product state RY(0.2) on every qubit: all amplitudes positive and the
/// all-zeros amplitude cos(0.1)^N dominates.
State perturbation_state(int n_qubits);

/// Uniform superposition over all basis states.
State hadamard_state(int n_qubits);

/// JSON circuit description: an array of {kind, qubits, angle} objects.
std::string gates_to_json(const std::vector<GateOp>& gates);

}  // namespace punn
