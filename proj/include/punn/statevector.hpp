#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "punn/pauli.hpp"
#include "punn/rng.hpp"

namespace punn {

/// Dense statevector on n qubits (n <= 16 in practice; amplitudes indexed
/// with qubit 0 as the most significant bit).
struct State {
  int n = 0;
  std::vector<std::complex<double>> amp;

  static State zero(int n_qubits);
  static State basis(int n_qubits, std::uint64_t k);
  double norm() const;
};

enum class GateKind { RY, H, S, SDG, CNOT, GIVENS, GIVENS_SWAP };

struct GateOp {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;
  double angle = 0.0;

  static GateOp ry(int q, double a) { return {GateKind::RY, q, -1, a}; }
  static GateOp h(int q) { return {GateKind::H, q, -1, 0.0}; }
  static GateOp s(int q) { return {GateKind::S, q, -1, 0.0}; }
  static GateOp sdg(int q) { return {GateKind::SDG, q, -1, 0.0}; }
  static GateOp cnot(int control, int target) { return {GateKind::CNOT, control, target, 0.0}; }
  static GateOp givens(int qa, int qb, double a) { return {GateKind::GIVENS, qa, qb, a}; }
  static GateOp givens_swap(int qa, int qb, double a) {
    return {GateKind::GIVENS_SWAP, qa, qb, a};
  }
};

const char* gate_name(GateKind k);

void apply_in_place(State& s, const GateOp& g);
void apply_in_place(State& s, const std::vector<GateOp>& gates);
State apply_gates(State s, const std::vector<GateOp>& gates);

/// Kronecker product; `a` occupies the most significant qubits (0..a.n-1).
State tensor_product(const State& a, const State& b);

/// <s|P|s> for a Hermitian sum; the imaginary part is discarded.
double exact_expectation(const State& s, const PauliSum& h);
std::complex<double> exact_expectation_term(const State& s, const PauliString& p);

/// Draw `shots` basis states from |amp|^2 (multiset, in draw order).
std::vector<std::uint64_t> sample(const State& s, long shots, Rng& rng);

}  // namespace punn
