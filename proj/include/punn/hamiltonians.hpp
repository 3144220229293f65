#pragma once

#include <cstdint>
#include <vector>

#include "punn/integrals.hpp"
#include "punn/pauli.hpp"

namespace punn {

/// Hard-core-boson (seniority-zero) Hamiltonian over N spatial orbitals:
///
///   H = e_nuc + sum_p h_p n_p + sum_{pq} v_pq P+_p P_q
///           + sum_{p != q} w_pq n_p n_q
///
/// where P+_p creates an alpha/beta pair in orbital p and n_p = P+_p P_p.
/// The p = q hopping term degenerates to v_pp n_p.
struct SzHamiltonian {
  int n = 0;
  double e_nuc = 0.0;
  std::vector<double> h;  // n entries, h_p = 2 h_pp
  std::vector<double> v;  // n*n, v_pq = (pq|pq); symmetric, diagonal kept
  std::vector<double> w;  // n*n, w_pq = 2(pp|qq) - (pq|pq); zero diagonal

  double hop(int p, int q) const { return v[static_cast<std::size_t>(p) * n + q]; }
  double coul(int p, int q) const { return w[static_cast<std::size_t>(p) * n + q]; }

  /// <k|H|k> for a pair-occupation bitstring k (qubit 0 = most significant).
  double diagonal_energy(std::uint64_t k) const;
};

SzHamiltonian build_sz_hamiltonian(const IntegralSet& ints);

/// Qubit form on N qubits via n_p -> (1-Z_p)/2 and
/// P+_p P_q + P+_q P_p -> (X_p X_q + Y_p Y_q)/2.  Every term is identity,
/// single-Z, ZZ, XX or YY, so three measurement bases cover the sum.
PauliSum sz_to_pauli(const SzHamiltonian& h);

/// One factor of a ladder-operator product, acting on spin orbital `index`.
struct LadderOp {
  int index = 0;
  bool dagger = false;
};

/// A weighted product of ladder operators, leftmost factor applied last.
struct LadderTerm {
  std::vector<LadderOp> ops;
  double coeff = 1.0;
};

/// Jordan-Wigner map: a+_p -> (X_p - iY_p)/2 (x) Z on qubits < p, and the
/// conjugate for a_p; products are expanded and like terms merged.
PauliSum jordan_wigner(const std::vector<LadderTerm>& terms, int n_spin_orb);

/// Full electronic Hamiltonian on 2N qubits, alpha p -> qubit p and
/// beta p -> qubit N+p.  Coefficients come out real and every term has an
/// even Y count (both asserted).
PauliSum full_jw_hamiltonian(const IntegralSet& ints);

/// Basis index of the closed-shell reference determinant on 2N qubits:
/// alpha qubits 0..na-1 and beta qubits N..N+nb-1 set.
std::uint64_t hf_expanded_index(int n_orb, int n_alpha, int n_beta);

/// Basis index of the reference in the N-qubit pair register.
std::uint64_t hf_pair_index(int n_orb, int n_pairs);

}  // namespace punn
