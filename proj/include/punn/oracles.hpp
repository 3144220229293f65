#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <vector>

#include "punn/hamiltonians.hpp"
#include "punn/integrals.hpp"
#include "punn/pauli.hpp"

namespace punn {

/// Dense 2^n x 2^n matrix of a Pauli string / sum (test oracle scale, n <= 14).
Eigen::MatrixXcd dense_matrix(const PauliString& p);
Eigen::MatrixXcd dense_matrix(const PauliSum& h);

/// All 2N-qubit basis indices with popcount(alpha block) = n_alpha and
/// popcount(beta block) = n_beta, ascending.  Alpha block = qubits 0..N-1
/// (most significant index bits), beta block = qubits N..2N-1.
struct SectorBasis {
  int n_orb = 0;
  int n_alpha = 0;
  int n_beta = 0;
  std::vector<std::uint64_t> states;

  static SectorBasis build(int n_orb, int n_alpha, int n_beta);

  std::size_t size() const { return states.size(); }
  /// Position of k in `states`, or -1 if k lies outside the sector.
  long index(std::uint64_t k) const;
};

/// All N-bit strings of popcount n_pairs, ascending (the DOCI basis).
std::vector<std::uint64_t> pair_strings(int n_orb, int n_pairs);

/// <u|H|v> over the sector basis; H must conserve both block populations
/// (per-term images outside the sector cancel exactly and are dropped).
Eigen::SparseMatrix<double> sector_matrix(const PauliSum& h, const SectorBasis& basis);

/// Smallest eigenvalue of a symmetric operator given by matvec: dense solve
/// for dim <= dense_cutoff, else restarted Lanczos with full
/// reorthogonalization (residual tolerance 1e-10).
double lowest_eigenvalue(const std::function<void(const double*, double*)>& matvec,
                         std::size_t dim, std::size_t dense_cutoff = 600);
double lowest_eigenvalue(const Eigen::SparseMatrix<double>& m);

/// Ground energy of H restricted to the (n_alpha, n_beta) sector.
double fci_ground_energy(const PauliSum& h, int n_alpha, int n_beta);

/// Same quantity via Slater-Condon rules on determinant pairs; shares no
/// code with the qubit path.
double fci_ground_energy_determinant(const IntegralSet& ints);

/// Hard-core-boson matrix in the weight-n_pairs pair basis.
Eigen::MatrixXd pair_basis_matrix(const SzHamiltonian& h, int n_pairs);
double doci_ground_energy(const SzHamiltonian& h, int n_pairs);

/// Matrix elements <k'k'|H|kk> of a 2N-qubit Hamiltonian over paired
/// bitstrings of weight n_pairs.
Eigen::MatrixXd project_to_seniority_zero(const PauliSum& h_full, int n_pairs);

}  // namespace punn
