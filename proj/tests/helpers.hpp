#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "punn/pauli.hpp"
#include "punn/statevector.hpp"

namespace punn::test {

inline std::string data_path(const std::string& name) {
  return std::string(PUNN_DATA_DIR "/") + name;
}

inline Eigen::Matrix2cd letter_matrix(Pauli p) {
  const std::complex<double> im(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -im, im, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Independent dense build by Kronecker products, qubit 0 as the leftmost
/// (most significant) factor. Shares no code with pauli_action.
inline Eigen::MatrixXcd kron_matrix(const PauliString& p) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Constant(1, 1, p.coeff);
  for (int q = 0; q < p.n; ++q) {
    Eigen::Matrix2cd letter = letter_matrix(p.letter(q));
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) next.block(r * 2, c * 2, 2, 2) = m(r, c) * letter;
    m = std::move(next);
  }
  return m;
}

inline Eigen::MatrixXcd kron_matrix(const PauliSum& h) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(1ll << h.n, 1ll << h.n);
  for (const auto& t : h.terms) m += kron_matrix(t);
  return m;
}

/// Permutation matrix of the pair entangler on 2*half qubits:
/// E (|k> (x) |j>) = |k> (x) |k xor j>.
inline Eigen::MatrixXcd entangler_matrix(int half) {
  std::int64_t dim = 1ll << (2 * half);
  std::uint64_t low = (1ull << half) - 1;
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
    std::uint64_t k = col >> half, j = col & low;
    e((k << half) | (k ^ j), col) = 1.0;
  }
  return e;
}

/// Dense unitary of a gate list, built column by column through the
/// statevector simulator.
inline Eigen::MatrixXcd gates_matrix(int n, const std::vector<GateOp>& gates) {
  std::int64_t dim = 1ll << n;
  Eigen::MatrixXcd m(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    State s = State::basis(n, static_cast<std::uint64_t>(col));
    apply_in_place(s, gates);
    for (std::int64_t row = 0; row < dim; ++row) m(row, col) = s.amp[row];
  }
  return m;
}

}  // namespace punn::test
