#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace punn {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Pauli string with a complex coefficient on n qubits (n <= 64).
///
/// Bit convention used throughout: qubit 0 is the most significant bit of a
/// basis index, so the letter of qubit q acts on index bit (n-1-q).  Letters
/// are stored as index-space X/Z masks: X = x-bit, Z = z-bit, Y = both.
struct PauliString {
  int n = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  std::complex<double> coeff{1.0, 0.0};

  PauliString() = default;
  explicit PauliString(int n_qubits, std::complex<double> c = 1.0);

  /// Parse a letter string, letters ordered by qubit ("XZIY": X on qubit 0).
  static PauliString from_letters(const std::string& s, std::complex<double> c = 1.0);

  std::uint64_t bit(int q) const { return 1ull << (n - 1 - q); }
  Pauli letter(int q) const;
  void set_letter(int q, Pauli p);

  int y_count() const;
  int weight() const;                     // number of non-identity letters
  bool z_only() const { return x == 0; }  // identity counts as Z-only
  bool is_identity() const { return x == 0 && z == 0; }

  std::string letters() const;
  bool same_letters(const PauliString& o) const {
    return n == o.n && x == o.x && z == o.z;
  }
};

/// Letter-wise product with phase tracking: (a*b).coeff folds i-powers in.
PauliString operator*(const PauliString& a, const PauliString& b);

/// Action on a basis state: P |k> = phase |index>, phase includes coeff.
struct PauliAction {
  std::uint64_t index;
  std::complex<double> phase;
};
PauliAction pauli_action(const PauliString& p, std::uint64_t k);

struct PauliSum {
  int n = 0;
  std::vector<PauliString> terms;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n(n_qubits) {}

  void add(const PauliString& t);
  PauliSum& operator+=(const PauliSum& o);

  /// Combine equal letter strings; drop |coeff| < drop_tol.
  PauliSum merged(double drop_tol = 1e-12) const;

  std::size_t size() const { return terms.size(); }

  /// One term per line, "coefficient letters"; requires real coefficients.
  std::string to_text() const;
};

/// Distributive product; terms are not merged (callers merge when done).
PauliSum operator*(const PauliSum& a, const PauliSum& b);

/// Heisenberg conjugation E' = E P E with the pair entangler
/// E = prod_{i<n/2} CNOT(control i, target i+n/2); E is its own inverse.
/// Maps a single Pauli string to a single Pauli string with sign +-1.
PauliString conjugate_by_entangler(const PauliString& p);

/// Companion operator: copy of P with the letter at its most significant
/// X/Y support qubit flipped X -> Y (same sign) or Y -> X (negated sign).
/// For any k whose bit at that qubit is 0 (i.e. bin(k) < bin(k~)):
/// if P|k> = S |k~> then J|k> = +i S |k~>.
PauliString companion_operator(const PauliString& p);

}  // namespace punn
