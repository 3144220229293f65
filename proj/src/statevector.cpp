#include "punn/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace punn {

namespace {

void check_state(const State& s) {
  if (s.n < 1 || s.n > 24 || s.amp.size() != (1ull << s.n))
    throw std::invalid_argument("malformed state");
}

std::uint64_t qbit(const State& s, int q) {
  if (q < 0 || q >= s.n) throw std::invalid_argument("gate qubit out of range");
  return 1ull << (s.n - 1 - q);
}

// in the (|q=0>, |q=1>) basis: amp0' = m00 amp0 + m01 amp1, etc.
void one_qubit(State& s, int q, std::complex<double> m00, std::complex<double> m01,
               std::complex<double> m10, std::complex<double> m11) {
  std::uint64_t b = qbit(s, q), size = s.amp.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if (i & b) continue;
    auto a0 = s.amp[i], a1 = s.amp[i | b];
    s.amp[i] = m00 * a0 + m01 * a1;
    s.amp[i | b] = m10 * a0 + m11 * a1;
  }
}

}  // namespace

State State::zero(int n_qubits) { return basis(n_qubits, 0); }

State State::basis(int n_qubits, std::uint64_t k) {
  if (n_qubits < 1 || n_qubits > 24) throw std::invalid_argument("bad qubit count");
  if (k >> n_qubits) throw std::invalid_argument("basis index out of range");
  State s;
  s.n = n_qubits;
  s.amp.assign(1ull << n_qubits, 0.0);
  s.amp[k] = 1.0;
  return s;
}

double State::norm() const {
  double t = 0;
  for (const auto& a : amp) t += std::norm(a);
  return std::sqrt(t);
}

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::RY: return "RY";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::SDG: return "SDG";
    case GateKind::CNOT: return "CNOT";
    case GateKind::GIVENS: return "GIVENS";
    case GateKind::GIVENS_SWAP: return "GIVENS_SWAP";
  }
  return "?";
}

void apply_in_place(State& s, const GateOp& g) {
  check_state(s);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::RY: {
      double c = std::cos(g.angle / 2), sn = std::sin(g.angle / 2);
      one_qubit(s, g.q0, c, -sn, sn, c);
      return;
    }
    case GateKind::H:
      one_qubit(s, g.q0, inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
      return;
    case GateKind::S:
      one_qubit(s, g.q0, 1.0, 0.0, 0.0, {0.0, 1.0});
      return;
    case GateKind::SDG:
      one_qubit(s, g.q0, 1.0, 0.0, 0.0, {0.0, -1.0});
      return;
    case GateKind::CNOT: {
      std::uint64_t cb = qbit(s, g.q0), tb = qbit(s, g.q1);
      if (g.q0 == g.q1) throw std::invalid_argument("CNOT needs distinct qubits");
      for (std::uint64_t i = 0; i < s.amp.size(); ++i)
        if ((i & cb) && !(i & tb)) std::swap(s.amp[i], s.amp[i | tb]);
      return;
    }
    case GateKind::GIVENS:
    case GateKind::GIVENS_SWAP: {
      // GIVENS rotates span{|01>,|10>} of (q0,q1):
      //   |01> -> cos|01> + sin|10>,  |10> -> -sin|01> + cos|10>
      // GIVENS_SWAP composes a SWAP after the rotation.
      std::uint64_t ba = qbit(s, g.q0), bb = qbit(s, g.q1);
      if (g.q0 == g.q1) throw std::invalid_argument("two-qubit gate needs distinct qubits");
      double c = std::cos(g.angle), sn = std::sin(g.angle);
      bool swap_after = g.kind == GateKind::GIVENS_SWAP;
      for (std::uint64_t i = 0; i < s.amp.size(); ++i) {
        if ((i & ba) || !(i & bb)) continue;  // i has q0=0, q1=1
        std::uint64_t j = (i | ba) & ~bb;     // partner with q0=1, q1=0
        auto a01 = s.amp[i], a10 = s.amp[j];
        std::complex<double> r01 = c * a01 - sn * a10;
        std::complex<double> r10 = sn * a01 + c * a10;
        if (swap_after) std::swap(r01, r10);
        s.amp[i] = r01;
        s.amp[j] = r10;
      }
      return;
    }
  }
  throw std::invalid_argument("unknown gate");
}

void apply_in_place(State& s, const std::vector<GateOp>& gates) {
  for (const auto& g : gates) apply_in_place(s, g);
}

State apply_gates(State s, const std::vector<GateOp>& gates) {
  apply_in_place(s, gates);
  return s;
}

State tensor_product(const State& a, const State& b) {
  check_state(a);
  check_state(b);
  if (a.n + b.n > 24) throw std::invalid_argument("tensor product too large");
  State out;
  out.n = a.n + b.n;
  out.amp.resize(1ull << out.n);
  for (std::uint64_t ia = 0; ia < a.amp.size(); ++ia)
    for (std::uint64_t ib = 0; ib < b.amp.size(); ++ib)
      out.amp[(ia << b.n) | ib] = a.amp[ia] * b.amp[ib];
  return out;
}

std::complex<double> exact_expectation_term(const State& s, const PauliString& p) {
  if (p.n != s.n) throw std::invalid_argument("operator/state size mismatch");
  std::complex<double> acc = 0.0;
  for (std::uint64_t k = 0; k < s.amp.size(); ++k) {
    if (s.amp[k] == 0.0) continue;
    auto [idx, phase] = pauli_action(p, k);
    acc += std::conj(s.amp[idx]) * phase * s.amp[k];
  }
  return acc;
}

double exact_expectation(const State& s, const PauliSum& h) {
  check_state(s);
  std::complex<double> acc = 0.0;
  for (const auto& t : h.terms) acc += exact_expectation_term(s, t);
  return acc.real();
}

std::vector<std::uint64_t> sample(const State& s, long shots, Rng& rng) {
  check_state(s);
  if (shots < 0) throw std::invalid_argument("negative shot count");
  std::vector<double> cum(s.amp.size());
  double acc = 0;
  for (std::size_t i = 0; i < s.amp.size(); ++i) {
    acc += std::norm(s.amp[i]);
    cum[i] = acc;
  }
  if (acc <= 0) throw std::invalid_argument("cannot sample the zero state");
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(shots));
  for (long t = 0; t < shots; ++t) {
    double u = rng.next_double() * acc;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    out.push_back(static_cast<std::uint64_t>(it - cum.begin()));
  }
  return out;
}

}  // namespace punn
