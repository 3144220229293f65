#include "punn/ansatz.hpp"

#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "punn/hamiltonians.hpp"

namespace punn {

int puccd_param_count(int n_orb, int n_pairs) {
  if (n_pairs <= 0 || n_pairs >= n_orb)
    throw std::invalid_argument("pair count must satisfy 0 < n_pairs < n_orb");
  return n_pairs * (n_orb - n_pairs);
}

std::vector<GateOp> puccd_gates(int n_orb, int n_pairs, const std::vector<double>& theta) {
  int n_virt = n_orb - n_pairs;
  if (theta.size() != static_cast<std::size_t>(puccd_param_count(n_orb, n_pairs)))
    throw std::invalid_argument("parameter length mismatch");
  // track[q] = orbital label currently carried by qubit q
  std::vector<int> track(n_orb);
  std::iota(track.begin(), track.end(), 0);
  std::vector<GateOp> gates;
  for (int layer = 0; layer < n_orb; ++layer) {
    for (int i = layer % 2; i + 1 < n_orb; i += 2) {
      int a = track[i], b = track[i + 1];
      double angle = 0.0;
      if (a < n_pairs && b >= n_pairs)
        angle = theta[a * n_virt + (b - n_pairs)];
      else if (b < n_pairs && a >= n_pairs)
        angle = -theta[b * n_virt + (a - n_pairs)];
      gates.push_back(GateOp::givens_swap(i, i + 1, angle));
      std::swap(track[i], track[i + 1]);
    }
  }
  return gates;
}

std::uint64_t reverse_bits(std::uint64_t k, int n) {
  std::uint64_t r = 0;
  for (int i = 0; i < n; ++i) r |= ((k >> i) & 1ull) << (n - 1 - i);
  return r;
}

State reverse_qubit_order(const State& s) {
  State out = State::zero(s.n);
  for (std::uint64_t c = 0; c < out.amp.size(); ++c)
    out.amp[c] = s.amp[reverse_bits(c, s.n)];
  return out;
}

State puccd_state(const PuccdAnsatz& a) {
  auto gates = puccd_gates(a.n_orb, a.n_pairs, a.theta);
  State s = State::basis(a.n_orb, hf_pair_index(a.n_orb, a.n_pairs));
  apply_in_place(s, gates);
  return reverse_qubit_order(s);
}

State perturbation_state(int n_qubits) {
  State s = State::zero(n_qubits);
  for (int q = 0; q < n_qubits; ++q) apply_in_place(s, GateOp::ry(q, 0.2));
  return s;
}

State hadamard_state(int n_qubits) {
  State s = State::zero(n_qubits);
  for (int q = 0; q < n_qubits; ++q) apply_in_place(s, GateOp::h(q));
  return s;
}

std::string gates_to_json(const std::vector<GateOp>& gates) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : gates) {
    nlohmann::json item;
    item["kind"] = gate_name(g.kind);
    if (g.q1 >= 0)
      item["qubits"] = {g.q0, g.q1};
    else
      item["qubits"] = {g.q0};
    item["angle"] = g.angle;
    arr.push_back(item);
  }
  return arr.dump(2);
}

}  // namespace punn
