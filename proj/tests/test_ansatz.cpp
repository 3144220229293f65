#include "punn/ansatz.hpp"

#include <bit>
#include <cmath>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "punn/hamiltonians.hpp"
#include "punn/oracles.hpp"
#include "punn/rng.hpp"

using namespace punn;
using punn::test::data_path;

TEST_CASE("parameter counts and their bounds") {
  CHECK(puccd_param_count(6, 3) == 9);
  CHECK(puccd_param_count(5, 2) == 6);
  CHECK(puccd_param_count(8, 4) == 16);
  CHECK_THROWS_AS(puccd_param_count(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(puccd_param_count(4, 4), std::invalid_argument);
}

TEST_CASE("bit reversal helper") {
  CHECK(reverse_bits(0b1000, 4) == 0b0001);
  CHECK(reverse_bits(0b1100, 4) == 0b0011);
  CHECK(reverse_bits(0b101, 3) == 0b101);
  CHECK(reverse_bits(0, 5) == 0);
}

TEST_CASE("the network touches every orbital pair exactly once") {
  const int n = 5, n_pairs = 2;
  std::vector<double> theta(puccd_param_count(n, n_pairs));
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = 0.01 * static_cast<double>(i + 1);
  auto gates = puccd_gates(n, n_pairs, theta);
  CHECK(gates.size() == n * (n - 1) / 2);
  std::map<double, int> rotation_uses;
  for (const auto& g : gates) {
    CHECK(g.kind == GateKind::GIVENS_SWAP);
    CHECK(g.q1 == g.q0 + 1);
    if (g.angle != 0.0) rotation_uses[std::abs(g.angle)]++;
  }
  REQUIRE(rotation_uses.size() == theta.size());
  for (double t : theta) CHECK(rotation_uses[t] == 1);
  CHECK_THROWS_AS(puccd_gates(n, n_pairs, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("zero angles prepare the reference determinant exactly") {
  for (auto [n, n_pairs] : {std::pair{2, 1}, {4, 2}, {5, 2}, {6, 3}}) {
    PuccdAnsatz a{n, n_pairs, std::vector<double>(puccd_param_count(n, n_pairs), 0.0)};
    State s = puccd_state(a);
    CHECK(std::abs(s.amp[hf_pair_index(n, n_pairs)] - 1.0) < 1e-14);
  }
}

TEST_CASE("a quarter turn moves the pair to the virtual orbital") {
  PuccdAnsatz a{2, 1, {M_PI / 2}};
  State s = puccd_state(a);
  CHECK(std::abs(s.amp[0b01]) == doctest::Approx(1.0));
}

TEST_CASE("Hamming weight is conserved for random angles") {
  Rng rng(41);
  for (auto [n, n_pairs] : {std::pair{4, 2}, {5, 2}, {6, 3}}) {
    std::vector<double> theta(puccd_param_count(n, n_pairs));
    for (auto& t : theta) t = rng.next_uniform(-2, 2);
    State s = puccd_state({n, n_pairs, theta});
    CHECK(s.norm() == doctest::Approx(1.0));
    double leakage = 0.0;
    for (std::uint64_t k = 0; k < s.amp.size(); ++k)
      if (std::popcount(k) != n_pairs) leakage += std::norm(s.amp[k]);
    CHECK(leakage < 1e-12);
  }
}

TEST_CASE("circuit energies respect the pair-problem variational bound") {
  IntegralSet ints = parse_fcidump(data_path("h4_chain_1.0.fcidump"));
  SzHamiltonian sz = build_sz_hamiltonian(ints);
  PauliSum h = sz_to_pauli(sz);
  double doci = doci_ground_energy(sz, 2);
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> theta(puccd_param_count(4, 2));
    for (auto& t : theta) t = rng.next_uniform(-1.5, 1.5);
    double e = exact_expectation(puccd_state({4, 2, theta}), h);
    CHECK(e >= doci - 1e-9);
  }
}

TEST_CASE("perturbation and uniform reference states") {
  State p1 = perturbation_state(1);
  CHECK(p1.amp[0].real() == doctest::Approx(std::cos(0.1)));
  CHECK(p1.amp[1].real() == doctest::Approx(std::sin(0.1)));

  State p3 = perturbation_state(3);
  CHECK(p3.amp[0].real() == doctest::Approx(std::pow(std::cos(0.1), 3)));
  CHECK(p3.norm() == doctest::Approx(1.0));
  for (const auto& a : p3.amp) CHECK(a.real() > 0.0);

  State u4 = hadamard_state(4);
  for (const auto& a : u4.amp) CHECK(a.real() == doctest::Approx(0.25));
  PauliSum z1(4);
  z1.add(PauliString::from_letters("IZII"));
  CHECK(exact_expectation(u4, z1) == doctest::Approx(0.0));
}

TEST_CASE("gate lists serialize to a JSON circuit description") {
  auto gates = puccd_gates(2, 1, {0.5});
  auto doc = nlohmann::json::parse(gates_to_json(gates));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 1);
  CHECK(doc[0]["kind"] == "GIVENS_SWAP");
  CHECK(doc[0]["qubits"] == nlohmann::json({0, 1}));
  CHECK(doc[0]["angle"].get<double>() == doctest::Approx(0.5));
}
