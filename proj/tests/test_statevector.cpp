#include "punn/statevector.hpp"

#include <cmath>
#include <complex>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "punn/rng.hpp"

using namespace punn;

namespace {

/// Dense unitary of a gate sequence, column by column.
Eigen::MatrixXcd circuit_matrix(int n, const std::vector<GateOp>& gates) {
  std::int64_t dim = 1ll << n;
  Eigen::MatrixXcd m(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    State s = apply_gates(State::basis(n, col), gates);
    for (std::int64_t row = 0; row < dim; ++row) m(row, col) = s.amp[row];
  }
  return m;
}

bool dense_close(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol = 1e-12) {
  return (a - b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace

TEST_CASE("basis states and norms") {
  State s = State::basis(3, 0b101);
  CHECK(s.amp.size() == 8);
  CHECK(s.amp[5] == std::complex<double>(1.0, 0.0));
  CHECK(s.norm() == doctest::Approx(1.0));
  CHECK(State::zero(2).amp[0] == std::complex<double>(1.0, 0.0));
  CHECK_THROWS_AS(State::basis(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(State::basis(0, 0), std::invalid_argument);
}

TEST_CASE("single-qubit gates match their matrices") {
  const double c = std::cos(0.4), sn = std::sin(0.4), r = 1.0 / std::sqrt(2.0);
  const std::complex<double> im(0.0, 1.0);
  Eigen::MatrixXcd ry(2, 2), h(2, 2), sm(2, 2), sdg(2, 2);
  ry << c, -sn, sn, c;  // RY(0.8): cos(0.4) etc.
  h << r, r, r, -r;
  sm << 1, 0, 0, im;
  sdg << 1, 0, 0, -im;
  CHECK(dense_close(circuit_matrix(1, {GateOp::ry(0, 0.8)}), ry));
  CHECK(dense_close(circuit_matrix(1, {GateOp::h(0)}), h));
  CHECK(dense_close(circuit_matrix(1, {GateOp::s(0)}), sm));
  CHECK(dense_close(circuit_matrix(1, {GateOp::sdg(0)}), sdg));
}

TEST_CASE("CNOT permutes with qubit 0 as control on the high bit") {
  State s = apply_gates(State::basis(2, 0b10), {GateOp::cnot(0, 1)});
  CHECK(std::abs(s.amp[0b11] - 1.0) < 1e-15);
  s = apply_gates(State::basis(2, 0b01), {GateOp::cnot(0, 1)});
  CHECK(std::abs(s.amp[0b01] - 1.0) < 1e-15);
  // reversed control/target
  s = apply_gates(State::basis(2, 0b01), {GateOp::cnot(1, 0)});
  CHECK(std::abs(s.amp[0b11] - 1.0) < 1e-15);
  CHECK_THROWS_AS(apply_gates(State::zero(2), {GateOp::cnot(1, 1)}), std::invalid_argument);
}

TEST_CASE("GIVENS rotates the single-excitation plane only") {
  const double a = 0.3, c = std::cos(a), sn = std::sin(a);
  Eigen::MatrixXcd g(4, 4);
  g << 1, 0, 0, 0,      //
      0, c, -sn, 0,     //
      0, sn, c, 0,      //
      0, 0, 0, 1;       // basis order |00>, |01>, |10>, |11>
  CHECK(dense_close(circuit_matrix(2, {GateOp::givens(0, 1, a)}), g));

  Eigen::MatrixXcd swap(4, 4);
  swap << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
  CHECK(dense_close(circuit_matrix(2, {GateOp::givens_swap(0, 1, a)}), swap * g));

  // pi/2 moves |01> to |10> up to sign
  State s = apply_gates(State::basis(2, 0b01), {GateOp::givens(0, 1, M_PI / 2)});
  CHECK(std::abs(s.amp[0b10]) == doctest::Approx(1.0));
}

TEST_CASE("random circuits preserve the norm") {
  Rng rng(21);
  State s = State::basis(3, 0b100);
  for (int step = 0; step < 50; ++step) {
    int q = static_cast<int>(rng.next_u64() % 3);
    int p = (q + 1 + static_cast<int>(rng.next_u64() % 2)) % 3;
    switch (rng.next_u64() % 5) {
      case 0: apply_in_place(s, GateOp::ry(q, rng.next_uniform(-3, 3))); break;
      case 1: apply_in_place(s, GateOp::h(q)); break;
      case 2: apply_in_place(s, GateOp::cnot(q, p)); break;
      case 3: apply_in_place(s, GateOp::givens(q, p, rng.next_uniform(-3, 3))); break;
      default: apply_in_place(s, GateOp::givens_swap(q, p, rng.next_uniform(-3, 3))); break;
    }
    CHECK(s.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("tensor product puts the first factor on the high bits") {
  State t = tensor_product(State::basis(1, 1), State::basis(2, 0b01));
  CHECK(t.n == 3);
  CHECK(std::abs(t.amp[0b101] - 1.0) < 1e-15);

  State a = apply_gates(State::zero(1), {GateOp::ry(0, 0.7)});
  State b = apply_gates(State::zero(1), {GateOp::ry(0, -1.1)});
  State ab = tensor_product(a, b);
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib)
      CHECK(std::abs(ab.amp[(ia << 1) | ib] - a.amp[ia] * b.amp[ib]) < 1e-15);
}

TEST_CASE("expectation values of small operators") {
  State plus = apply_gates(State::zero(1), {GateOp::h(0)});
  PauliSum x(1), z(1);
  x.add(PauliString::from_letters("X"));
  z.add(PauliString::from_letters("Z"));
  CHECK(exact_expectation(plus, x) == doctest::Approx(1.0));
  CHECK(exact_expectation(plus, z) == doctest::Approx(0.0));
  CHECK(exact_expectation(State::basis(1, 1), z) == doctest::Approx(-1.0));
  // <0|Y|0> = 0 with no imaginary leakage
  auto y = exact_expectation_term(State::zero(1), PauliString::from_letters("Y"));
  CHECK(std::abs(y) < 1e-15);
}

TEST_CASE("sampling is deterministic and concentrates correctly") {
  State s = State::basis(2, 0b10);
  Rng rng(5);
  for (auto draw : sample(s, 100, rng)) CHECK(draw == 0b10);

  Rng r1(9), r2(9);
  State plus = apply_gates(State::zero(1), {GateOp::h(0)});
  auto d1 = sample(plus, 1000, r1);
  auto d2 = sample(plus, 1000, r2);
  CHECK(d1 == d2);

  long ones = 0;
  Rng r3(7);
  const long shots = 20000;
  for (auto draw : sample(plus, shots, r3)) ones += static_cast<long>(draw);
  double freq = static_cast<double>(ones) / shots;
  CHECK(std::abs(freq - 0.5) < 5 * 0.5 / std::sqrt(static_cast<double>(shots)));

  State dead;
  dead.n = 1;
  dead.amp.assign(2, 0.0);
  Rng r4(1);
  CHECK_THROWS_AS(sample(dead, 10, r4), std::invalid_argument);
}
