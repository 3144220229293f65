#include "punn/oracles.hpp"

#include <cmath>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "punn/rng.hpp"
#include "punn/statevector.hpp"

using namespace punn;
using punn::test::data_path;
using punn::test::kron_matrix;

namespace {

struct Fixture {
  IntegralSet ints;
  double scf, fci;
  std::size_t dim;
};

Fixture load(const std::string& stem) {
  std::ifstream in(data_path(stem + ".json"));
  REQUIRE(in.good());
  nlohmann::json meta;
  in >> meta;
  return {parse_fcidump(data_path(stem + ".fcidump")), meta["scf_energy"].get<double>(),
          meta["fci_energy"].get<double>(), meta["fci_dim"].get<std::size_t>()};
}

}  // namespace

TEST_CASE("dense builds agree with the Kronecker oracle") {
  Rng rng(31);
  PauliSum sum(3);
  for (int t = 0; t < 4; ++t) {
    PauliString p(3);
    for (int q = 0; q < 3; ++q) p.set_letter(q, static_cast<Pauli>(rng.next_u64() % 4));
    p.coeff = rng.next_uniform(-1, 1);
    sum.add(p);
    CHECK((dense_matrix(p) - kron_matrix(p)).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK((dense_matrix(sum) - kron_matrix(sum)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sector bases have the right sizes and index maps") {
  SectorBasis b4 = SectorBasis::build(4, 2, 2);
  CHECK(b4.size() == 36);
  SectorBasis b6 = SectorBasis::build(6, 3, 3);
  CHECK(b6.size() == 400);
  SectorBasis b8 = SectorBasis::build(8, 4, 4);
  CHECK(b8.size() == 4900);
  for (std::size_t i = 0; i < b4.size(); ++i)
    CHECK(b4.index(b4.states[i]) == static_cast<long>(i));
  CHECK(b4.index(0) == -1);
  CHECK(b4.index(0b11001110) == -1);
}

TEST_CASE("pair strings enumerate fixed-weight bitstrings in order") {
  auto s = pair_strings(4, 2);
  REQUIRE(s.size() == 6);
  CHECK(s.front() == 0b0011);
  CHECK(s.back() == 0b1100);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);
}

TEST_CASE("the two FCI code paths agree with each other and the sidecars") {
  Fixture h4 = load("h4_chain_1.0");
  PauliSum full = full_jw_hamiltonian(h4.ints);
  double via_pauli = fci_ground_energy(full, 2, 2);
  double via_rules = fci_ground_energy_determinant(h4.ints);
  CHECK(via_pauli == doctest::Approx(via_rules).epsilon(1e-11));
  CHECK(via_pauli == doctest::Approx(h4.fci).epsilon(1e-8));

  Fixture h6 = load("h6_chain_1.0");
  double h6_pauli = fci_ground_energy(full_jw_hamiltonian(h6.ints), 3, 3);
  double h6_rules = fci_ground_energy_determinant(h6.ints);
  CHECK(h6_pauli == doctest::Approx(h6_rules).epsilon(1e-11));
  CHECK(h6_rules == doctest::Approx(h6.fci).epsilon(1e-8));

  Fixture h8 = load("h8_cube_2.5");
  CHECK(fci_ground_energy_determinant(h8.ints) == doctest::Approx(h8.fci).epsilon(1e-8));
}

TEST_CASE("the iterative eigensolver matches the dense one") {
  Rng rng(32);
  const int dim = 150;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    m(i, i) = rng.next_uniform(-2, 2);
    for (int k = 0; k < 3; ++k) {
      int j = static_cast<int>(rng.next_u64() % dim);
      double v = rng.next_uniform(-1, 1);
      m(i, j) += v;
      m(j, i) += v;
    }
  }
  auto matvec = [&](const double* in, double* out) {
    Eigen::Map<const Eigen::VectorXd> x(in, dim);
    Eigen::Map<Eigen::VectorXd> y(out, dim);
    y = m * x;
  };
  double dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
                     .eigenvalues()(0);
  CHECK(lowest_eigenvalue(matvec, dim, 10) == doctest::Approx(dense).epsilon(1e-9));
  CHECK(lowest_eigenvalue(matvec, dim) == doctest::Approx(dense).epsilon(1e-12));
}

TEST_CASE("one- and two-orbital pair problems have closed forms") {
  SzHamiltonian one;
  one.n = 1;
  one.e_nuc = 0.3;
  one.h = {-1.5};
  one.v = {0.0};
  one.w = {0.0};
  CHECK(doci_ground_energy(one, 1) == doctest::Approx(-1.2));

  SzHamiltonian two;
  two.n = 2;
  two.e_nuc = 0.1;
  two.h = {-2.0, -1.0};
  two.v = {0.0, 0.4, 0.4, 0.0};  // hopping only
  two.w = {0.0, 0.0, 0.0, 0.0};
  Eigen::MatrixXd m = pair_basis_matrix(two, 1);
  // ascending pair basis: {01 -> orbital 2 occupied, 10 -> orbital 1}
  CHECK(m(0, 0) == doctest::Approx(-0.9));
  CHECK(m(1, 1) == doctest::Approx(-1.9));
  CHECK(m(0, 1) == doctest::Approx(0.4));
  CHECK(m(1, 0) == doctest::Approx(0.4));
  double exact = 0.1 - 1.5 - std::sqrt(0.25 + 0.16);
  CHECK(doci_ground_energy(two, 1) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("seniority-zero projection reduces the full problem to the pair one") {
  PauliSum ident(4);
  ident.add(PauliString(4, 2.5));
  Eigen::MatrixXd m = project_to_seniority_zero(ident, 1);
  CHECK(m.rows() == 2);
  CHECK((m - 2.5 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  for (const char* stem : {"h4_chain_1.0", "h6_chain_1.0"}) {
    Fixture f = load(stem);
    SzHamiltonian sz = build_sz_hamiltonian(f.ints);
    int n_pairs = f.ints.n_elec / 2;
    Eigen::MatrixXd projected = project_to_seniority_zero(full_jw_hamiltonian(f.ints), n_pairs);
    Eigen::MatrixXd direct = pair_basis_matrix(sz, n_pairs);
    CHECK((projected - direct).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("variational chain: FCI below DOCI below the mean-field reference") {
  for (const char* stem : {"h4_chain_1.0", "h6_chain_1.0", "h8_cube_2.5"}) {
    Fixture f = load(stem);
    double fci = fci_ground_energy_determinant(f.ints);
    double doci = doci_ground_energy(build_sz_hamiltonian(f.ints), f.ints.n_elec / 2);
    double hf = hf_reference_energy(f.ints);
    CHECK(fci <= doci + 1e-9);
    CHECK(doci <= hf + 1e-9);
    CHECK(SectorBasis::build(f.ints.n_orb, f.ints.n_alpha(), f.ints.n_beta()).size() == f.dim);
  }
}

TEST_CASE("sector restriction is exact for particle-conserving operators") {
  Fixture h4 = load("h4_chain_1.0");
  PauliSum full = full_jw_hamiltonian(h4.ints);
  SectorBasis basis = SectorBasis::build(4, 2, 2);
  Eigen::SparseMatrix<double> m = sector_matrix(full, basis);
  Eigen::MatrixXd d = Eigen::MatrixXd(m);
  CHECK((d - d.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  // diagonal entries are full-space expectations of the same determinants
  for (std::size_t i = 0; i < basis.size(); ++i) {
    State det = State::basis(8, basis.states[i]);
    CHECK(d(i, i) == doctest::Approx(exact_expectation(det, full)).epsilon(1e-12));
  }
}
