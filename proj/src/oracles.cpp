#include "punn/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "punn/rng.hpp"

namespace punn {

Eigen::MatrixXcd dense_matrix(const PauliString& p) {
  const std::size_t dim = 1ull << p.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    PauliAction a = pauli_action(p, k);
    m(a.index, k) += a.phase;
  }
  return m;
}

Eigen::MatrixXcd dense_matrix(const PauliSum& h) {
  const std::size_t dim = 1ull << h.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms)
    for (std::size_t k = 0; k < dim; ++k) {
      PauliAction a = pauli_action(t, k);
      m(a.index, k) += a.phase;
    }
  return m;
}

SectorBasis SectorBasis::build(int n_orb, int n_alpha, int n_beta) {
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_orb || n_beta > n_orb)
    throw std::runtime_error("sector basis: empty sector");
  SectorBasis b;
  b.n_orb = n_orb;
  b.n_alpha = n_alpha;
  b.n_beta = n_beta;
  for (std::uint64_t a = 0; a < (1ull << n_orb); ++a) {
    if (std::popcount(a) != n_alpha) continue;
    for (std::uint64_t v = 0; v < (1ull << n_orb); ++v) {
      if (std::popcount(v) != n_beta) continue;
      b.states.push_back((a << n_orb) | v);
    }
  }
  std::sort(b.states.begin(), b.states.end());
  return b;
}

long SectorBasis::index(std::uint64_t k) const {
  auto it = std::lower_bound(states.begin(), states.end(), k);
  if (it == states.end() || *it != k) return -1;
  return it - states.begin();
}

std::vector<std::uint64_t> pair_strings(int n_orb, int n_pairs) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < (1ull << n_orb); ++k)
    if (std::popcount(k) == n_pairs) out.push_back(k);
  return out;
}

Eigen::SparseMatrix<double> sector_matrix(const PauliSum& h, const SectorBasis& basis) {
  const long dim = static_cast<long>(basis.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(dim) * h.terms.size() / 4 + 16);
  for (long col = 0; col < dim; ++col) {
    std::uint64_t k = basis.states[col];
    for (const auto& t : h.terms) {
      PauliAction a = pauli_action(t, k);
      long row = basis.index(a.index);
      if (row < 0) continue;
      if (std::abs(a.phase.imag()) > 1e-9)
        throw std::runtime_error("sector matrix: complex matrix element");
      trips.emplace_back(row, col, a.phase.real());
    }
  }
  Eigen::SparseMatrix<double> m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double lowest_eigenvalue(const std::function<void(const double*, double*)>& matvec,
                         std::size_t dim, std::size_t dense_cutoff) {
  if (dim == 0) throw std::runtime_error("lowest_eigenvalue: empty basis");
  if (dim == 1) {
    double x = 1.0, y = 0.0;
    matvec(&x, &y);
    return y;
  }
  if (dim <= dense_cutoff) {
    Eigen::MatrixXd m(dim, dim);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd col(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      e[j] = 1.0;
      matvec(e.data(), col.data());
      m.col(j) = col;
      e[j] = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }

  const std::size_t max_basis = std::min<std::size_t>(dim, 250);
  const int max_restarts = 60;
  const double tol = 1e-10;

  Eigen::VectorXd v(dim);
  Rng rng = Rng::stream(0x1a2b3c4d, {dim});
  for (std::size_t i = 0; i < dim; ++i) v[i] = rng.next_uniform(-1.0, 1.0);
  v.normalize();

  double theta = 0.0;
  for (int restart = 0; restart < max_restarts; ++restart) {
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    basis.push_back(v);
    Eigen::VectorXd w(dim);
    for (std::size_t j = 0; j < max_basis; ++j) {
      matvec(basis[j].data(), w.data());
      double a = basis[j].dot(w);
      alpha.push_back(a);
      w -= a * basis[j];
      if (j > 0) w -= beta[j - 1] * basis[j - 1];
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& u : basis) w -= u.dot(w) * u;
      double b = w.norm();
      if (b < 1e-14) break;
      beta.push_back(b);
      if (basis.size() == max_basis) break;
      basis.push_back(w / b);
    }

    const long m = static_cast<long>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (long i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues()(0);
    Eigen::VectorXd s = es.eigenvectors().col(0);
    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(dim);
    for (long i = 0; i < m; ++i) ritz += s[i] * basis[i];
    ritz.normalize();
    matvec(ritz.data(), w.data());
    double resid = (w - theta * ritz).norm();
    v = ritz;
    if (resid <= tol * std::max(1.0, std::abs(theta))) return theta;
  }
  throw std::runtime_error("lowest_eigenvalue: Lanczos failed to converge");
}

double lowest_eigenvalue(const Eigen::SparseMatrix<double>& m) {
  const std::size_t dim = m.rows();
  return lowest_eigenvalue(
      [&m](const double* in, double* out) {
        Eigen::Map<const Eigen::VectorXd> x(in, m.cols());
        Eigen::Map<Eigen::VectorXd> y(out, m.rows());
        y.noalias() = m * x;
      },
      dim);
}

double fci_ground_energy(const PauliSum& h, int n_alpha, int n_beta) {
  if (h.n % 2 != 0) throw std::runtime_error("fci: qubit count must be even");
  SectorBasis basis = SectorBasis::build(h.n / 2, n_alpha, n_beta);
  if (basis.size() == 0) throw std::runtime_error("fci: empty sector");
  return lowest_eigenvalue(sector_matrix(h, basis));
}

namespace {

// Slater-Condon machinery.  Occupation lists are ascending spatial indices;
// single-excitation signs count occupied orbitals strictly between the hole
// and the particle.
struct Determinant {
  std::vector<int> alpha, beta;
};

std::vector<int> occ_list(std::uint64_t s, int n) {
  std::vector<int> out;
  for (int p = 0; p < n; ++p)
    if (s & (1ull << (n - 1 - p))) out.push_back(p);
  return out;
}

int excite_sign(std::uint64_t s, int n, int from, int to) {
  int lo = std::min(from, to) + 1, hi = std::max(from, to);
  int crossings = 0;
  for (int p = lo; p < hi; ++p)
    if (s & (1ull << (n - 1 - p))) ++crossings;
  return crossings % 2 ? -1 : 1;
}

double diagonal_element(const IntegralSet& ints, const std::vector<int>& a,
                        const std::vector<int>& b) {
  double e = ints.e_nuc;
  for (int i : a) e += ints.one(i, i);
  for (int i : b) e += ints.one(i, i);
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = x + 1; y < a.size(); ++y)
      e += ints.two(a[x], a[x], a[y], a[y]) - ints.two(a[x], a[y], a[x], a[y]);
  for (std::size_t x = 0; x < b.size(); ++x)
    for (std::size_t y = x + 1; y < b.size(); ++y)
      e += ints.two(b[x], b[x], b[y], b[y]) - ints.two(b[x], b[y], b[x], b[y]);
  for (int i : a)
    for (int j : b) e += ints.two(i, i, j, j);
  return e;
}

}  // namespace

double fci_ground_energy_determinant(const IntegralSet& ints) {
  const int n = ints.n_orb;
  const int na = ints.n_alpha(), nb = ints.n_beta();
  std::vector<std::uint64_t> astr = pair_strings(n, na);
  std::vector<std::uint64_t> bstr = pair_strings(n, nb);
  const long da = static_cast<long>(astr.size());
  const long db = static_cast<long>(bstr.size());
  const long dim = da * db;
  if (dim == 0) throw std::runtime_error("fci: empty sector");

  auto a_index = [&](std::uint64_t s) {
    return std::lower_bound(astr.begin(), astr.end(), s) - astr.begin();
  };
  auto b_index = [&](std::uint64_t s) {
    return std::lower_bound(bstr.begin(), bstr.end(), s) - bstr.begin();
  };
  auto bit = [n](int p) { return 1ull << (n - 1 - p); };

  std::vector<Eigen::Triplet<double>> trips;
  for (long ia = 0; ia < da; ++ia) {
    std::uint64_t sa = astr[ia];
    std::vector<int> aocc = occ_list(sa, n);
    for (long ib = 0; ib < db; ++ib) {
      std::uint64_t sb = bstr[ib];
      std::vector<int> bocc = occ_list(sb, n);
      long col = ia * db + ib;

      trips.emplace_back(col, col, diagonal_element(ints, aocc, bocc));

      // single excitations, both spins
      for (int spin = 0; spin < 2; ++spin) {
        std::uint64_t s = spin ? sb : sa;
        const std::vector<int>& occ = spin ? bocc : aocc;
        const std::vector<int>& other = spin ? aocc : bocc;
        for (int i : occ)
          for (int j = 0; j < n; ++j) {
            if (s & bit(j)) continue;
            double f = ints.one(i, j);
            for (int k : occ)
              if (k != i) f += ints.two(i, j, k, k) - ints.two(i, k, k, j);
            for (int k : other) f += ints.two(i, j, k, k);
            if (f == 0.0) continue;
            std::uint64_t s2 = (s ^ bit(i)) | bit(j);
            double val = excite_sign(s, n, i, j) * f;
            long row = spin ? ia * db + b_index(s2) : a_index(s2) * db + ib;
            trips.emplace_back(row, col, val);
          }
      }

      // same-spin double excitations
      for (int spin = 0; spin < 2; ++spin) {
        std::uint64_t s = spin ? sb : sa;
        const std::vector<int>& occ = spin ? bocc : aocc;
        for (std::size_t x = 0; x < occ.size(); ++x)
          for (std::size_t y = x + 1; y < occ.size(); ++y) {
            int i = occ[x], k = occ[y];
            for (int j = 0; j < n; ++j) {
              if (s & bit(j)) continue;
              for (int l = j + 1; l < n; ++l) {
                if (s & bit(l)) continue;
                double val = ints.two(i, j, k, l) - ints.two(i, l, k, j);
                if (val == 0.0) continue;
                // i -> j first, then k -> l, tracking intermediate occupation
                std::uint64_t s1 = (s ^ bit(i)) | bit(j);
                int sign = excite_sign(s, n, i, j) * excite_sign(s1, n, k, l);
                std::uint64_t s2 = (s1 ^ bit(k)) | bit(l);
                long row = spin ? ia * db + b_index(s2) : a_index(s2) * db + ib;
                trips.emplace_back(row, col, sign * val);
              }
            }
          }
      }

      // alpha-beta double excitations
      for (int i : aocc)
        for (int j = 0; j < n; ++j) {
          if (sa & bit(j)) continue;
          std::uint64_t sa2 = (sa ^ bit(i)) | bit(j);
          int sgn_a = excite_sign(sa, n, i, j);
          long ra = a_index(sa2);
          for (int k : bocc)
            for (int l = 0; l < n; ++l) {
              if (sb & bit(l)) continue;
              double val = ints.two(i, j, k, l);
              if (val == 0.0) continue;
              std::uint64_t sb2 = (sb ^ bit(k)) | bit(l);
              int sgn = sgn_a * excite_sign(sb, n, k, l);
              trips.emplace_back(ra * db + b_index(sb2), col, sgn * val);
            }
        }
    }
  }

  Eigen::SparseMatrix<double> m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return lowest_eigenvalue(m);
}

Eigen::MatrixXd pair_basis_matrix(const SzHamiltonian& h, int n_pairs) {
  if (n_pairs < 0 || n_pairs > h.n) throw std::runtime_error("pair basis: bad pair count");
  std::vector<std::uint64_t> basis = pair_strings(h.n, n_pairs);
  const long dim = static_cast<long>(basis.size());
  auto index = [&](std::uint64_t s) {
    return std::lower_bound(basis.begin(), basis.end(), s) - basis.begin();
  };
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (long col = 0; col < dim; ++col) {
    std::uint64_t k = basis[col];
    m(col, col) = h.diagonal_energy(k);
    for (int p = 0; p < h.n; ++p) {
      if (!(k & (1ull << (h.n - 1 - p)))) continue;
      for (int q = 0; q < h.n; ++q) {
        if (k & (1ull << (h.n - 1 - q))) continue;
        std::uint64_t k2 = (k ^ (1ull << (h.n - 1 - p))) | (1ull << (h.n - 1 - q));
        m(index(k2), col) += h.hop(q, p);
      }
    }
  }
  return m;
}

double doci_ground_energy(const SzHamiltonian& h, int n_pairs) {
  Eigen::MatrixXd m = pair_basis_matrix(h, n_pairs);
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Eigen::MatrixXd project_to_seniority_zero(const PauliSum& h_full, int n_pairs) {
  if (h_full.n % 2 != 0 || h_full.n > 20)
    throw std::runtime_error("seniority-zero projection: need an even qubit count <= 20");
  const int n = h_full.n / 2;
  std::vector<std::uint64_t> basis = pair_strings(n, n_pairs);
  const long dim = static_cast<long>(basis.size());
  auto expanded = [n](std::uint64_t k) { return (k << n) | k; };
  auto index = [&](std::uint64_t s) {
    auto it = std::lower_bound(basis.begin(), basis.end(), s);
    return (it != basis.end() && *it == s) ? it - basis.begin() : -1;
  };
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const std::uint64_t lowmask = (1ull << n) - 1;
  for (long col = 0; col < dim; ++col) {
    std::uint64_t kk = expanded(basis[col]);
    for (const auto& t : h_full.terms) {
      PauliAction a = pauli_action(t, kk);
      std::uint64_t hi = a.index >> n, lo = a.index & lowmask;
      if (hi != lo) continue;
      long row = index(hi);
      if (row < 0) continue;
      m(row, col) += a.phase.real();
    }
  }
  return m;
}

}  // namespace punn
