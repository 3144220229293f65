#include "punn/hamiltonians.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace punn {

double SzHamiltonian::diagonal_energy(std::uint64_t k) const {
  double e = e_nuc;
  for (int p = 0; p < n; ++p) {
    if (!(k & (1ull << (n - 1 - p)))) continue;
    e += h[p] + hop(p, p);
    for (int q = p + 1; q < n; ++q)
      if (k & (1ull << (n - 1 - q))) e += 2.0 * coul(p, q);
  }
  return e;
}

SzHamiltonian build_sz_hamiltonian(const IntegralSet& ints) {
  ints.validate();
  if (ints.ms2 != 0 || ints.n_elec % 2 != 0)
    throw std::runtime_error("pair Hamiltonian needs a closed shell (MS2=0)");
  SzHamiltonian sz;
  sz.n = ints.n_orb;
  sz.e_nuc = ints.e_nuc;
  sz.h.assign(sz.n, 0.0);
  sz.v.assign(static_cast<std::size_t>(sz.n) * sz.n, 0.0);
  sz.w.assign(static_cast<std::size_t>(sz.n) * sz.n, 0.0);
  for (int p = 0; p < sz.n; ++p) {
    sz.h[p] = 2.0 * ints.one(p, p);
    for (int q = 0; q < sz.n; ++q) {
      sz.v[static_cast<std::size_t>(p) * sz.n + q] = ints.two(p, q, p, q);
      if (p != q)
        sz.w[static_cast<std::size_t>(p) * sz.n + q] =
            2.0 * ints.two(p, p, q, q) - ints.two(p, q, p, q);
    }
  }
  return sz;
}

PauliSum sz_to_pauli(const SzHamiltonian& h) {
  const int n = h.n;
  PauliSum out(n);

  double ident = h.e_nuc;
  for (int p = 0; p < n; ++p) {
    ident += 0.5 * (h.h[p] + h.hop(p, p));
    for (int q = p + 1; q < n; ++q) ident += 0.5 * h.coul(p, q);
  }
  out.add(PauliString(n, ident));

  for (int p = 0; p < n; ++p) {
    double c = -0.5 * (h.h[p] + h.hop(p, p));
    for (int q = 0; q < n; ++q)
      if (q != p) c -= 0.5 * h.coul(p, q);
    PauliString zp(n);
    zp.set_letter(p, Pauli::Z);
    zp.coeff = c;
    out.add(zp);
  }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      PauliString zz(n);
      zz.set_letter(p, Pauli::Z);
      zz.set_letter(q, Pauli::Z);
      zz.coeff = 0.5 * h.coul(p, q);
      out.add(zz);
    }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      PauliString xx(n);
      xx.set_letter(p, Pauli::X);
      xx.set_letter(q, Pauli::X);
      xx.coeff = 0.5 * h.hop(p, q);
      out.add(xx);
    }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      PauliString yy(n);
      yy.set_letter(p, Pauli::Y);
      yy.set_letter(q, Pauli::Y);
      yy.coeff = 0.5 * h.hop(p, q);
      out.add(yy);
    }
  return out.merged();
}

namespace {

PauliSum ladder(int p, bool dagger, int n) {
  PauliSum out(n);
  PauliString sx(n, 0.5);
  PauliString sy(n, dagger ? std::complex<double>(0.0, -0.5)
                           : std::complex<double>(0.0, 0.5));
  for (int q = 0; q < p; ++q) {
    sx.set_letter(q, Pauli::Z);
    sy.set_letter(q, Pauli::Z);
  }
  sx.set_letter(p, Pauli::X);
  sy.set_letter(p, Pauli::Y);
  out.add(sx);
  out.add(sy);
  return out;
}

}  // namespace

PauliSum jordan_wigner(const std::vector<LadderTerm>& terms, int n_spin_orb) {
  PauliSum out(n_spin_orb);
  for (const auto& term : terms) {
    PauliSum prod(n_spin_orb);
    prod.add(PauliString(n_spin_orb, term.coeff));
    for (const auto& op : term.ops) {
      if (op.index < 0 || op.index >= n_spin_orb)
        throw std::runtime_error("jordan_wigner: spin-orbital index out of range");
      prod = prod * ladder(op.index, op.dagger, n_spin_orb);
    }
    out += prod;
  }
  return out.merged();
}

PauliSum full_jw_hamiltonian(const IntegralSet& ints) {
  ints.validate();
  const int n = ints.n_orb;
  const int nq = 2 * n;
  auto spin_orb = [n](int p, int spin) { return p + spin * n; };

  std::vector<LadderTerm> terms;
  terms.reserve(static_cast<std::size_t>(n) * n * n * n * 4 + static_cast<std::size_t>(n) * n * 2 + 1);
  terms.push_back({{}, ints.e_nuc});
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double hpq = ints.one(p, q);
      if (hpq == 0.0) continue;
      for (int s = 0; s < 2; ++s)
        terms.push_back({{{spin_orb(p, s), true}, {spin_orb(q, s), false}}, hpq});
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double g = ints.two(p, q, r, s);
          if (g == 0.0) continue;
          for (int sa = 0; sa < 2; ++sa)
            for (int sb = 0; sb < 2; ++sb)
              terms.push_back({{{spin_orb(p, sa), true},
                                {spin_orb(r, sb), true},
                                {spin_orb(s, sb), false},
                                {spin_orb(q, sa), false}},
                               0.5 * g});
        }

  PauliSum ham = jordan_wigner(terms, nq);
  for (auto& t : ham.terms) {
    if (std::abs(t.coeff.imag()) > 1e-10)
      throw std::runtime_error("full_jw_hamiltonian: complex coefficient");
    if (t.y_count() % 2 != 0)
      throw std::runtime_error("full_jw_hamiltonian: odd Y-count term");
    t.coeff = t.coeff.real();
  }
  return ham;
}

std::uint64_t hf_expanded_index(int n_orb, int n_alpha, int n_beta) {
  std::uint64_t idx = 0;
  for (int p = 0; p < n_alpha; ++p) idx |= 1ull << (2 * n_orb - 1 - p);
  for (int p = 0; p < n_beta; ++p) idx |= 1ull << (n_orb - 1 - p);
  return idx;
}

std::uint64_t hf_pair_index(int n_orb, int n_pairs) {
  std::uint64_t idx = 0;
  for (int p = 0; p < n_pairs; ++p) idx |= 1ull << (n_orb - 1 - p);
  return idx;
}

}  // namespace punn
