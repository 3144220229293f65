#include "punn/pauli.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace punn {

namespace {

const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// i-exponent of the product a*b for single letters (I,X,Y,Z indexed 0..3):
// cyclic pairs XY, YZ, ZX give +i; the reversed pairs give -i.
constexpr int kMulPhase[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

void check_qubit(const PauliString& p, int q) {
  if (q < 0 || q >= p.n) throw std::invalid_argument("qubit index out of range");
}

}  // namespace

PauliString::PauliString(int n_qubits, std::complex<double> c) : n(n_qubits), coeff(c) {
  if (n_qubits < 0 || n_qubits > 64)
    throw std::invalid_argument("PauliString supports 0..64 qubits");
}

PauliString PauliString::from_letters(const std::string& s, std::complex<double> c) {
  PauliString p(static_cast<int>(s.size()), c);
  for (int q = 0; q < p.n; ++q) {
    switch (s[q]) {
      case 'I': break;
      case 'X': p.set_letter(q, Pauli::X); break;
      case 'Y': p.set_letter(q, Pauli::Y); break;
      case 'Z': p.set_letter(q, Pauli::Z); break;
      default: throw std::invalid_argument("bad Pauli letter in string");
    }
  }
  return p;
}

Pauli PauliString::letter(int q) const {
  check_qubit(*this, q);
  bool bx = x & bit(q), bz = z & bit(q);
  if (bx && bz) return Pauli::Y;
  if (bx) return Pauli::X;
  if (bz) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set_letter(int q, Pauli p) {
  check_qubit(*this, q);
  std::uint64_t b = bit(q);
  x &= ~b;
  z &= ~b;
  if (p == Pauli::X || p == Pauli::Y) x |= b;
  if (p == Pauli::Z || p == Pauli::Y) z |= b;
}

int PauliString::y_count() const { return std::popcount(x & z); }

int PauliString::weight() const { return std::popcount(x | z); }

std::string PauliString::letters() const {
  static const char kName[] = "IXYZ";
  std::string s(static_cast<std::size_t>(n), 'I');
  for (int q = 0; q < n; ++q) s[q] = kName[static_cast<int>(letter(q))];
  return s;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) throw std::invalid_argument("Pauli product: size mismatch");
  PauliString r(a.n, a.coeff * b.coeff);
  r.x = a.x ^ b.x;
  r.z = a.z ^ b.z;
  int ph = 0;
  std::uint64_t both = (a.x | a.z) & (b.x | b.z);
  while (both) {
    int pos = std::countr_zero(both);
    both &= both - 1;
    std::uint64_t m = 1ull << pos;
    int la = (a.x & m ? 1 : 0) | (a.z & m ? 2 : 0);  // 1=X, 3=Y, 2=Z
    int lb = (b.x & m ? 1 : 0) | (b.z & m ? 2 : 0);
    // translate bit pattern to enum index: 1->X(1), 3->Y(2), 2->Z(3)
    static constexpr int kIdx[4] = {0, 1, 3, 2};
    ph += kMulPhase[kIdx[la]][kIdx[lb]];
  }
  r.coeff *= kIPow[ph & 3];
  return r;
}

PauliAction pauli_action(const PauliString& p, std::uint64_t k) {
  std::complex<double> phase = p.coeff * kIPow[p.y_count() & 3];
  if (std::popcount(k & p.z) & 1) phase = -phase;
  return {k ^ p.x, phase};
}

void PauliSum::add(const PauliString& t) {
  if (terms.empty() && n == 0) n = t.n;
  if (t.n != n) throw std::invalid_argument("PauliSum: term size mismatch");
  terms.push_back(t);
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  PauliSum out(a.n);
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) out.terms.push_back(ta * tb);
  return out;
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  for (const auto& t : o.terms) add(t);
  return *this;
}

PauliSum PauliSum::merged(double drop_tol) const {
  struct Key {
    std::uint64_t x, z;
    bool operator==(const Key& o) const { return x == o.x && z == o.z; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = k.x * 0x9e3779b97f4a7c15ull;
      h ^= k.z + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h * 0xbf58476d1ce4e5b9ull);
    }
  };
  std::unordered_map<Key, std::complex<double>, KeyHash> acc;
  std::vector<Key> order;
  acc.reserve(terms.size());
  for (const auto& t : terms) {
    Key k{t.x, t.z};
    auto [it, inserted] = acc.try_emplace(k, 0.0);
    if (inserted) order.push_back(k);
    it->second += t.coeff;
  }
  PauliSum out(n);
  out.terms.reserve(order.size());
  for (const Key& k : order) {
    std::complex<double> c = acc[k];
    if (std::abs(c) < drop_tol) continue;
    PauliString t(n, c);
    t.x = k.x;
    t.z = k.z;
    out.terms.push_back(t);
  }
  return out;
}

std::string PauliSum::to_text() const {
  std::string out;
  char buf[64];
  for (const auto& t : terms) {
    if (std::abs(t.coeff.imag()) > 1e-12)
      throw std::invalid_argument("to_text requires real coefficients");
    std::snprintf(buf, sizeof buf, "%.17g", t.coeff.real());
    out += buf;
    out += ' ';
    out += t.letters();
    out += '\n';
  }
  return out;
}

namespace {

// Images of (control letter, target letter) under CNOT conjugation,
// letter index order I,X,Y,Z; entry = {control', target', sign}.
struct PairImage {
  Pauli c, t;
  int sign;
};
constexpr Pauli I = Pauli::I, X = Pauli::X, Y = Pauli::Y, Z = Pauli::Z;
constexpr PairImage kCnotConj[4][4] = {
    /* c=I */ {{I, I, 1}, {I, X, 1}, {Z, Y, 1}, {Z, Z, 1}},
    /* c=X */ {{X, X, 1}, {X, I, 1}, {Y, Z, 1}, {Y, Y, -1}},
    /* c=Y */ {{Y, X, 1}, {Y, I, 1}, {X, Z, -1}, {X, Y, 1}},
    /* c=Z */ {{Z, I, 1}, {Z, X, 1}, {I, Y, 1}, {I, Z, 1}},
};

}  // namespace

PauliString conjugate_by_entangler(const PauliString& p) {
  if (p.n % 2 != 0) throw std::invalid_argument("entangler needs an even qubit count");
  int half = p.n / 2;
  PauliString out(p.n, p.coeff);
  for (int i = 0; i < half; ++i) {
    const PairImage& im =
        kCnotConj[static_cast<int>(p.letter(i))][static_cast<int>(p.letter(i + half))];
    out.set_letter(i, im.c);
    out.set_letter(i + half, im.t);
    if (im.sign < 0) out.coeff = -out.coeff;
  }
  return out;
}

PauliString companion_operator(const PauliString& p) {
  if (p.x == 0) throw std::invalid_argument("companion operator needs X/Y support");
  PauliString out = p;
  std::uint64_t msb = 1ull << (63 - std::countl_zero(p.x));
  if (p.z & msb) {
    out.z &= ~msb;  // Y -> X, negated
    out.coeff = -out.coeff;
  } else {
    out.z |= msb;  // X -> Y
  }
  return out;
}

}  // namespace punn
