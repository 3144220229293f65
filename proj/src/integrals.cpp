#include "punn/integrals.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace punn {

namespace {

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& what) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

void IntegralSet::set_one(int i, int j, double v) {
  h[static_cast<std::size_t>(i) * n_orb + j] = v;
  h[static_cast<std::size_t>(j) * n_orb + i] = v;
}

void IntegralSet::set_two(int i, int j, int k, int l, double v) {
  std::size_t n = static_cast<std::size_t>(n_orb);
  auto at = [&](int a, int b, int c, int d) -> double& {
    return g[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  };
  at(i, j, k, l) = v;
  at(j, i, k, l) = v;
  at(i, j, l, k) = v;
  at(j, i, l, k) = v;
  at(k, l, i, j) = v;
  at(l, k, i, j) = v;
  at(k, l, j, i) = v;
  at(l, k, j, i) = v;
}

void IntegralSet::validate(double tol) const {
  if (n_orb < 1) throw std::runtime_error("integral set: n_orb < 1");
  if (h.size() != static_cast<std::size_t>(n_orb) * n_orb ||
      g.size() != static_cast<std::size_t>(n_orb) * n_orb * n_orb * n_orb)
    throw std::runtime_error("integral set: tensor shape mismatch");
  if (n_elec < 0 || n_elec > 2 * n_orb) throw std::runtime_error("integral set: bad NELEC");
  if ((n_elec + ms2) % 2 != 0 || n_beta() < 0 || n_alpha() > n_orb)
    throw std::runtime_error("integral set: NELEC/MS2 mismatch");
  for (int i = 0; i < n_orb; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(one(i, j) - one(j, i)) > tol)
        throw std::runtime_error("integral set: one-body tensor not symmetric");
  for (int i = 0; i < n_orb; ++i)
    for (int j = 0; j < n_orb; ++j)
      for (int k = 0; k < n_orb; ++k)
        for (int l = 0; l < n_orb; ++l) {
          double v = two(i, j, k, l);
          if (std::abs(v - two(j, i, k, l)) > tol || std::abs(v - two(i, j, l, k)) > tol ||
              std::abs(v - two(k, l, i, j)) > tol)
            throw std::runtime_error("integral set: two-body tensor lacks 8-fold symmetry");
        }
}

IntegralSet parse_fcidump_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  // header: everything from &FCI through &END (or a bare '/')
  std::string header;
  bool header_done = false;
  while (!header_done && std::getline(in, line)) {
    ++lineno;
    std::string u = upper(line);
    header += ' ' + u;
    if (u.find("&END") != std::string::npos || u.find('/') != std::string::npos)
      header_done = true;
  }
  if (!header_done) parse_fail(name, lineno, "missing &END in FCIDUMP header");
  if (header.find("&FCI") == std::string::npos)
    parse_fail(name, 1, "missing &FCI header");

  auto header_int = [&](const std::string& key, bool required, long fallback) -> long {
    std::size_t pos = header.find(key + "=");
    if (pos == std::string::npos) {
      if (required) parse_fail(name, 1, "missing " + key + " in header");
      return fallback;
    }
    const char* p = header.c_str() + pos + key.size() + 1;
    char* end = nullptr;
    long v = std::strtol(p, &end, 10);
    if (end == p) parse_fail(name, 1, "unreadable " + key + " value");
    return v;
  };

  IntegralSet ints;
  long norb = header_int("NORB", true, 0);
  long nelec = header_int("NELEC", true, 0);
  long ms2 = header_int("MS2", false, 0);
  if (norb < 1 || norb > 32) parse_fail(name, 1, "NORB out of supported range [1,32]");
  ints.n_orb = static_cast<int>(norb);
  ints.n_elec = static_cast<int>(nelec);
  ints.ms2 = static_cast<int>(ms2);
  ints.h.assign(static_cast<std::size_t>(norb) * norb, 0.0);
  ints.g.assign(static_cast<std::size_t>(norb) * norb * norb * norb, 0.0);

  while (std::getline(in, line)) {
    ++lineno;
    // Fortran floats may carry D exponents
    for (char& c : line)
      if (c == 'D' || c == 'd') c = 'E';
    std::istringstream ls(line);
    double v;
    long i, j, k, l;
    if (!(ls >> v)) {
      std::string probe;
      std::istringstream(line) >> probe;
      if (probe.empty()) continue;  // blank line
      parse_fail(name, lineno, "unreadable value field");
    }
    if (!(ls >> i >> j >> k >> l)) parse_fail(name, lineno, "expected four integer indices");
    std::string trailing;
    if (ls >> trailing) parse_fail(name, lineno, "trailing tokens after indices");
    for (long idx : {i, j, k, l})
      if (idx < 0 || idx > norb) parse_fail(name, lineno, "orbital index out of range");
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ints.e_nuc = v;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) parse_fail(name, lineno, "one-body record with zero index");
      ints.set_one(static_cast<int>(i) - 1, static_cast<int>(j) - 1, v);
    } else if (i != 0 && j != 0 && k != 0 && l != 0) {
      ints.set_two(static_cast<int>(i) - 1, static_cast<int>(j) - 1, static_cast<int>(k) - 1,
                   static_cast<int>(l) - 1, v);
    } else {
      parse_fail(name, lineno, "unsupported index pattern");
    }
  }
  try {
    ints.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
  return ints;
}

IntegralSet parse_fcidump(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open FCIDUMP file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_fcidump_text(ss.str(), path);
}

std::string emit_fcidump_text(const IntegralSet& ints) {
  ints.validate();
  std::ostringstream out;
  out << "&FCI NORB=" << ints.n_orb << ",NELEC=" << ints.n_elec << ",MS2=" << ints.ms2 << ",\n";
  out << "  ORBSYM=";
  for (int i = 0; i < ints.n_orb; ++i) out << "1,";
  out << "\n  ISYM=1,\n&END\n";
  char buf[128];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof buf, "%.17g %d %d %d %d\n", v, i, j, k, l);
    out << buf;
  };
  for (int i = 1; i <= ints.n_orb; ++i)
    for (int j = 1; j <= i; ++j)
      for (int k = 1; k <= i; ++k) {
        int lmax = (k == i) ? j : k;
        for (int l = 1; l <= lmax; ++l) {
          double v = ints.two(i - 1, j - 1, k - 1, l - 1);
          if (v != 0.0) emit(v, i, j, k, l);
        }
      }
  for (int i = 1; i <= ints.n_orb; ++i)
    for (int j = 1; j <= i; ++j)
      if (ints.one(i - 1, j - 1) != 0.0) emit(ints.one(i - 1, j - 1), i, j, 0, 0);
  emit(ints.e_nuc, 0, 0, 0, 0);
  return out.str();
}

void emit_fcidump(const IntegralSet& ints, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write FCIDUMP file: " + path);
  f << emit_fcidump_text(ints);
}

double hf_reference_energy(const IntegralSet& ints) {
  ints.validate();
  if (ints.ms2 != 0 || ints.n_elec % 2 != 0)
    throw std::runtime_error("HF reference energy needs a closed shell (MS2=0)");
  int nocc = ints.n_elec / 2;
  if (nocc > ints.n_orb) throw std::runtime_error("more electron pairs than orbitals");
  double e = ints.e_nuc;
  for (int i = 0; i < nocc; ++i) {
    e += 2.0 * ints.one(i, i);
    for (int j = 0; j < nocc; ++j)
      e += 2.0 * ints.two(i, i, j, j) - ints.two(i, j, i, j);
  }
  return e;
}

}  // namespace punn
