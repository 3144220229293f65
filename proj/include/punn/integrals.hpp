#pragma once

#include <string>
#include <vector>

namespace punn {

/// Restricted molecular integrals in a spatial MO basis, as read from an
/// FCIDUMP file.  h is the symmetric one-body matrix; g holds the chemists'
/// two-body tensor (ij|kl) with full 8-fold permutation symmetry.
struct IntegralSet {
  int n_orb = 0;
  int n_elec = 0;
  int ms2 = 0;
  double e_nuc = 0.0;
  std::vector<double> h;  // n_orb^2
  std::vector<double> g;  // n_orb^4

  double one(int i, int j) const { return h[static_cast<std::size_t>(i) * n_orb + j]; }
  /// chemists' (ij|kl), zero-based indices
  double two(int i, int j, int k, int l) const {
    std::size_t n = static_cast<std::size_t>(n_orb);
    return g[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  }
  void set_one(int i, int j, double v);
  void set_two(int i, int j, int k, int l, double v);  // writes all 8 images

  int n_alpha() const { return (n_elec + ms2) / 2; }
  int n_beta() const { return (n_elec - ms2) / 2; }

  /// Check symmetry/shape invariants (throws std::runtime_error on failure).
  void validate(double tol = 1e-12) const;
};

/// Parse an FCIDUMP file.  Accepted records after the &FCI ... &END header:
///   v i j k l   -> (ij|kl)      (all indices 1-based, nonzero)
///   v i j 0 0   -> h_ij
///   v 0 0 0 0   -> e_nuc
/// Fortran 'D' exponents are accepted.  Unlisted entries are zero; repeated
/// entries overwrite.  Errors carry the offending line number.
IntegralSet parse_fcidump(const std::string& path);
IntegralSet parse_fcidump_text(const std::string& text, const std::string& name = "<text>");

/// Canonical emission: unique two-body entries under 8-fold symmetry
/// (i>=j, k>=l, (i,j)>=(k,l)), then one-body (i>=j), then e_nuc, with 17
/// significant digits so parse(emit(parse(f))) is bit-identical.
std::string emit_fcidump_text(const IntegralSet& ints);
void emit_fcidump(const IntegralSet& ints, const std::string& path);

/// Closed-shell restricted HF energy of the first n_elec/2 orbitals:
/// e_nuc + 2 sum_i h_ii + sum_ij (2 (ii|jj) - (ij|ij)).
double hf_reference_energy(const IntegralSet& ints);

}  // namespace punn
