#pragma once

#include <cstdint>
#include <vector>

#include "ccinterp/scf.hpp"
#include "ccinterp/tensor.hpp"

namespace ccinterp {

/// Spin-orbital singles and doubles amplitudes. t1 is [a, i] and t2 is
/// [a, b, i, j], virtual indices first, both row-major.
struct AmplitudeSet {
  Tensor t1;
  Tensor t2;

  static AmplitudeSet zeros(std::size_t n_virt, std::size_t n_occ);

  std::size_t n_virt() const { return t1.dim(0); }
  std::size_t n_occ() const { return t1.dim(1); }
  std::size_t size() const { return t1.size() + t2.size(); }

  /// Concatenated (t1, t2) vector.
  Eigen::VectorXd to_vector() const;
  void assign(const Eigen::VectorXd& v);

  /// max |t2[a,b,i,j] + t2[b,a,i,j]|, |t2[a,b,i,j] + t2[a,b,j,i]|
  double antisymmetry_violation() const;
  /// Projects t2 onto its antisymmetric part.
  void antisymmetrize();

  bool same_shape(const AmplitudeSet& o) const {
    return t1.same_shape(o.t1) && t2.same_shape(o.t2);
  }
  double norm() const;
  AmplitudeSet& operator+=(const AmplitudeSet& o);
  AmplitudeSet& operator*=(double s);
};

enum class CcGuess { Mp2, Supplied };

struct CcConfig {
  double tol_r = 1e-9;   // ||Q(t)||_2
  double tol_e = 1e-10;  // |delta e_corr|
  int max_iter = 100;
  int diis_dim = 8;      // 0 disables DIIS
  CcGuess guess = CcGuess::Mp2;
};

struct CcSolution {
  AmplitudeSet amplitudes;
  double e_corr = 0;
  int iterations = 0;
  double final_residual_norm = 0;
};

/// Smallest admissible |orbital-energy denominator|.
inline constexpr double kMinDenominator = 1e-8;

/// t1 = 0, t2 = <ij||ab> / (f_ii + f_jj - f_aa - f_bb). Throws
/// DegenerateDenominator if a denominator is below kMinDenominator.
AmplitudeSet mp2_guess(const MoIntegrals& mo);

/// Projected CCSD equations Q(t) (singles and doubles), evaluated with the
/// usual one- and two-body intermediates.
AmplitudeSet cc_residual(const AmplitudeSet& t, const MoIntegrals& mo);

/// Correlation energy: sum f_ia t_ia + 1/4 <ij||ab> t_ijab + 1/2 <ij||ab> t_ia t_jb.
double cc_energy(const AmplitudeSet& t, const MoIntegrals& mo);

/// Preconditioned fixed-point iteration t <- t + Q(t)/D with optional DIIS.
/// A guess whose residual is already below tol_r is returned after zero
/// iterations. Throws CcNotConverged after max_iter steps.
CcSolution solve_ccsd(AmplitudeSet guess, const MoIntegrals& mo, const CcConfig& cfg = {});

/// Convenience: MP2 guess followed by solve_ccsd.
CcSolution solve_ccsd(const MoIntegrals& mo, const CcConfig& cfg = {});

struct FciResult {
  double energy = 0;                    // total, including nuclear repulsion
  Eigen::VectorXd vector;               // ground state in `determinants` order
  std::vector<std::uint32_t> determinants;  // occupation bitstrings, Sz = 0
};

/// Largest spin-orbital count accepted by fci_energy.
inline constexpr std::size_t kMaxFciSpinOrbitals = 16;

/// Dense full CI over Sz = 0 determinants with Slater-Condon rules. Uses
/// mo.h, mo.eri_as and mo.e_nuc. Throws TooLarge above kMaxFciSpinOrbitals.
FciResult fci_energy(const MoIntegrals& mo, int n_electrons);

/// Cluster amplitudes reproducing the FCI vector through singles and
/// doubles: t1 = c1/c0 and t2 = c2/c0 - (t1 t1 antisymmetrized).
AmplitudeSet fci_cluster_amplitudes(const FciResult& fci, const MoIntegrals& mo);

}  // namespace ccinterp
