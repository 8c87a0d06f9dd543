#pragma once

#include "ccinterp/ccsd.hpp"
#include "ccinterp/integrals.hpp"
#include "ccinterp/tensor.hpp"

namespace ccinterp {

enum class BasisTag { MO, AO };

/// Rank-k excitation tensor (k = 1 or 2). Modes are ordered virtual/AO
/// first, then occupied/AO: [a, i] or [a, b, i, j].
struct ExcTensor {
  int rank = 1;
  BasisTag basis = BasisTag::MO;
  Tensor data;

  /// Wraps an MO tensor; rank is inferred from data.rank() (2 or 4).
  static ExcTensor mo(Tensor data);
};

/// Spin-blocked coefficient blocks and overlap at one geometry.
struct TransformPair {
  Matrix C_occ;   // n_b_so x n_occ_so
  Matrix C_virt;  // n_b_so x n_virt_so
  Matrix S;       // n_b_so x n_b_so

  /// Expands spatial S and C (occupied columns first) to spin orbitals.
  static TransformPair from_spatial(const Matrix& S, const Matrix& C, std::size_t n_occ);

  /// Largest deviation from orthonormality across the three block identities.
  double orthonormality_error() const;
};

/// out[.., r, ..] = sum_c M(r, c) T[.., c, ..] on the given mode.
Tensor n_mode_product(const Tensor& T, const Matrix& M, std::size_t mode);

/// Applies Mv to the virtual modes and Mo to the occupied modes.
ExcTensor apply_blocks(const ExcTensor& T, const Matrix& Mv, const Matrix& Mo, BasisTag result);

ExcTensor mo_to_ao(const ExcTensor& T, const TransformPair& tp);
ExcTensor ao_to_mo(const ExcTensor& T, const TransformPair& tp);

/// L_virt = C_virt(target)^T S(target) C_virt(source), L_occ likewise.
struct CrossFactors {
  Matrix L_virt;
  Matrix L_occ;
};
CrossFactors cross_factors(const TransformPair& target, const TransformPair& source);

/// Maps MO amplitudes at the source geometry to the target geometry's MO
/// frame without forming the AO tensor.
ExcTensor cross_transform(const ExcTensor& T, const TransformPair& target,
                          const TransformPair& source);
AmplitudeSet cross_transform(const AmplitudeSet& t, const CrossFactors& factors);
AmplitudeSet cross_transform(const AmplitudeSet& t, const TransformPair& target,
                             const TransformPair& source);

}  // namespace ccinterp
