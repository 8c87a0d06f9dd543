#pragma once

#include "ccinterp/integrals.hpp"
#include "ccinterp/tensor.hpp"

namespace ccinterp {

struct ScfConfig {
  double tol_grad = 1e-10;  // Frobenius norm of [D,[D,F]] (orthonormal basis)
  double tol_e = 1e-12;     // |E_k - E_{k-1}|
  int max_iter = 200;
  int diis_dim = 8;         // 0 disables DIIS
  double gap_min = 1e-6;    // hartree
};

struct LowdinFactors {
  Matrix half;      // S^{1/2}
  Matrix inv_half;  // S^{-1/2}
};

/// Symmetric square root of an SPD matrix and its inverse. Throws
/// LinearDependence if an eigenvalue is below 1e-10.
LowdinFactors lowdin(const Matrix& S);

/// F = h + J(D) - K(D)/2 for the closed-shell density D = 2 C_occ C_occ^T.
Matrix fock_build(const Matrix& h_core, const Tensor& eri, const Matrix& D);

struct Orbitals {
  Matrix C;        // S-orthonormal columns, ascending orbital energy
  Vector lambdas;  // ascending
};

/// Solves F C = S C Lambda through the orthonormalized problem. Each column
/// is signed so that its largest-magnitude entry is positive (first such
/// entry on near-ties).
Orbitals solve_roothaan(const Matrix& F, const Matrix& S_inv_half);

/// Flips column signs so the largest-magnitude entry is positive.
void fix_column_signs(Matrix& C);

struct ScfSolution {
  Matrix S;          // overlap (kept for downstream transforms)
  Matrix C;
  Vector lambdas;
  Matrix D;          // 2 C_occ C_occ^T
  Matrix F;          // F(D)
  double e_hf = 0;   // total, including nuclear repulsion
  double e_nuc = 0;
  double gap = 0;    // lambda_{n_occ} - lambda_{n_occ - 1} (0-based)
  double grad_norm = 0;
  int iterations = 0;
  std::size_t n_occ = 0;  // spatial

  /// S^{1/2} (C_occ C_occ^T) S^{1/2}: idempotent with trace n_occ.
  Matrix idempotent_density() const;
};

/// [D,[D,F]] with D = S^{1/2} C_occ C_occ^T S^{1/2} and F = S^{-1/2} F S^{-1/2}.
Matrix riemannian_gradient(const Matrix& S, const Matrix& C, std::size_t n_occ, const Matrix& F);

/// Closed-shell RHF. Throws InvalidArgument for odd or too many electrons,
/// ScfNotConverged after max_iter, GapCollapse if the HOMO-LUMO gap falls
/// below gap_min.
ScfSolution scf_iterate(const IntegralBundle& ints, int n_electrons, const ScfConfig& cfg = {});

/// Spin-orbital MO integrals. Spatial orbital p maps to spin orbitals 2p
/// (alpha) and 2p+1 (beta); occupied spin orbitals come first.
struct MoIntegrals {
  Matrix f;        // Fock, n_so x n_so
  Matrix h;        // core Hamiltonian, n_so x n_so
  Tensor eri_as;   // <pq||rs>, physicists' order
  std::size_t n_occ_so = 0;
  std::size_t n_virt_so = 0;
  double e_ref = 0;  // reference (HF) total energy
  double e_nuc = 0;

  std::size_t n_so() const { return n_occ_so + n_virt_so; }
};

/// Builds spin-orbital integrals from spatial MO quantities. `eri_mo` is in
/// chemists' order (pq|rs).
MoIntegrals spin_orbital_integrals(const Matrix& h_mo, const Matrix& f_mo, const Tensor& eri_mo,
                                   std::size_t n_occ, double e_ref, double e_nuc);

/// (pq|rs) = sum C_mp C_nq C_lr C_ss (mn|ls) in four quarter transforms.
Tensor transform_eri(const Tensor& eri_ao, const Matrix& C);

MoIntegrals mo_transform(const IntegralBundle& ints, const ScfSolution& scf);

/// Block-diagonal spin expansion: out(2i+s, 2j+s) = m(i, j).
Matrix spin_block(const Matrix& m);

}  // namespace ccinterp
