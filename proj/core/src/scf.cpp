#include "ccinterp/scf.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ccinterp/diis.hpp"
#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"

namespace ccinterp {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix closed_shell_density(const Matrix& C, std::size_t n_occ) {
  const auto occ = C.leftCols(static_cast<Eigen::Index>(n_occ));
  return 2.0 * occ * occ.transpose();
}

}  // namespace

LowdinFactors lowdin(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) throw LinearDependence("overlap eigensolve failed");
  const Vector& w = es.eigenvalues();
  if (w.minCoeff() < kLinearDependenceThreshold) {
    throw LinearDependence("smallest overlap eigenvalue " + exact(w.minCoeff()) + " below " +
                           exact(kLinearDependenceThreshold));
  }
  const Matrix& U = es.eigenvectors();
  LowdinFactors out;
  out.half = U * w.cwiseSqrt().asDiagonal() * U.transpose();
  out.inv_half = U * w.cwiseSqrt().cwiseInverse().asDiagonal() * U.transpose();
  // Symmetrize away rounding.
  out.half = 0.5 * (out.half + out.half.transpose()).eval();
  out.inv_half = 0.5 * (out.inv_half + out.inv_half.transpose()).eval();
  return out;
}

Matrix fock_build(const Matrix& h_core, const Tensor& eri, const Matrix& D) {
  const auto n = h_core.rows();
  if (h_core.cols() != n || D.rows() != n || D.cols() != n || eri.rank() != 4 ||
      eri.dim(0) != static_cast<std::size_t>(n)) {
    throw ShapeMismatch("fock_build: inconsistent shapes");
  }
  Matrix F = h_core;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double g = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
          g += D(k, l) * (eri(i, j, k, l) - 0.5 * eri(i, k, j, l));
        }
      }
      F(i, j) += g;
    }
  }
  return F;
}

void fix_column_signs(Matrix& C) {
  for (Eigen::Index c = 0; c < C.cols(); ++c) {
    const double big = C.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < C.rows(); ++r) {
      if (std::abs(C(r, c)) >= big * (1.0 - 1e-8)) {
        if (C(r, c) < 0) C.col(c) *= -1.0;
        break;
      }
    }
  }
}

Orbitals solve_roothaan(const Matrix& F, const Matrix& S_inv_half) {
  const Matrix Fo = S_inv_half * F * S_inv_half;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Fo + Fo.transpose()));
  if (es.info() != Eigen::Success) throw InvalidArgument("Roothaan eigensolve failed");
  Orbitals out;
  out.lambdas = es.eigenvalues();  // ascending
  out.C = S_inv_half * es.eigenvectors();
  fix_column_signs(out.C);
  return out;
}

Matrix ScfSolution::idempotent_density() const {
  const auto occ = C.leftCols(static_cast<Eigen::Index>(n_occ));
  const Matrix half = lowdin(S).half;
  return half * occ * occ.transpose() * half;
}

Matrix riemannian_gradient(const Matrix& S, const Matrix& C, std::size_t n_occ, const Matrix& F) {
  const auto L = lowdin(S);
  const auto occ = C.leftCols(static_cast<Eigen::Index>(n_occ));
  const Matrix Dt = L.half * occ * occ.transpose() * L.half;
  const Matrix Ft = L.inv_half * F * L.inv_half;
  const Matrix inner = Dt * Ft - Ft * Dt;
  return Dt * inner - inner * Dt;
}

ScfSolution scf_iterate(const IntegralBundle& ints, int n_electrons, const ScfConfig& cfg) {
  const auto nb = static_cast<std::size_t>(ints.S.rows());
  if (n_electrons <= 0 || n_electrons % 2 != 0) {
    throw InvalidArgument("closed shell required: electron count " +
                          std::to_string(n_electrons) + " is not a positive even number");
  }
  const auto n_occ = static_cast<std::size_t>(n_electrons / 2);
  if (n_occ >= nb + 1 || static_cast<std::size_t>(n_electrons) > 2 * nb) {
    throw InvalidArgument("too many electrons (" + std::to_string(n_electrons) + ") for " +
                          std::to_string(nb) + " basis functions");
  }

  const auto L = lowdin(ints.S);
  const Matrix& X = L.inv_half;

  auto orb = solve_roothaan(ints.h_core, X);
  Matrix D = closed_shell_density(orb.C, n_occ);
  Diis diis(cfg.diis_dim);

  double e_prev = std::numeric_limits<double>::quiet_NaN();
  double grad = std::numeric_limits<double>::infinity();
  bool last_step_plain = false;
  Matrix F_prev_used;

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    const Matrix F = fock_build(ints.h_core, ints.eri, D);
    const double e = 0.5 * (D.cwiseProduct(ints.h_core + F)).sum() + ints.e_nuc;
    const Matrix Dt = L.half * (0.5 * D) * L.half;
    const Matrix Ft = X * F * X;
    const Matrix comm = Dt * Ft - Ft * Dt;
    grad = (Dt * comm - comm * Dt).norm();

    const bool small = grad < cfg.tol_grad && std::abs(e - e_prev) < cfg.tol_e;
    if (small && last_step_plain) {
      ScfSolution sol;
      sol.S = ints.S;
      sol.C = orb.C;
      sol.lambdas = orb.lambdas;
      sol.D = D;
      sol.F = F;
      sol.e_hf = e;
      sol.e_nuc = ints.e_nuc;
      sol.grad_norm = grad;
      sol.iterations = iter;
      sol.n_occ = n_occ;
      sol.gap = n_occ < nb ? orb.lambdas(static_cast<Eigen::Index>(n_occ)) -
                                 orb.lambdas(static_cast<Eigen::Index>(n_occ) - 1)
                           : std::numeric_limits<double>::infinity();
      if (sol.gap < cfg.gap_min) {
        throw GapCollapse("HOMO-LUMO gap " + exact(sol.gap) + " below gap_min " +
                          exact(cfg.gap_min));
      }
      return sol;
    }

    Matrix F_use = F;
    last_step_plain = true;
    // Near convergence take a plain Roothaan step so the returned orbitals
    // diagonalize a Fock matrix of a self-consistent density.
    if (cfg.diis_dim > 0 && iter >= 2 && !small && grad > cfg.tol_grad) {
      const Matrix err = X * (F * D * ints.S - ints.S * D * F) * X;
      const auto flat = [](const Matrix& m) { return Vector(m.reshaped()); };
      if (auto ext = diis.push(flat(F), flat(err))) {
        F_use = ext->reshaped(F.rows(), F.cols());
        last_step_plain = false;
      } else if (F_prev_used.size() != 0) {
        F_use = 0.5 * (F + F_prev_used);  // damped fallback
        last_step_plain = false;
      }
    }
    F_prev_used = F_use;
    orb = solve_roothaan(F_use, X);
    D = closed_shell_density(orb.C, n_occ);
    e_prev = e;
  }
  throw ScfNotConverged("no convergence after " + std::to_string(cfg.max_iter) +
                        " iterations; last gradient norm " + exact(grad));
}

Matrix spin_block(const Matrix& m) {
  Matrix out = Matrix::Zero(2 * m.rows(), 2 * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(2 * i, 2 * j) = m(i, j);
      out(2 * i + 1, 2 * j + 1) = m(i, j);
    }
  }
  return out;
}

Tensor transform_eri(const Tensor& eri_ao, const Matrix& C) {
  const auto nb = static_cast<Eigen::Index>(eri_ao.dim(0));
  const auto nm = C.cols();
  if (C.rows() != nb) throw ShapeMismatch("transform_eri: coefficient rows != basis size");
  // Each pass contracts the leading index and rotates it to the back:
  // out[b,c,d,p] = sum_a in[a,b,c,d] C[a,p].
  std::vector<Eigen::Index> dims = {nb, nb, nb, nb};
  std::vector<double> cur(eri_ao.flat().begin(), eri_ao.flat().end());
  for (int pass = 0; pass < 4; ++pass) {
    const Eigen::Index lead = dims[0];
    const Eigen::Index rest = dims[1] * dims[2] * dims[3];
    Eigen::Map<const RowMajor> in(cur.data(), lead, rest);
    RowMajor out = in.transpose() * C;
    cur.assign(out.data(), out.data() + out.size());
    dims = {dims[1], dims[2], dims[3], nm};
  }
  const auto n = static_cast<std::size_t>(nm);
  Tensor t({n, n, n, n});
  std::copy(cur.begin(), cur.end(), t.data());
  return t;
}

MoIntegrals spin_orbital_integrals(const Matrix& h_mo, const Matrix& f_mo, const Tensor& eri_mo,
                                   std::size_t n_occ, double e_ref, double e_nuc) {
  const auto n = static_cast<std::size_t>(h_mo.rows());
  if (eri_mo.rank() != 4 || eri_mo.dim(0) != n || f_mo.rows() != h_mo.rows() || n_occ > n) {
    throw ShapeMismatch("spin_orbital_integrals: inconsistent shapes");
  }
  const std::size_t ns = 2 * n;
  MoIntegrals mo;
  mo.n_occ_so = 2 * n_occ;
  mo.n_virt_so = ns - mo.n_occ_so;
  mo.e_ref = e_ref;
  mo.e_nuc = e_nuc;
  mo.f = spin_block(f_mo);
  mo.h = spin_block(h_mo);
  mo.eri_as = Tensor({ns, ns, ns, ns});
  for (std::size_t p = 0; p < ns; ++p) {
    for (std::size_t q = 0; q < ns; ++q) {
      for (std::size_t r = 0; r < ns; ++r) {
        for (std::size_t s = 0; s < ns; ++s) {
          const bool pr = (p & 1) == (r & 1), qs = (q & 1) == (s & 1);
          const bool ps = (p & 1) == (s & 1), qr = (q & 1) == (r & 1);
          const double direct = (pr && qs) ? eri_mo(p / 2, r / 2, q / 2, s / 2) : 0.0;
          const double exch = (ps && qr) ? eri_mo(p / 2, s / 2, q / 2, r / 2) : 0.0;
          mo.eri_as(p, q, r, s) = direct - exch;
        }
      }
    }
  }
  return mo;
}

MoIntegrals mo_transform(const IntegralBundle& ints, const ScfSolution& scf) {
  const Matrix h_mo = scf.C.transpose() * ints.h_core * scf.C;
  const Matrix f_mo = scf.C.transpose() * scf.F * scf.C;
  return spin_orbital_integrals(h_mo, f_mo, transform_eri(ints.eri, scf.C), scf.n_occ, scf.e_hf,
                                scf.e_nuc);
}

}  // namespace ccinterp
