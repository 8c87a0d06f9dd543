#include "ccinterp/ccsd.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ccinterp/diis.hpp"
#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"

namespace ccinterp {

AmplitudeSet AmplitudeSet::zeros(std::size_t n_virt, std::size_t n_occ) {
  return {Tensor({n_virt, n_occ}), Tensor({n_virt, n_virt, n_occ, n_occ})};
}

Eigen::VectorXd AmplitudeSet::to_vector() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
  std::copy(t1.flat().begin(), t1.flat().end(), v.data());
  std::copy(t2.flat().begin(), t2.flat().end(), v.data() + t1.size());
  return v;
}

void AmplitudeSet::assign(const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != size()) {
    throw ShapeMismatch("amplitude vector length " + std::to_string(v.size()) + " != " +
                        std::to_string(size()));
  }
  std::copy(v.data(), v.data() + t1.size(), t1.data());
  std::copy(v.data() + t1.size(), v.data() + v.size(), t2.data());
}

double AmplitudeSet::antisymmetry_violation() const {
  const std::size_t nv = n_virt(), no = n_occ();
  double worst = 0.0;
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          worst = std::max(worst, std::abs(t2(a, b, i, j) + t2(b, a, i, j)));
          worst = std::max(worst, std::abs(t2(a, b, i, j) + t2(a, b, j, i)));
        }
  return worst;
}

void AmplitudeSet::antisymmetrize() {
  const std::size_t nv = n_virt(), no = n_occ();
  Tensor out(t2.dims());
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          out(a, b, i, j) =
              0.25 * (t2(a, b, i, j) - t2(b, a, i, j) - t2(a, b, j, i) + t2(b, a, j, i));
        }
  t2 = std::move(out);
}

double AmplitudeSet::norm() const {
  const double a = t1.norm(), b = t2.norm();
  return std::sqrt(a * a + b * b);
}

AmplitudeSet& AmplitudeSet::operator+=(const AmplitudeSet& o) {
  t1 += o.t1;
  t2 += o.t2;
  return *this;
}

AmplitudeSet& AmplitudeSet::operator*=(double s) {
  t1 *= s;
  t2 *= s;
  return *this;
}

namespace {

void require_shapes(const AmplitudeSet& t, const MoIntegrals& mo) {
  if (t.t1.rank() != 2 || t.t2.rank() != 4 || t.n_virt() != mo.n_virt_so ||
      t.n_occ() != mo.n_occ_so || t.t2.dim(0) != mo.n_virt_so || t.t2.dim(1) != mo.n_virt_so ||
      t.t2.dim(2) != mo.n_occ_so || t.t2.dim(3) != mo.n_occ_so) {
    throw ShapeMismatch("amplitudes " + t.t1.shape_string() + "/" + t.t2.shape_string() +
                        " do not match " + std::to_string(mo.n_virt_so) + " virtual and " +
                        std::to_string(mo.n_occ_so) + " occupied spin orbitals");
  }
}

// Orbital-energy denominators f_ii - f_aa and f_ii + f_jj - f_aa - f_bb.
AmplitudeSet denominators(const MoIntegrals& mo) {
  const std::size_t no = mo.n_occ_so, nv = mo.n_virt_so;
  auto d = AmplitudeSet::zeros(nv, no);
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t i = 0; i < no; ++i) {
      d.t1(a, i) = mo.f(i, i) - mo.f(no + a, no + a);
      smallest = std::min(smallest, std::abs(d.t1(a, i)));
    }
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          const double v = mo.f(i, i) + mo.f(j, j) - mo.f(no + a, no + a) - mo.f(no + b, no + b);
          d.t2(a, b, i, j) = v;
          if (a != b && i != j) smallest = std::min(smallest, std::abs(v));
        }
  if (smallest < kMinDenominator) {
    throw DegenerateDenominator("orbital-energy denominator " + exact(smallest) + " below " +
                                exact(kMinDenominator));
  }
  return d;
}

}  // namespace

AmplitudeSet mp2_guess(const MoIntegrals& mo) {
  const std::size_t no = mo.n_occ_so, nv = mo.n_virt_so;
  const auto d = denominators(mo);
  auto t = AmplitudeSet::zeros(nv, no);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          if (a == b || i == j) continue;
          t.t2(a, b, i, j) = mo.eri_as(i, j, no + a, no + b) / d.t2(a, b, i, j);
        }
  return t;
}

double cc_energy(const AmplitudeSet& t, const MoIntegrals& mo) {
  require_shapes(t, mo);
  const std::size_t no = mo.n_occ_so, nv = mo.n_virt_so;
  double e = 0.0;
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t i = 0; i < no; ++i) e += mo.f(i, no + a) * t.t1(a, i);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          const double g = mo.eri_as(i, j, no + a, no + b);
          e += 0.25 * g * t.t2(a, b, i, j) + 0.5 * g * t.t1(a, i) * t.t1(b, j);
        }
  return e;
}

AmplitudeSet cc_residual(const AmplitudeSet& t, const MoIntegrals& mo) {
  require_shapes(t, mo);
  const std::size_t no = mo.n_occ_so, nv = mo.n_virt_so;
  const Tensor& G = mo.eri_as;
  const Matrix& f = mo.f;
  const Tensor& t1 = t.t1;
  const Tensor& t2 = t.t2;
  // Global spin-orbital index of virtual a.
  const auto V = [no](std::size_t a) { return no + a; };

  Tensor tau(t2.dims()), taut(t2.dims());
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          const double x = t1(a, i) * t1(b, j) - t1(b, i) * t1(a, j);
          tau(a, b, i, j) = t2(a, b, i, j) + x;
          taut(a, b, i, j) = t2(a, b, i, j) + 0.5 * x;
        }

  Matrix Fae = Matrix::Zero(nv, nv), Fmi = Matrix::Zero(no, no), Fme = Matrix::Zero(no, nv);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t e = 0; e < nv; ++e) {
      double s = (a != e) ? f(V(a), V(e)) : 0.0;
      for (std::size_t m = 0; m < no; ++m) {
        s -= 0.5 * f(m, V(e)) * t1(a, m);
        for (std::size_t ff = 0; ff < nv; ++ff) s += t1(ff, m) * G(m, V(a), V(ff), V(e));
        for (std::size_t n = 0; n < no; ++n)
          for (std::size_t ff = 0; ff < nv; ++ff)
            s -= 0.5 * taut(a, ff, m, n) * G(m, n, V(e), V(ff));
      }
      Fae(a, e) = s;
    }
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t i = 0; i < no; ++i) {
      double s = (m != i) ? f(m, i) : 0.0;
      for (std::size_t e = 0; e < nv; ++e) {
        s += 0.5 * t1(e, i) * f(m, V(e));
        for (std::size_t n = 0; n < no; ++n) {
          s += t1(e, n) * G(m, n, i, V(e));
          for (std::size_t ff = 0; ff < nv; ++ff)
            s += 0.5 * taut(e, ff, i, n) * G(m, n, V(e), V(ff));
        }
      }
      Fmi(m, i) = s;
    }
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t e = 0; e < nv; ++e) {
      double s = f(m, V(e));
      for (std::size_t n = 0; n < no; ++n)
        for (std::size_t ff = 0; ff < nv; ++ff) s += t1(ff, n) * G(m, n, V(e), V(ff));
      Fme(m, e) = s;
    }

  Tensor Wmnij({no, no, no, no});
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t n = 0; n < no; ++n)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          double s = G(m, n, i, j);
          for (std::size_t e = 0; e < nv; ++e) {
            s += t1(e, j) * G(m, n, i, V(e)) - t1(e, i) * G(m, n, j, V(e));
            for (std::size_t ff = 0; ff < nv; ++ff)
              s += 0.25 * tau(e, ff, i, j) * G(m, n, V(e), V(ff));
          }
          Wmnij(m, n, i, j) = s;
        }

  Tensor Wabef({nv, nv, nv, nv});
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t e = 0; e < nv; ++e)
        for (std::size_t ff = 0; ff < nv; ++ff) {
          double s = G(V(a), V(b), V(e), V(ff));
          for (std::size_t m = 0; m < no; ++m) {
            s -= t1(b, m) * G(V(a), m, V(e), V(ff)) - t1(a, m) * G(V(b), m, V(e), V(ff));
            for (std::size_t n = 0; n < no; ++n)
              s += 0.25 * tau(a, b, m, n) * G(m, n, V(e), V(ff));
          }
          Wabef(a, b, e, ff) = s;
        }

  Tensor Wmbej({no, nv, nv, no});
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t e = 0; e < nv; ++e)
        for (std::size_t j = 0; j < no; ++j) {
          double s = G(m, V(b), V(e), j);
          for (std::size_t ff = 0; ff < nv; ++ff) s += t1(ff, j) * G(m, V(b), V(e), V(ff));
          for (std::size_t n = 0; n < no; ++n) {
            s -= t1(b, n) * G(m, n, V(e), j);
            for (std::size_t ff = 0; ff < nv; ++ff)
              s -= (0.5 * t2(ff, b, j, n) + t1(ff, j) * t1(b, n)) * G(m, n, V(e), V(ff));
          }
          Wmbej(m, b, e, j) = s;
        }

  auto r = AmplitudeSet::zeros(nv, no);

  // Singles.
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t i = 0; i < no; ++i) {
      double s = f(i, V(a));
      for (std::size_t e = 0; e < nv; ++e) s += t1(e, i) * Fae(a, e);
      for (std::size_t m = 0; m < no; ++m) s -= t1(a, m) * Fmi(m, i);
      for (std::size_t m = 0; m < no; ++m)
        for (std::size_t e = 0; e < nv; ++e) {
          s += t2(a, e, i, m) * Fme(m, e);
          s -= t1(e, m) * G(m, V(a), i, V(e));
          for (std::size_t ff = 0; ff < nv; ++ff)
            s -= 0.5 * t2(e, ff, i, m) * G(m, V(a), V(e), V(ff));
          for (std::size_t n = 0; n < no; ++n) s -= 0.5 * t2(a, e, m, n) * G(n, m, V(e), i);
        }
      r.t1(a, i) = s - (f(i, i) - f(V(a), V(a))) * t1(a, i);
    }

  // Doubles. Terms with a P(ab) or P(ij) permutation are accumulated
  // unpermuted in X and antisymmetrized once at the end.
  Matrix Fbe = Fae;  // F_be - 1/2 sum_m t_mb F_me
  for (std::size_t b = 0; b < nv; ++b)
    for (std::size_t e = 0; e < nv; ++e)
      for (std::size_t m = 0; m < no; ++m) Fbe(b, e) -= 0.5 * t1(b, m) * Fme(m, e);
  Matrix Fmj = Fmi;  // F_mj + 1/2 sum_e t_je F_me
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t j = 0; j < no; ++j)
      for (std::size_t e = 0; e < nv; ++e) Fmj(m, j) += 0.5 * t1(e, j) * Fme(m, e);

  Tensor Pab(t2.dims()), Pij(t2.dims()), Pabij(t2.dims());
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          double s = G(i, j, V(a), V(b));
          for (std::size_t m = 0; m < no; ++m)
            for (std::size_t n = 0; n < no; ++n) s += 0.5 * tau(a, b, m, n) * Wmnij(m, n, i, j);
          for (std::size_t e = 0; e < nv; ++e)
            for (std::size_t ff = 0; ff < nv; ++ff) s += 0.5 * tau(e, ff, i, j) * Wabef(a, b, e, ff);
          r.t2(a, b, i, j) = s;

          double xab = 0.0;
          for (std::size_t e = 0; e < nv; ++e) xab += t2(a, e, i, j) * Fbe(b, e);
          for (std::size_t m = 0; m < no; ++m) xab -= t1(a, m) * G(m, V(b), i, j);
          Pab(a, b, i, j) = xab;

          double xij = 0.0;
          for (std::size_t m = 0; m < no; ++m) xij -= t2(a, b, i, m) * Fmj(m, j);
          for (std::size_t e = 0; e < nv; ++e) xij += t1(e, i) * G(V(a), V(b), V(e), j);
          Pij(a, b, i, j) = xij;

          double xabij = 0.0;
          for (std::size_t m = 0; m < no; ++m)
            for (std::size_t e = 0; e < nv; ++e)
              xabij += t2(a, e, i, m) * Wmbej(m, b, e, j) -
                       t1(e, i) * t1(a, m) * G(m, V(b), V(e), j);
          Pabij(a, b, i, j) = xabij;
        }

  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          double s = r.t2(a, b, i, j);
          s += Pab(a, b, i, j) - Pab(b, a, i, j);
          s += Pij(a, b, i, j) - Pij(a, b, j, i);
          s += Pabij(a, b, i, j) - Pabij(b, a, i, j) - Pabij(a, b, j, i) + Pabij(b, a, j, i);
          const double d = f(i, i) + f(j, j) - f(V(a), V(a)) - f(V(b), V(b));
          r.t2(a, b, i, j) = s - d * t2(a, b, i, j);
        }
  return r;
}

CcSolution solve_ccsd(AmplitudeSet guess, const MoIntegrals& mo, const CcConfig& cfg) {
  require_shapes(guess, mo);
  if (guess.antisymmetry_violation() > 1e-10) guess.antisymmetrize();
  const auto d = denominators(mo);
  // The doubles denominators with a == b or i == j multiply amplitudes that
  // are identically zero; keep them finite.
  Eigen::VectorXd inv_d = d.to_vector();
  for (Eigen::Index k = 0; k < inv_d.size(); ++k) {
    inv_d(k) = std::abs(inv_d(k)) < kMinDenominator ? 0.0 : 1.0 / inv_d(k);
  }

  CcSolution sol;
  sol.amplitudes = std::move(guess);
  AmplitudeSet& t = sol.amplitudes;
  AmplitudeSet q = cc_residual(t, mo);
  double e = cc_energy(t, mo);
  double qn = q.norm();
  if (qn < cfg.tol_r) {
    sol.e_corr = e;
    sol.final_residual_norm = qn;
    return sol;
  }

  Diis diis(cfg.diis_dim);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Eigen::VectorXd step = q.to_vector().cwiseProduct(inv_d);
    Eigen::VectorXd next = t.to_vector() + step;
    if (cfg.diis_dim > 0) {
      if (auto ext = diis.push(next, step)) next = *ext;
    }
    t.assign(next);
    q = cc_residual(t, mo);
    const double e_new = cc_energy(t, mo);
    qn = q.norm();
    const double de = std::abs(e_new - e);
    e = e_new;
    if (qn < cfg.tol_r && de < cfg.tol_e) {
      sol.e_corr = e;
      sol.iterations = it;
      sol.final_residual_norm = qn;
      return sol;
    }
  }
  throw CcNotConverged("no convergence after " + std::to_string(cfg.max_iter) +
                       " iterations; residual norm " + exact(qn));
}

CcSolution solve_ccsd(const MoIntegrals& mo, const CcConfig& cfg) {
  return solve_ccsd(mp2_guess(mo), mo, cfg);
}

}  // namespace ccinterp
