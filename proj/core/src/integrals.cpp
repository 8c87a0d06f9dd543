#include "ccinterp/integrals.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "ccinterp/boys.hpp"
#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"

namespace ccinterp {

namespace {

constexpr double kPrimitiveCutoff = 1e-14;
constexpr int kMaxE = kMaxAngularMomentum + 2;  // kinetic needs l_b + 2
constexpr int kMaxL = 4 * kMaxAngularMomentum;  // ERI Hermite order

/// Hermite expansion coefficients E^{ij}_t for one Cartesian direction.
struct HermiteE {
  std::array<std::array<std::array<double, 2 * kMaxE + 1>, kMaxE + 1>, kMaxE + 1> e{};

  double operator()(int i, int j, int t) const {
    return (t < 0 || t > i + j) ? 0.0 : e[i][j][t];
  }

  // qx = A_x - B_x.
  void build(int imax, int jmax, double a, double b, double qx) {
    const double p = a + b;
    const double mu = a * b / p;
    const double xpa = -b * qx / p;
    const double xpb = a * qx / p;
    const double inv2p = 0.5 / p;
    for (auto& plane : e) {
      for (auto& row : plane) row.fill(0.0);
    }
    e[0][0][0] = std::exp(-mu * qx * qx);
    for (int i = 0; i < imax; ++i) {
      for (int t = 0; t <= i + 1; ++t) {
        e[i + 1][0][t] = inv2p * (*this)(i, 0, t - 1) + xpa * (*this)(i, 0, t) +
                         (t + 1) * (*this)(i, 0, t + 1);
      }
    }
    for (int i = 0; i <= imax; ++i) {
      for (int j = 0; j < jmax; ++j) {
        for (int t = 0; t <= i + j + 1; ++t) {
          e[i][j + 1][t] = inv2p * (*this)(i, j, t - 1) + xpb * (*this)(i, j, t) +
                           (t + 1) * (*this)(i, j, t + 1);
        }
      }
    }
  }
};

/// Hermite Coulomb integrals R_{tuv}(alpha, PC) for t+u+v <= L.
struct HermiteR {
  using Cube = std::array<std::array<std::array<double, kMaxL + 1>, kMaxL + 1>, kMaxL + 1>;
  Cube r{};

  double operator()(int t, int u, int v) const { return r[t][u][v]; }

  void build(int L, double alpha, const Vec3& pc) {
    std::array<double, kMaxL + 1> f{};
    boys_all(L, alpha * pc.squaredNorm(), f);
    Cube& next = scratch_[0];
    for (int n = L; n >= 0; --n) {
      Cube& cur = (n == 0) ? r : scratch_[1];
      const Cube& prev = next;
      for (int t = 0; t <= L - n; ++t) {
        for (int u = 0; u <= L - n - t; ++u) {
          for (int v = 0; v <= L - n - t - u; ++v) {
            double val;
            if (t > 0) {
              val = pc.x() * prev[t - 1][u][v] + (t > 1 ? (t - 1) * prev[t - 2][u][v] : 0.0);
            } else if (u > 0) {
              val = pc.y() * prev[t][u - 1][v] + (u > 1 ? (u - 1) * prev[t][u - 2][v] : 0.0);
            } else if (v > 0) {
              val = pc.z() * prev[t][u][v - 1] + (v > 1 ? (v - 1) * prev[t][u][v - 2] : 0.0);
            } else {
              val = std::pow(-2.0 * alpha, n) * f[n];
            }
            cur[t][u][v] = val;
          }
        }
      }
      if (n > 0) next = cur;
    }
  }

 private:
  std::array<Cube, 2> scratch_{};
};

struct PairData {
  double a, b;
  double p;
  Vec3 P;
  double coef;  // c_a c_b (normalized), prefactor lives in E^{00}_0
  std::array<HermiteE, 3> E;
};

std::vector<PairData> make_pairs(const Shell& sa, const Vec3& A, const Shell& sb, const Vec3& B,
                                 int extra_j) {
  std::vector<PairData> out;
  const Vec3 Q = A - B;
  for (const auto& pa : sa.primitives) {
    for (const auto& pb : sb.primitives) {
      auto gp = gaussian_product(pa.exponent, A, pb.exponent, B);
      if (std::abs(pa.coefficient * pb.coefficient * gp.prefactor) < kPrimitiveCutoff) continue;
      PairData d;
      d.a = pa.exponent;
      d.b = pb.exponent;
      d.p = gp.p;
      d.P = gp.center;
      d.coef = pa.coefficient * pb.coefficient;
      for (int x = 0; x < 3; ++x) {
        d.E[x].build(sa.l, sb.l + extra_j, pa.exponent, pb.exponent, Q[x]);
      }
      out.push_back(d);
    }
  }
  return out;
}

Vec3 center_of(const Geometry& geom, const Shell& s) { return geom[s.center].position; }

void check_basis(const Geometry& geom, const BasisSet& basis) {
  if (basis.n_atoms() != geom.size()) {
    throw ShapeMismatch("basis built for " + std::to_string(basis.n_atoms()) +
                        " atoms, geometry has " + std::to_string(geom.size()));
  }
}

}  // namespace

GaussianProduct gaussian_product(double a, const Vec3& A, double b, const Vec3& B) {
  GaussianProduct g;
  g.p = a + b;
  g.center = (a * A + b * B) / g.p;
  g.prefactor = std::exp(-a * b * (A - B).squaredNorm() / g.p);
  return g;
}

double coulomb_s_integral(double a, const Vec3& A, double b, const Vec3& B, const Vec3& C) {
  auto g = gaussian_product(a, A, b, B);
  return 2.0 * std::numbers::pi * g.prefactor / g.p * boys(0, g.p * (g.center - C).squaredNorm());
}

Matrix compute_overlap(const Geometry& geom, const BasisSet& basis) {
  check_basis(geom, basis);
  const auto& shells = basis.shells();
  const auto& off = basis.offsets();
  const auto n = static_cast<Eigen::Index>(basis.n_functions());
  Matrix S = Matrix::Zero(n, n);
  for (std::size_t sa = 0; sa < shells.size(); ++sa) {
    for (std::size_t sb = 0; sb <= sa; ++sb) {
      const auto& A = shells[sa];
      const auto& B = shells[sb];
      auto prims = make_pairs(A, center_of(geom, A), B, center_of(geom, B), 0);
      for (std::size_t ca = 0; ca < A.size(); ++ca) {
        const auto pa = cartesian_powers(A.l, ca);
        for (std::size_t cb = 0; cb < B.size(); ++cb) {
          const auto pb = cartesian_powers(B.l, cb);
          double s = 0.0;
          for (const auto& d : prims) {
            s += d.coef * std::pow(std::numbers::pi / d.p, 1.5) * d.E[0](pa[0], pb[0], 0) *
                 d.E[1](pa[1], pb[1], 0) * d.E[2](pa[2], pb[2], 0);
          }
          s *= component_scale(A.l, ca) * component_scale(B.l, cb);
          const auto i = static_cast<Eigen::Index>(off[sa] + ca);
          const auto j = static_cast<Eigen::Index>(off[sb] + cb);
          S(i, j) = s;
          S(j, i) = s;
        }
      }
    }
  }
  return S;
}

IntegralBundle compute_integrals(const Geometry& geom, const BasisSet& basis) {
  check_basis(geom, basis);
  const auto& shells = basis.shells();
  const auto& off = basis.offsets();
  const std::size_t nb = basis.n_functions();
  const auto n = static_cast<Eigen::Index>(nb);

  IntegralBundle out;
  out.S = Matrix::Zero(n, n);
  out.T = Matrix::Zero(n, n);
  out.V = Matrix::Zero(n, n);
  out.e_nuc = geom.nuclear_repulsion();

  HermiteR R;

  // One-electron integrals.
  for (std::size_t sa = 0; sa < shells.size(); ++sa) {
    for (std::size_t sb = 0; sb <= sa; ++sb) {
      const auto& A = shells[sa];
      const auto& B = shells[sb];
      auto prims = make_pairs(A, center_of(geom, A), B, center_of(geom, B), 2);
      const int lab = A.l + B.l;
      // Nuclear attraction Hermite integrals per primitive pair and nucleus.
      std::vector<std::vector<HermiteR::Cube>> rcache(prims.size());
      for (std::size_t k = 0; k < prims.size(); ++k) {
        for (const auto& atom : geom.atoms()) {
          R.build(lab, prims[k].p, prims[k].P - atom.position);
          rcache[k].push_back(R.r);
        }
      }
      for (std::size_t ca = 0; ca < A.size(); ++ca) {
        const auto pa = cartesian_powers(A.l, ca);
        for (std::size_t cb = 0; cb < B.size(); ++cb) {
          const auto pb = cartesian_powers(B.l, cb);
          double s = 0.0, t = 0.0, v = 0.0;
          for (std::size_t k = 0; k < prims.size(); ++k) {
            const auto& d = prims[k];
            std::array<double, 3> ov{}, kin{};
            for (int x = 0; x < 3; ++x) {
              const int i = pa[x], j = pb[x];
              ov[x] = d.E[x](i, j, 0);
              const double lower = j >= 2 ? j * (j - 1) * d.E[x](i, j - 2, 0) : 0.0;
              kin[x] = -0.5 * (lower - 2.0 * d.b * (2 * j + 1) * ov[x] +
                               4.0 * d.b * d.b * d.E[x](i, j + 2, 0));
            }
            const double norm = std::pow(std::numbers::pi / d.p, 1.5);
            s += d.coef * norm * ov[0] * ov[1] * ov[2];
            t += d.coef * norm *
                 (kin[0] * ov[1] * ov[2] + ov[0] * kin[1] * ov[2] + ov[0] * ov[1] * kin[2]);
            double vsum = 0.0;
            for (std::size_t c = 0; c < geom.size(); ++c) {
              const auto& rc = rcache[k][c];
              double acc = 0.0;
              for (int tt = 0; tt <= pa[0] + pb[0]; ++tt) {
                const double ex = d.E[0](pa[0], pb[0], tt);
                for (int uu = 0; uu <= pa[1] + pb[1]; ++uu) {
                  const double ey = d.E[1](pa[1], pb[1], uu);
                  for (int vv = 0; vv <= pa[2] + pb[2]; ++vv) {
                    acc += ex * ey * d.E[2](pa[2], pb[2], vv) * rc[tt][uu][vv];
                  }
                }
              }
              vsum -= geom[c].atomic_number * acc;
            }
            v += d.coef * 2.0 * std::numbers::pi / d.p * vsum;
          }
          const double scale = component_scale(A.l, ca) * component_scale(B.l, cb);
          const auto i = static_cast<Eigen::Index>(off[sa] + ca);
          const auto j = static_cast<Eigen::Index>(off[sb] + cb);
          out.S(i, j) = out.S(j, i) = s * scale;
          out.T(i, j) = out.T(j, i) = t * scale;
          out.V(i, j) = out.V(j, i) = v * scale;
        }
      }
    }
  }
  out.h_core = out.T + out.V;

  // Two-electron integrals over unique shell quartets.
  struct HermiteTerm {
    int t, u, v;
    double c;
  };
  struct PairBlock {
    std::size_t sa, sb;
    std::vector<PairData> prims;
  };
  std::vector<PairBlock> blocks;
  for (std::size_t sa = 0; sa < shells.size(); ++sa) {
    for (std::size_t sb = 0; sb <= sa; ++sb) {
      blocks.push_back({sa, sb,
                        make_pairs(shells[sa], center_of(geom, shells[sa]), shells[sb],
                                   center_of(geom, shells[sb]), 0)});
    }
  }

  // Nonzero Hermite coefficients for one component pair of one primitive pair.
  auto expand = [](const PairData& d, const std::array<int, 3>& pa, const std::array<int, 3>& pb,
                   bool alternate) {
    std::vector<HermiteTerm> terms;
    for (int t = 0; t <= pa[0] + pb[0]; ++t) {
      const double ex = d.E[0](pa[0], pb[0], t);
      for (int u = 0; u <= pa[1] + pb[1]; ++u) {
        const double ey = d.E[1](pa[1], pb[1], u);
        for (int v = 0; v <= pa[2] + pb[2]; ++v) {
          double c = ex * ey * d.E[2](pa[2], pb[2], v);
          if (c == 0.0) continue;
          if (alternate && ((t + u + v) & 1)) c = -c;
          terms.push_back({t, u, v, c});
        }
      }
    }
    return terms;
  };

  out.eri = Tensor({nb, nb, nb, nb});
  std::vector<double> buf;
  const double pref0 = 2.0 * std::pow(std::numbers::pi, 2.5);
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    for (std::size_t bj = 0; bj <= bi; ++bj) {
      const auto& AB = blocks[bi];
      const auto& CD = blocks[bj];
      const auto& A = shells[AB.sa];
      const auto& B = shells[AB.sb];
      const auto& C = shells[CD.sa];
      const auto& D = shells[CD.sb];
      const std::size_t na = A.size(), nbb = B.size(), nc = C.size(), nd = D.size();
      buf.assign(na * nbb * nc * nd, 0.0);
      const int L = A.l + B.l + C.l + D.l;

      for (const auto& pab : AB.prims) {
        std::vector<std::vector<HermiteTerm>> eab(na * nbb);
        for (std::size_t ca = 0; ca < na; ++ca) {
          for (std::size_t cb = 0; cb < nbb; ++cb) {
            eab[ca * nbb + cb] =
                expand(pab, cartesian_powers(A.l, ca), cartesian_powers(B.l, cb), false);
          }
        }
        for (const auto& pcd : CD.prims) {
          const double p = pab.p, q = pcd.p;
          const double alpha = p * q / (p + q);
          const double pref = pref0 / (p * q * std::sqrt(p + q)) * pab.coef * pcd.coef;
          R.build(L, alpha, pab.P - pcd.P);
          for (std::size_t cc = 0; cc < nc; ++cc) {
            for (std::size_t cd = 0; cd < nd; ++cd) {
              auto ecd = expand(pcd, cartesian_powers(C.l, cc), cartesian_powers(D.l, cd), true);
              for (std::size_t ab = 0; ab < na * nbb; ++ab) {
                double acc = 0.0;
                for (const auto& x : eab[ab]) {
                  for (const auto& y : ecd) {
                    acc += x.c * y.c * R(x.t + y.t, x.u + y.u, x.v + y.v);
                  }
                }
                buf[(ab * nc + cc) * nd + cd] += pref * acc;
              }
            }
          }
        }
      }

      for (std::size_t ca = 0; ca < na; ++ca) {
        for (std::size_t cb = 0; cb < nbb; ++cb) {
          for (std::size_t cc = 0; cc < nc; ++cc) {
            for (std::size_t cd = 0; cd < nd; ++cd) {
              const double val = buf[((ca * nbb + cb) * nc + cc) * nd + cd] *
                                 component_scale(A.l, ca) * component_scale(B.l, cb) *
                                 component_scale(C.l, cc) * component_scale(D.l, cd);
              const std::size_t i = off[AB.sa] + ca, j = off[AB.sb] + cb;
              const std::size_t k = off[CD.sa] + cc, l = off[CD.sb] + cd;
              auto& e = out.eri;
              e(i, j, k, l) = e(j, i, k, l) = e(i, j, l, k) = e(j, i, l, k) = val;
              e(k, l, i, j) = e(l, k, i, j) = e(k, l, j, i) = e(l, k, j, i) = val;
            }
          }
        }
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(out.S, Eigen::EigenvaluesOnly);
  const double smin = es.eigenvalues().minCoeff();
  if (smin < kLinearDependenceThreshold) {
    throw LinearDependence("smallest overlap eigenvalue " + exact(smin) + " below " +
                           exact(kLinearDependenceThreshold));
  }
  return out;
}

}  // namespace ccinterp
