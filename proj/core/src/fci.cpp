#include <bit>
#include <cmath>
#include <string>
#include <unordered_map>

#include "ccinterp/ccsd.hpp"
#include "ccinterp/errors.hpp"

namespace ccinterp {

namespace {

using Det = std::uint32_t;

// Applies a_p to `det`, returning false if p is empty. Sign follows the
// number of occupied orbitals below p.
bool annihilate(Det& det, std::size_t p, int& sign) {
  const Det bit = Det{1} << p;
  if (!(det & bit)) return false;
  if (std::popcount(det & (bit - 1)) % 2) sign = -sign;
  det &= ~bit;
  return true;
}

bool create(Det& det, std::size_t p, int& sign) {
  const Det bit = Det{1} << p;
  if (det & bit) return false;
  if (std::popcount(det & (bit - 1)) % 2) sign = -sign;
  det |= bit;
  return true;
}

std::vector<std::size_t> occupied(Det det) {
  std::vector<std::size_t> out;
  while (det) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(det)));
    det &= det - 1;
  }
  return out;
}

// Even spin orbitals are alpha, odd are beta.
constexpr Det alpha_mask(std::size_t n_so) {
  Det m = 0;
  for (std::size_t p = 0; p < n_so; p += 2) m |= Det{1} << p;
  return m;
}

double matrix_element(Det bra, Det ket, const MoIntegrals& mo) {
  const Det diff = bra ^ ket;
  const int n_diff = std::popcount(diff);
  if (n_diff == 0) {
    const auto occ = occupied(ket);
    double e = 0.0;
    for (std::size_t x = 0; x < occ.size(); ++x) {
      e += mo.h(occ[x], occ[x]);
      for (std::size_t y = x + 1; y < occ.size(); ++y) e += mo.eri_as(occ[x], occ[y], occ[x], occ[y]);
    }
    return e;
  }
  if (n_diff == 2) {
    const auto p = static_cast<std::size_t>(std::countr_zero(ket & diff));  // removed
    const auto q = static_cast<std::size_t>(std::countr_zero(bra & diff));  // added
    Det d = ket;
    int sign = 1;
    annihilate(d, p, sign);
    create(d, q, sign);
    double v = mo.h(q, p);
    for (std::size_t j : occupied(ket & bra)) v += mo.eri_as(q, j, p, j);
    return sign * v;
  }
  if (n_diff == 4) {
    const auto rem = occupied(ket & diff);
    const auto add = occupied(bra & diff);
    Det d = ket;
    int sign = 1;
    annihilate(d, rem[0], sign);
    annihilate(d, rem[1], sign);
    create(d, add[1], sign);
    create(d, add[0], sign);
    // bra = sign * a+_r a+_s a_q a_p ket with (p,q) = rem, (r,s) = add.
    return sign * mo.eri_as(add[0], add[1], rem[0], rem[1]);
  }
  return 0.0;
}

}  // namespace

FciResult fci_energy(const MoIntegrals& mo, int n_electrons) {
  const std::size_t n_so = mo.n_so();
  if (n_so > kMaxFciSpinOrbitals) {
    throw TooLarge("FCI limited to " + std::to_string(kMaxFciSpinOrbitals) + " spin orbitals, got " +
                   std::to_string(n_so));
  }
  if (n_electrons < 0 || n_electrons % 2 != 0 || static_cast<std::size_t>(n_electrons) > n_so) {
    throw InvalidArgument("FCI needs an even electron count within " + std::to_string(n_so) +
                          " spin orbitals");
  }
  const int half = n_electrons / 2;
  const Det amask = alpha_mask(n_so);
  FciResult out;
  for (Det det = 0; det < (Det{1} << n_so); ++det) {
    if (std::popcount(det & amask) == half && std::popcount(det & ~amask) == half) {
      out.determinants.push_back(det);
    }
  }
  const auto n = static_cast<Eigen::Index>(out.determinants.size());
  Matrix H(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y <= x; ++y) {
      H(x, y) = H(y, x) = matrix_element(out.determinants[x], out.determinants[y], mo);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) throw InvalidArgument("FCI eigensolve failed");
  out.energy = es.eigenvalues()(0) + mo.e_nuc;
  out.vector = es.eigenvectors().col(0);
  return out;
}

AmplitudeSet fci_cluster_amplitudes(const FciResult& fci, const MoIntegrals& mo) {
  const std::size_t no = mo.n_occ_so, nv = mo.n_virt_so;
  std::unordered_map<Det, double> coef;
  for (std::size_t k = 0; k < fci.determinants.size(); ++k) {
    coef[fci.determinants[k]] = fci.vector(static_cast<Eigen::Index>(k));
  }
  const Det ref = (Det{1} << no) - 1;
  const auto lookup = [&](Det d) {
    const auto it = coef.find(d);
    return it == coef.end() ? 0.0 : it->second;
  };
  const double c0 = lookup(ref);
  if (std::abs(c0) < 1e-12) throw ZeroReference("reference determinant has no weight");

  auto t = AmplitudeSet::zeros(nv, no);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t i = 0; i < no; ++i) {
      Det d = ref;
      int sign = 1;
      annihilate(d, i, sign);
      create(d, no + a, sign);
      t.t1(a, i) = sign * lookup(d) / c0;
    }
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          if (a == b || i == j) continue;
          Det d = ref;
          int sign = 1;
          annihilate(d, i, sign);
          annihilate(d, j, sign);
          create(d, no + b, sign);
          create(d, no + a, sign);
          // a+_a a+_b a_j a_i |ref>
          const double c2 = sign * lookup(d) / c0;
          t.t2(a, b, i, j) = c2 - (t.t1(a, i) * t.t1(b, j) - t.t1(a, j) * t.t1(b, i));
        }
  return t;
}

}  // namespace ccinterp
