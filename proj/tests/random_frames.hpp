#pragma once

#include <random>

#include "ccinterp/ccsd.hpp"
#include "ccinterp/exc_tensor.hpp"
#include "ccinterp/scf.hpp"

namespace ccinterp::test {

/// Random SPD overlap and S-orthonormal coefficients with n_occ occupied
/// columns, spin-blocked.
struct RandomFrame {
  Matrix S;  // spatial
  Matrix C;  // spatial
  std::size_t n_occ = 0;
  TransformPair tp;
};

inline Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = nd(rng);
  return m;
}

inline Matrix random_orthogonal(Eigen::Index n, std::mt19937& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ();
}

inline RandomFrame make_frame(const Matrix& S, const Matrix& C, std::size_t n_occ) {
  return {S, C, n_occ, TransformPair::from_spatial(S, C, n_occ)};
}

inline RandomFrame random_frame(std::size_t n_basis, std::size_t n_occ, std::mt19937& rng) {
  const auto n = static_cast<Eigen::Index>(n_basis);
  const Matrix A = random_matrix(n, n, rng, 0.15);
  const Matrix S = Matrix::Identity(n, n) + A * A.transpose();
  const Matrix C = lowdin(S).inv_half * random_orthogonal(n, rng);
  return make_frame(S, C, n_occ);
}

inline AmplitudeSet random_amplitudes(std::size_t n_virt_so, std::size_t n_occ_so, std::mt19937& rng) {
  std::normal_distribution<double> nd(0.0, 0.1);
  auto t = AmplitudeSet::zeros(n_virt_so, n_occ_so);
  for (double& x : t.t1.flat()) x = nd(rng);
  for (double& x : t.t2.flat()) x = nd(rng);
  t.antisymmetrize();
  return t;
}

inline Tensor random_tensor(const std::vector<std::size_t>& dims, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Tensor t(dims);
  for (double& x : t.flat()) x = nd(rng);
  return t;
}

/// Permutation matrix P with P(perm[k], k) = 1.
inline Matrix permutation_matrix(const std::vector<int>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Matrix P = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) P(perm[static_cast<std::size_t>(k)], k) = 1.0;
  return P;
}

inline std::vector<int> random_permutation(std::size_t n, std::mt19937& rng) {
  std::vector<int> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = static_cast<int>(k);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Relative Frobenius distance ||a - b|| / max(||b||, tiny).
inline double rel_diff(const Tensor& a, const Tensor& b) {
  Tensor d = a;
  d -= b;
  return d.norm() / std::max(b.norm(), 1e-300);
}

}  // namespace ccinterp::test
