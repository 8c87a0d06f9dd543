#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "ccinterp/errors.hpp"
#include "ccinterp/exc_tensor.hpp"
#include "random_frames.hpp"

using namespace ccinterp;
using namespace ccinterp::test;

namespace {

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

Eigen::VectorXd vec(const Tensor& t) {
  return Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
}

Tensor naive_mode_product(const Tensor& T, const Matrix& M, std::size_t mode) {
  auto dims = T.dims();
  dims[mode] = static_cast<std::size_t>(M.rows());
  Tensor out(dims);
  const auto d = T.dims();
  for (std::size_t i = 0; i < dims[0]; ++i)
    for (std::size_t j = 0; j < dims[1]; ++j)
      for (std::size_t k = 0; k < dims[2]; ++k)
        for (std::size_t l = 0; l < dims[3]; ++l) {
          std::array<std::size_t, 4> idx{i, j, k, l};
          const std::size_t r = idx[mode];
          double s = 0.0;
          for (std::size_t c = 0; c < d[mode]; ++c) {
            idx[mode] = c;
            s += M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * T(idx[0], idx[1], idx[2], idx[3]);
          }
          out(i, j, k, l) = s;
        }
  return out;
}

}  // namespace

TEST(NModeProduct, IdentityLeavesTensorUnchanged) {
  std::mt19937 rng(1);
  const auto T = random_tensor({3, 2, 3, 2}, rng);
  for (std::size_t m = 0; m < 4; ++m) {
    const auto out = n_mode_product(T, Matrix::Identity(static_cast<Eigen::Index>(T.dim(m)), static_cast<Eigen::Index>(T.dim(m))), m);
    EXPECT_EQ(rel_diff(out, T), 0.0);
  }
}

TEST(NModeProduct, SwapMatrixSwapsRows) {
  Tensor T({2, 2});
  T(0, 0) = 1;
  T(0, 1) = 2;
  T(1, 0) = 3;
  T(1, 1) = 4;
  Matrix M(2, 2);
  M << 0, 1, 1, 0;
  const auto out = n_mode_product(T, M, 0);
  EXPECT_EQ(out(0, 0), 3);
  EXPECT_EQ(out(0, 1), 4);
  EXPECT_EQ(out(1, 0), 1);
  EXPECT_EQ(out(1, 1), 2);
}

TEST(NModeProduct, MatchesNaiveLoop) {
  std::mt19937 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const auto T = random_tensor({3, 2, 3, 2}, rng);
    for (std::size_t m = 0; m < 4; ++m) {
      const Matrix M = random_matrix(4, static_cast<Eigen::Index>(T.dim(m)), rng);
      const auto fast = n_mode_product(T, M, m);
      const auto slow = naive_mode_product(T, M, m);
      ASSERT_TRUE(fast.same_shape(slow));
      double worst = 0.0;
      for (std::size_t k = 0; k < fast.size(); ++k) worst = std::max(worst, std::abs(fast.flat()[k] - slow.flat()[k]));
      EXPECT_LE(worst, 1e-13);
    }
  }
}

TEST(NModeProduct, ShapeMismatch) {
  const Tensor T({3, 2});
  EXPECT_THROW(n_mode_product(T, Matrix::Identity(2, 2), 0), ShapeMismatch);
  EXPECT_THROW(n_mode_product(T, Matrix::Identity(2, 2), 2), ShapeMismatch);
}

TEST(MoToAo, IdentityFrame) {
  std::mt19937 rng(3);
  const auto f = make_frame(Matrix::Identity(4, 4), Matrix::Identity(4, 4), 1);
  const auto t = random_amplitudes(6, 2, rng);
  const auto ao = mo_to_ao(ExcTensor::mo(t.t2), f.tp);
  EXPECT_EQ(ao.basis, BasisTag::AO);
  // Occupied spin orbitals are the first two AO spin functions here.
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(ao.data(a + 2, b + 2, i, j), t.t2(a, b, i, j));
}

TEST(MoToAo, RankOneFactorization) {
  std::mt19937 rng(4);
  const auto f = random_frame(5, 2, rng);
  const Eigen::VectorXd t = random_matrix(6, 1, rng), u = random_matrix(4, 1, rng);
  Tensor T({6, 4});
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t i = 0; i < 4; ++i) T(a, i) = t(static_cast<Eigen::Index>(a)) * u(static_cast<Eigen::Index>(i));
  const auto ao = mo_to_ao(ExcTensor::mo(T), f.tp);
  const Eigen::VectorXd x = f.tp.C_virt * t, y = f.tp.C_occ * u;
  double worst = 0.0;
  for (Eigen::Index p = 0; p < x.size(); ++p)
    for (Eigen::Index q = 0; q < y.size(); ++q)
      worst = std::max(worst, std::abs(ao.data(static_cast<std::size_t>(p), static_cast<std::size_t>(q)) - x(p) * y(q)));
  EXPECT_LE(worst, 1e-14);
}

TEST(MoToAo, KroneckerOracleAndNormBound) {
  std::mt19937 rng(5);
  const auto f = random_frame(3, 1, rng);
  const auto t = random_amplitudes(4, 2, rng);
  const auto ao = mo_to_ao(ExcTensor::mo(t.t2), f.tp);
  const Matrix& Cv = f.tp.C_virt;
  const Matrix& Co = f.tp.C_occ;
  const Eigen::VectorXd oracle = kron(Cv, kron(Cv, kron(Co, Co))) * vec(t.t2);
  EXPECT_LE((vec(ao.data) - oracle).norm(), 1e-13 * oracle.norm());

  const Eigen::SelfAdjointEigenSolver<Matrix> es(f.tp.S);
  const double inv_half_norm = 1.0 / std::sqrt(es.eigenvalues().minCoeff());
  EXPECT_LE(ao.data.norm(), std::pow(inv_half_norm, 4) * t.t2.norm() * (1 + 1e-12));
}

TEST(AoToMo, KroneckerOracleAndOrthogonalCase) {
  std::mt19937 rng(6);
  const auto f = random_frame(3, 1, rng);
  const auto T = random_tensor({6, 6, 6, 6}, rng);
  ExcTensor ao{2, BasisTag::AO, T};
  const auto mo = ao_to_mo(ao, f.tp);
  const Matrix Lv = f.tp.C_virt.transpose() * f.tp.S, Lo = f.tp.C_occ.transpose() * f.tp.S;
  const Eigen::VectorXd oracle = kron(Lv, kron(Lv, kron(Lo, Lo))) * vec(T);
  EXPECT_LE((vec(mo.data) - oracle).norm(), 1e-13 * oracle.norm());

  // S = I with orthogonal C: the left inverse is the transpose transform.
  const Matrix Q = random_orthogonal(3, rng);
  const auto g = make_frame(Matrix::Identity(3, 3), Q, 1);
  const auto via_inverse = ao_to_mo(ao, g.tp);
  const auto via_transpose = apply_blocks(ExcTensor{2, BasisTag::AO, T}, g.tp.C_virt.transpose(),
                                          g.tp.C_occ.transpose(), BasisTag::MO);
  EXPECT_LE(rel_diff(via_inverse.data, via_transpose.data), 1e-14);
}

TEST(AoToMo, LeftInverseOnRandomFrames) {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t no = 1 + rep % 5, nb = no + 1 + rep % 7;
    const auto f = random_frame(nb, no, rng);
    const auto t = random_amplitudes(2 * (nb - no), 2 * no, rng);
    for (const Tensor* T : {&t.t1, &t.t2}) {
      const auto back = ao_to_mo(mo_to_ao(ExcTensor::mo(*T), f.tp), f.tp);
      EXPECT_LE(rel_diff(back.data, *T), 1e-12);
    }
  }
}

TEST(AoToMo, WrongTagRejected) {
  std::mt19937 rng(8);
  const auto f = random_frame(3, 1, rng);
  const auto t = random_amplitudes(4, 2, rng);
  EXPECT_THROW(ao_to_mo(ExcTensor::mo(t.t1), f.tp), ShapeMismatch);
  EXPECT_THROW(mo_to_ao(ExcTensor{1, BasisTag::AO, t.t1}, f.tp), ShapeMismatch);
  EXPECT_THROW(ExcTensor::mo(Tensor({2, 2, 2})), ShapeMismatch);
}

TEST(CrossTransform, SameGeometryIsIdentity) {
  std::mt19937 rng(9);
  const auto f = random_frame(6, 2, rng);
  const auto t = random_amplitudes(8, 4, rng);
  const auto factors = cross_factors(f.tp, f.tp);
  EXPECT_LE((factors.L_virt - Matrix::Identity(8, 8)).norm(), 1e-12);
  EXPECT_LE((factors.L_occ - Matrix::Identity(4, 4)).norm(), 1e-12);
  const auto out = cross_transform(t, f.tp, f.tp);
  EXPECT_LE(rel_diff(out.t2, t.t2), 1e-12);
}

TEST(CrossTransform, EqualsAoRoundTrip) {
  std::mt19937 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    const auto src = random_frame(7, 3, rng), dst = random_frame(7, 3, rng);
    const auto t = random_amplitudes(8, 6, rng);
    const auto direct = cross_transform(ExcTensor::mo(t.t2), dst.tp, src.tp);
    const auto via_ao = ao_to_mo(mo_to_ao(ExcTensor::mo(t.t2), src.tp), dst.tp);
    EXPECT_LE(rel_diff(direct.data, via_ao.data), 1e-12);
  }
}

TEST(CrossTransform, ShapeMismatch) {
  std::mt19937 rng(11);
  const auto a = random_frame(5, 2, rng), b = random_frame(5, 1, rng);
  EXPECT_THROW(cross_factors(a.tp, b.tp), ShapeMismatch);
}

// Relabeling C' = C blockdiag(s_o P_o, s_v P_v) with the matching amplitude
// relabeling leaves the AO tensor unchanged; s_o = 1 is the single-sign case.
TEST(CrossTransform, GaugeInvariance) {
  std::mt19937 rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t no = 1 + rep % 5, nv = 1 + rep % 7, nb = no + nv;
    const auto f = random_frame(nb, no, rng);
    const auto t = random_amplitudes(2 * nv, 2 * no, rng);
    const double so = rep % 2 ? -1.0 : 1.0, sv = rep % 3 ? 1.0 : -1.0;
    const Matrix Po = permutation_matrix(random_permutation(no, rng));
    const Matrix Pv = permutation_matrix(random_permutation(nv, rng));
    Matrix G = Matrix::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
    G.topLeftCorner(static_cast<Eigen::Index>(no), static_cast<Eigen::Index>(no)) = so * Po;
    G.bottomRightCorner(static_cast<Eigen::Index>(nv), static_cast<Eigen::Index>(nv)) = sv * Pv;
    const auto g = make_frame(f.S, f.C * G, no);
    const Matrix Po_so = spin_block(Po), Pv_so = spin_block(Pv);
    for (const Tensor* T : {&t.t1, &t.t2}) {
      const int k = static_cast<int>(T->rank() / 2);
      auto relabeled = apply_blocks(ExcTensor::mo(*T), Pv_so.transpose(), Po_so.transpose(), BasisTag::MO);
      relabeled.data *= std::pow(so * sv, k);
      const auto a = mo_to_ao(ExcTensor::mo(*T), f.tp);
      const auto b = mo_to_ao(relabeled, g.tp);
      EXPECT_LE(rel_diff(b.data, a.data), 1e-12);
    }
  }
}

TEST(CrossTransform, Linearity) {
  std::mt19937 rng(13);
  const auto src = random_frame(6, 2, rng), dst = random_frame(6, 2, rng);
  const auto t = random_amplitudes(8, 4, rng), u = random_amplitudes(8, 4, rng);
  auto sum = t;
  sum *= 2.0;
  sum += u;
  auto lhs = cross_transform(sum, dst.tp, src.tp);
  auto rhs = cross_transform(t, dst.tp, src.tp);
  rhs *= 2.0;
  rhs += cross_transform(u, dst.tp, src.tp);
  EXPECT_LE(rel_diff(lhs.t2, rhs.t2), 1e-14);
  EXPECT_LE(rel_diff(lhs.t1, rhs.t1), 1e-14);
}

TEST(TransformPair, Orthonormality) {
  std::mt19937 rng(14);
  const auto f = random_frame(8, 3, rng);
  EXPECT_LE(f.tp.orthonormality_error(), 1e-10);
  EXPECT_EQ(f.tp.C_occ.cols(), 6);
  EXPECT_EQ(f.tp.C_virt.cols(), 10);
}

namespace {

double time_cross_transform(std::size_t nv, std::size_t no, std::mt19937& rng) {
  const auto t = random_amplitudes(nv, no, rng);
  const CrossFactors f{random_matrix(static_cast<Eigen::Index>(nv), static_cast<Eigen::Index>(nv), rng),
                       random_matrix(static_cast<Eigen::Index>(no), static_cast<Eigen::Index>(no), rng)};
  double best = 1e300;
  for (int rep = 0; rep < 7; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    const auto out = cross_transform(t, f);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    best = std::min(best, dt.count());
    EXPECT_EQ(out.t2.size(), t.t2.size());
  }
  return best;
}

}  // namespace

// Rank-2 cost is dominated by n_virt^3 n_occ^2; doubling n_virt at fixed
// n_occ should cost about 8x (accepted band 4x..16x).
TEST(CrossTransform, ComplexityScalesWithVirtualCube) {
  std::mt19937 rng(15);
  (void)time_cross_transform(32, 8, rng);
  const double small = time_cross_transform(48, 8, rng);
  const double large = time_cross_transform(96, 8, rng);
  const double ratio = large / small;
  RecordProperty("ratio", std::to_string(ratio));
  EXPECT_GE(ratio, 4.0);
  EXPECT_LE(ratio, 16.0);
}
