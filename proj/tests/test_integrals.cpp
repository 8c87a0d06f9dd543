#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "ccinterp/boys.hpp"
#include "ccinterp/errors.hpp"
#include "ccinterp/integrals.hpp"
#include "support.hpp"

using namespace ccinterp;
using namespace ccinterp::test;
using boost::math::quadrature::gauss_kronrod;

namespace {

double boys_quadrature(int m, double z) {
  const auto f = [m, z](double u) { return std::pow(u, 2 * m) * std::exp(-z * u * u); };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 20, 1e-15);
}

void expect_matrix_near(const Matrix& m, const std::vector<double>& ref, double tol) {
  ASSERT_EQ(static_cast<std::size_t>(m.size()), ref.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      EXPECT_NEAR(m(i, j), ref[static_cast<std::size_t>(i * m.cols() + j)], tol) << i << "," << j;
}

void check_fixture(const std::string& name, const Geometry& g, const BasisLibrary& lib) {
  const auto ref = load_fixture(name);
  const auto ints = compute_integrals(g, BasisSet::build(lib, g));
  ASSERT_EQ(ints.n_basis(), static_cast<std::size_t>(scalar(ref, "n_basis")));
  EXPECT_NEAR(ints.e_nuc, scalar(ref, "e_nuc"), 1e-12);
  expect_matrix_near(ints.S, ref.at("overlap"), 1e-8);
  expect_matrix_near(ints.T, ref.at("kinetic"), 1e-8);
  expect_matrix_near(ints.V, ref.at("nuclear"), 1e-8);
  expect_matrix_near(ints.h_core, ref.at("h_core"), 1e-8);
  const auto& eri = ref.at("eri");
  ASSERT_EQ(ints.eri.size(), eri.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < eri.size(); ++k) worst = std::max(worst, std::abs(ints.eri.flat()[k] - eri[k]));
  EXPECT_LE(worst, 1e-8);
}

}  // namespace

TEST(Boys, MatchesQuadrature) {
  for (int m = 0; m <= kMaxBoysOrder; ++m) {
    for (double z : {0.0, 1e-10, 1e-3, 0.1, 0.5, 1.0, 2.5, 7.0, 12.0, 19.9, 24.99, 25.01, 30.0, 45.0,
                     80.0, 150.0, 400.0}) {
      EXPECT_NEAR(boys(m, z), boys_quadrature(m, z), 1e-12) << "m=" << m << " z=" << z;
    }
  }
}

TEST(Boys, ZeroArgumentClosedForm) {
  for (int m = 0; m <= kMaxBoysOrder; ++m) EXPECT_DOUBLE_EQ(boys(m, 0.0), 1.0 / (2 * m + 1));
}

TEST(Boys, AllOrdersAgreeWithSingleOrder) {
  std::vector<double> out(kMaxBoysOrder + 1);
  for (double z : {0.0, 0.3, 17.0, 33.0}) {
    boys_all(kMaxBoysOrder, z, out);
    for (int m = 0; m <= kMaxBoysOrder; ++m) EXPECT_NEAR(out[static_cast<std::size_t>(m)], boys(m, z), 1e-15);
  }
}

TEST(GaussianProduct, CenterAndPrefactor) {
  const auto gp = gaussian_product(0.5, Vec3(0, 0, 0), 1.5, Vec3(0, 0, 2));
  EXPECT_DOUBLE_EQ(gp.p, 2.0);
  EXPECT_NEAR(gp.center.z(), 1.5, 1e-15);
  EXPECT_NEAR(gp.prefactor, std::exp(-0.75 / 2.0 * 4.0), 1e-15);
}

// 1/r = 2/sqrt(pi) int_0^inf exp(-t^2 r^2) dt turns the Coulomb integral into
// a 1-D quadrature over Gaussian overlaps, independent of the Boys function.
TEST(CoulombS, MatchesQuadrature) {
  const Vec3 A(0.1, -0.2, 0.3), B(0.7, 0.4, -0.5), C(-0.6, 0.9, 1.1);
  for (auto [a, b] : {std::pair{0.3, 1.2}, std::pair{2.0, 0.05}, std::pair{5.0, 7.0}}) {
    const double p = a + b;
    const Vec3 P = (a * A + b * B) / p;
    const double K = std::exp(-a * b / p * (A - B).squaredNorm());
    const double rpc2 = (P - C).squaredNorm();
    const auto f = [&](double t) {
      const double q = p + t * t;
      return std::pow(std::numbers::pi / q, 1.5) * std::exp(-p * t * t / q * rpc2);
    };
    const double oracle = K * 2.0 / std::sqrt(std::numbers::pi) *
                          gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                                               20, 1e-14);
    EXPECT_NEAR(coulomb_s_integral(a, A, b, B, C), oracle, 1e-12 * std::abs(oracle));
  }
}

TEST(Integrals, H2Sto3gMatchesReference) { check_fixture("h2_sto3g", h2(), sto3g()); }
TEST(Integrals, H2631gMatchesReference) { check_fixture("h2_631g", h2(), b631g()); }
TEST(Integrals, WaterSto3gMatchesReference) { check_fixture("h2o_sto3g", h2o(), sto3g()); }

TEST(Integrals, SymmetriesAndUnitDiagonal) {
  const auto g = h2o();
  const auto ints = compute_integrals(g, BasisSet::build(sto3g(), g));
  const auto n = ints.n_basis();
  EXPECT_LE((ints.S - ints.S.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((ints.h_core - ints.h_core.transpose()).cwiseAbs().maxCoeff(), 1e-13);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ints.S(i, i), 1.0, 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(ints.S);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  double worst = 0.0;
  const auto& e = ints.eri;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const double v = e(i, j, k, l);
          for (double w : {e(j, i, k, l), e(i, j, l, k), e(j, i, l, k), e(k, l, i, j), e(l, k, i, j),
                           e(k, l, j, i), e(l, k, j, i)}) {
            worst = std::max(worst, std::abs(v - w));
          }
        }
  EXPECT_LE(worst, 1e-13);
}

TEST(Integrals, TranslationInvariance) {
  const auto g = h2o();
  const auto lib = sto3g();
  const auto a = compute_integrals(g, BasisSet::build(lib, g));
  const auto moved = g.translated(Vec3(0.3, -1.1, 2.0));
  const auto b = compute_integrals(moved, BasisSet::build(lib, moved));
  EXPECT_LE((a.S - b.S).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((a.h_core - b.h_core).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(a.e_nuc, b.e_nuc, 1e-12);
}

TEST(Integrals, DShellSelfOverlapIsOne) {
  // Single d shell: every Cartesian component normalized.
  Shell s;
  s.l = 2;
  s.primitives = normalize_contraction(2, {{0.8, 0.6}, {0.25, 0.5}});
  const Geometry g({{1, Vec3::Zero()}});
  const BasisSet bs({s}, 1);
  const auto S = compute_overlap(g, bs);
  ASSERT_EQ(S.rows(), 6);
  for (Eigen::Index i = 0; i < 6; ++i) EXPECT_NEAR(S(i, i), 1.0, 1e-12);
  // <xx|yy> = 1/3 for normalized Cartesian d functions on one center.
  EXPECT_NEAR(S(0, 3), 1.0 / 3.0, 1e-12);
}

TEST(Geometry, CoincidentNucleiRejected) {
  EXPECT_THROW(Geometry({{1, Vec3(0, 0, 0)}, {1, Vec3(0, 0, 1e-9)}}), DegenerateGeometry);
}

TEST(Geometry, ParsesAngstromAndBohr) {
  const auto g = parse_geometry("angstrom\nH 0 0 0\nH 0 0 0.74\n");
  EXPECT_NEAR(g[1].position.z(), 0.74 * kBohrPerAngstrom, 1e-14);
  EXPECT_EQ(g.nuclear_charge(), 2);
  EXPECT_THROW(parse_geometry("H 0 0 0\n"), ParseError);
  EXPECT_THROW(parse_geometry("bohr\nXx 0 0 0\n"), ParseError);
}

TEST(Trajectory, ZeroAmplitudeKeepsReference) {
  const auto t = parse_trajectory("units bohr\ngeometry\nH 0 0 0\nH 0 0 1.4\nend\nmode 0 1  1 0 0  0 0 0\n");
  for (double mu : {0.0, 0.37, 1.0}) {
    const auto g = t.evaluate(mu);
    EXPECT_EQ(g[0].position, Vec3(0, 0, 0));
    EXPECT_EQ(g[1].position, Vec3(0, 0, 1.4));
  }
}

TEST(Trajectory, ClosedFormDisplacement) {
  const auto t = parse_trajectory("units bohr\ngeometry\nH 0 0 0\nH 0 0 1.4\nend\nmode 0.1 1  1 0 0  0 0 0\n");
  EXPECT_NEAR(t.evaluate(0.25)[0].position.x(), 0.1, 1e-15);
  const auto a = t.evaluate(0.0), b = t.evaluate(1.0);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR((a[k].position - b[k].position).norm(), 0.0, 1e-15);
}

TEST(Trajectory, ErrorsAndChecksum) {
  const std::string text = "units bohr\ngeometry\nH 0 0 0\nH 0 0 1.4\nend\nmode 1.4 0.25  0 0 1  0 0 0\n";
  const auto t = parse_trajectory(text);
  EXPECT_THROW(t.evaluate(1.0), DegenerateGeometry);
  EXPECT_THROW(t.evaluate(1.5), InvalidArgument);
  EXPECT_EQ(t.checksum(), parse_trajectory(text).checksum());
  EXPECT_NE(t.checksum(), parse_trajectory(text + "mode 0.1 1  1 0 0  0 0 0\n").checksum());
  EXPECT_THROW(parse_trajectory("units bohr\nmode 1 1 0 0 0\n"), ParseError);
  EXPECT_THROW(parse_trajectory("units bohr\ngeometry\nH 0 0 0\nH 0 0 1\nend\nmode 1 1 0 0 0\n"), Error);
}

TEST(Trajectory, ShippedFixturesLoad) {
  for (const char* name : {"h2_stretch.traj", "h4_breathing.traj", "h2o_stretch_crossing.traj"}) {
    const auto t = load_trajectory(data_path(std::string("trajectories/") + name));
    EXPECT_NO_THROW(t.evaluate(0.0)) << name;
    EXPECT_NO_THROW(t.evaluate(1.0)) << name;
  }
}

TEST(Basis, LibraryParsing) {
  const auto lib = sto3g();
  EXPECT_TRUE(lib.elements.count(1));
  EXPECT_TRUE(lib.elements.count(8));
  const auto g = h2o();
  EXPECT_EQ(BasisSet::build(lib, g).n_functions(), 7u);
  EXPECT_EQ(BasisSet::build(b631g(), g).n_functions(), 13u);
  EXPECT_THROW(parse_basis_library("H 0\nQ 1 1.0\n 1.0 1.0\n****\n", "bad"), ParseError);
  const Geometry ar({{18, Vec3::Zero()}});
  EXPECT_THROW(BasisSet::build(lib, ar), ParseError);
  const auto sp = parse_basis_library("****\nC 0\nSP 1 1.00\n 2.0D+00 1.0 1.0\n****\n", "sp");
  ASSERT_EQ(sp.elements.at(6).size(), 2u);
  EXPECT_EQ(sp.elements.at(6)[1].l, 1);
  EXPECT_DOUBLE_EQ(sp.elements.at(6)[0].primitives[0].exponent, 2.0);
}
