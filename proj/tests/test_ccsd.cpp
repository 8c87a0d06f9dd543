#include <gtest/gtest.h>

#include <random>

#include "ccinterp/ccsd.hpp"
#include "ccinterp/errors.hpp"
#include "support.hpp"

using namespace ccinterp;
using namespace ccinterp::test;

namespace {

struct Prepared {
  System sys;
  MoIntegrals mo;
};

Prepared prepare(const Geometry& g, const BasisLibrary& lib) {
  Prepared p;
  p.sys = run_scf(g, lib);
  p.mo = mo_transform(p.sys.ints, p.sys.scf);
  return p;
}

CcConfig tight() {
  CcConfig c;
  c.tol_r = 1e-12;
  c.tol_e = 1e-13;
  c.max_iter = 400;
  return c;
}

AmplitudeSet random_amplitudes(const MoIntegrals& mo, std::mt19937& rng, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  auto t = AmplitudeSet::zeros(mo.n_virt_so, mo.n_occ_so);
  for (double& x : t.t1.flat()) x = nd(rng);
  for (double& x : t.t2.flat()) x = nd(rng);
  t.antisymmetrize();
  return t;
}

Eigen::VectorXd residual_at(const AmplitudeSet& base, const Eigen::VectorXd& dir, double s,
                            const MoIntegrals& mo) {
  AmplitudeSet t = base;
  t.assign(base.to_vector() + s * dir);
  return cc_residual(t, mo).to_vector();
}

}  // namespace

TEST(Mp2, ZeroIntegralsGiveZeroGuess) {
  auto p = prepare(h2(), sto3g());
  p.mo.eri_as.fill(0.0);
  EXPECT_EQ(mp2_guess(p.mo).norm(), 0.0);
}

TEST(Mp2, MatchesReferenceEnergies) {
  for (auto [name, g, lib] : {std::tuple{"h2_sto3g", h2(), sto3g()}, std::tuple{"h2_631g", h2(), b631g()},
                              std::tuple{"h2o_sto3g", h2o(), sto3g()}, std::tuple{"lih_sto3g", lih(), sto3g()}}) {
    const auto p = prepare(g, lib);
    const auto t = mp2_guess(p.mo);
    EXPECT_LE(t.antisymmetry_violation(), 1e-14) << name;
    EXPECT_EQ(t.t1.norm(), 0.0);
    EXPECT_NEAR(cc_energy(t, p.mo), scalar(load_fixture(name), "e_mp2"), 1e-8) << name;
  }
}

TEST(Mp2, DegenerateDenominator) {
  auto p = prepare(h2(), sto3g());
  p.mo.f(2, 2) = p.mo.f(0, 0);
  p.mo.f(3, 3) = p.mo.f(1, 1);
  EXPECT_THROW(mp2_guess(p.mo), DegenerateDenominator);
}

TEST(CcEnergy, ZeroAmplitudesAndVanishingFockTerm) {
  const auto p = prepare(h2o(), sto3g());
  EXPECT_EQ(cc_energy(AmplitudeSet::zeros(p.mo.n_virt_so, p.mo.n_occ_so), p.mo), 0.0);
  std::mt19937 rng(5);
  auto t = AmplitudeSet::zeros(p.mo.n_virt_so, p.mo.n_occ_so);
  std::normal_distribution<double> nd(0.0, 0.1);
  for (double& x : t.t1.flat()) x = nd(rng);
  // Only the singles-singles term survives when t2 = 0 and f_ia = 0.
  double expect = 0.0;
  for (std::size_t i = 0; i < p.mo.n_occ_so; ++i)
    for (std::size_t j = 0; j < p.mo.n_occ_so; ++j)
      for (std::size_t a = 0; a < p.mo.n_virt_so; ++a)
        for (std::size_t b = 0; b < p.mo.n_virt_so; ++b)
          expect += 0.5 * p.mo.eri_as(i, j, p.mo.n_occ_so + a, p.mo.n_occ_so + b) * t.t1(a, i) * t.t1(b, j);
  EXPECT_NEAR(cc_energy(t, p.mo), expect, 1e-10);
}

TEST(Fci, MatchesReferenceEnergies) {
  for (auto [name, g, lib] :
       {std::tuple{"h2_sto3g", h2(), sto3g()}, std::tuple{"h2_631g", h2(), b631g()},
        std::tuple{"he_sto3g", he(), sto3g()}, std::tuple{"lih_sto3g", lih(), sto3g()},
        std::tuple{"h2o_sto3g", h2o(), sto3g()}}) {
    const auto p = prepare(g, lib);
    const auto fci = fci_energy(p.mo, g.nuclear_charge());
    EXPECT_NEAR(fci.energy, scalar(load_fixture(name), "e_fci"), 1e-8) << name;
    // He/STO-3G has a single basis function, so FCI equals HF there.
    EXPECT_LE(fci.energy, p.sys.scf.e_hf + 1e-12) << name;
    EXPECT_NEAR(fci.vector.norm(), 1.0, 1e-12);
  }
}

TEST(Fci, NonInteractingToy) {
  auto p = prepare(lih(), sto3g());
  p.mo.eri_as.fill(0.0);
  p.mo.h = p.mo.f;
  p.mo.e_nuc = 0.0;
  double expect = 0.0;
  for (std::size_t i = 0; i < p.mo.n_occ_so; ++i) expect += p.mo.f(i, i);
  EXPECT_NEAR(fci_energy(p.mo, 4).energy, expect, 1e-12);
}

TEST(Fci, TooLarge) {
  const Geometry g({{8, Vec3::Zero()}, {1, Vec3(0, 0, 1.8)}, {1, Vec3(0, 1.8, 0)}});
  const auto p = prepare(g, b631g());
  EXPECT_THROW(fci_energy(p.mo, 10), TooLarge);
}

TEST(Ccsd, TwoElectronSystemsAreExact) {
  for (auto [g, lib] : {std::pair{h2(), sto3g()}, std::pair{h2(), b631g()}, std::pair{h2(2.5), b631g()}}) {
    const auto p = prepare(g, lib);
    const auto cc = solve_ccsd(p.mo);
    const auto fci = fci_energy(p.mo, 2);
    EXPECT_NEAR(p.sys.scf.e_hf + cc.e_corr, fci.energy, 1e-9);
    EXPECT_LT(cc.final_residual_norm, CcConfig{}.tol_r);
  }
}

TEST(Ccsd, ResidualVanishesAtFciAmplitudes) {
  for (const auto& lib : {sto3g(), b631g()}) {
    const auto p = prepare(h2(), lib);
    const auto t = fci_cluster_amplitudes(fci_energy(p.mo, 2), p.mo);
    EXPECT_LT(cc_residual(t, p.mo).norm(), 1e-10);
  }
}

TEST(Ccsd, MatchesReferenceCorrelationEnergies) {
  for (auto [name, g] : {std::pair{"h2o_sto3g", h2o()}, std::pair{"lih_sto3g", lih()},
                         std::pair{"h2_sto3g", h2()}}) {
    const auto p = prepare(g, sto3g());
    EXPECT_NEAR(solve_ccsd(p.mo, tight()).e_corr, scalar(load_fixture(name), "e_ccsd"), 1e-8) << name;
  }
}

TEST(Ccsd, ConvergedGuessTakesNoIterations) {
  const auto p = prepare(h2o(), sto3g());
  const auto cc = solve_ccsd(p.mo, tight());
  const auto again = solve_ccsd(cc.amplitudes, p.mo, tight());
  EXPECT_LE(again.iterations, 1);
  EXPECT_NEAR(again.e_corr, cc.e_corr, 1e-12);
}

TEST(Ccsd, NonConvergence) {
  const auto p = prepare(h2o(), sto3g());
  CcConfig c;
  c.max_iter = 2;
  EXPECT_THROW(solve_ccsd(p.mo, c), CcNotConverged);
}

TEST(Ccsd, ResidualPreservesAntisymmetry) {
  const auto p = prepare(h2o(), sto3g());
  std::mt19937 rng(9);
  const auto q = cc_residual(random_amplitudes(p.mo, rng, 0.05), p.mo);
  EXPECT_LE(q.antisymmetry_violation(), 1e-14);
}

TEST(Ccsd, NonAntisymmetricGuessIsRepaired) {
  const auto p = prepare(h2o(), sto3g());
  auto guess = mp2_guess(p.mo);
  guess.t2(0, 1, 0, 1) += 1e-6;
  const auto cc = solve_ccsd(guess, p.mo, tight());
  EXPECT_LE(cc.amplitudes.antisymmetry_violation(), 1e-12);
  EXPECT_NEAR(cc.e_corr, solve_ccsd(p.mo, tight()).e_corr, 1e-11);
}

TEST(Ccsd, Deterministic) {
  const auto p = prepare(h2o(), sto3g());
  const auto a = solve_ccsd(p.mo), b = solve_ccsd(p.mo);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.e_corr, b.e_corr);
  EXPECT_TRUE(std::equal(a.amplitudes.t2.flat().begin(), a.amplitudes.t2.flat().end(),
                         b.amplitudes.t2.flat().begin()));
}

// Q(t + s d) is a quartic in s, so the five-point stencil at unit spacing is
// an exact derivative oracle.
TEST(Ccsd, DirectionalDerivativeMatchesFiniteDifferences) {
  const auto p = prepare(h2o(), sto3g());
  std::mt19937 rng(21);
  const auto t = random_amplitudes(p.mo, rng, 0.05);
  const Eigen::VectorXd d = random_amplitudes(p.mo, rng, 0.05).to_vector();
  const Eigen::VectorXd exact = (residual_at(t, d, -2, p.mo) - 8 * residual_at(t, d, -1, p.mo) +
                                 8 * residual_at(t, d, 1, p.mo) - residual_at(t, d, 2, p.mo)) / 12.0;
  const double h = 1e-5;
  const Eigen::VectorXd fd = (residual_at(t, d, h, p.mo) - residual_at(t, d, -h, p.mo)) / (2 * h);
  EXPECT_LE((fd - exact).norm(), 1e-6 * exact.norm());
}

TEST(Ccsd, JacobianNonsingularOnRandomSubspace) {
  for (const auto& g : {h2o(), lih()}) {
    const auto p = prepare(g, sto3g());
    const auto cc = solve_ccsd(p.mo, tight());
    std::mt19937 rng(4);
    const Eigen::Index n = static_cast<Eigen::Index>(cc.amplitudes.size());
    Matrix V(n, 20);
    for (int k = 0; k < 20; ++k) V.col(k) = random_amplitudes(p.mo, rng, 1.0).to_vector();
    Eigen::HouseholderQR<Matrix> qr(V);
    V = qr.householderQ() * Matrix::Identity(n, 20);
    Matrix JV(n, 20);
    const double h = 1e-5;
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd dir = V.col(k);
      JV.col(k) = (residual_at(cc.amplitudes, dir, h, p.mo) - residual_at(cc.amplitudes, dir, -h, p.mo)) / (2 * h);
    }
    Eigen::JacobiSVD<Matrix> svd(JV);
    EXPECT_GT(svd.singularValues().minCoeff(), 1e-6);
  }
}

TEST(Ccsd, NearbyGeometryGuessNeedsFewerIterations) {
  const auto spec = study_spec("h4_breathing.traj");
  const auto near_mo = [&](double mu) {
    const auto f = compute_frame(spec, mu);
    return mo_transform(f.ints, f.scf);
  };
  const auto a = near_mo(0.40), b = near_mo(0.41);
  const auto warm = solve_ccsd(solve_ccsd(a, spec.cc).amplitudes, b, spec.cc);
  const auto cold = solve_ccsd(b, spec.cc);
  EXPECT_LT(warm.iterations, cold.iterations);
  EXPECT_NEAR(warm.e_corr, cold.e_corr, 1e-11);
}

TEST(Amplitudes, VectorRoundTripAndAntisymmetrize) {
  auto t = AmplitudeSet::zeros(4, 2);
  t.t2(0, 1, 0, 1) = 1.0;
  EXPECT_GT(t.antisymmetry_violation(), 0.5);
  t.antisymmetrize();
  EXPECT_EQ(t.antisymmetry_violation(), 0.0);
  EXPECT_DOUBLE_EQ(t.t2(1, 0, 0, 1), -t.t2(0, 1, 0, 1));
  auto u = AmplitudeSet::zeros(4, 2);
  u.assign(t.to_vector());
  EXPECT_EQ(u.to_vector(), t.to_vector());
  EXPECT_THROW(u.assign(Eigen::VectorXd::Zero(3)), ShapeMismatch);
}
