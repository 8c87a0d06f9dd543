#pragma once

#include <Eigen/Dense>

#include "ccinterp/basis.hpp"
#include "ccinterp/geometry.hpp"
#include "ccinterp/tensor.hpp"

namespace ccinterp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Smallest admissible overlap eigenvalue.
inline constexpr double kLinearDependenceThreshold = 1e-10;

struct GaussianProduct {
  double p = 0.0;       // a + b
  Vec3 center;          // (aA + bB) / p
  double prefactor = 0; // exp(-ab |A-B|^2 / p)
};

GaussianProduct gaussian_product(double a, const Vec3& A, double b, const Vec3& B);

/// Closed form of int exp(-a|x-A|^2) exp(-b|x-B|^2) / |x-C| dx for
/// unnormalized s-type primitives.
double coulomb_s_integral(double a, const Vec3& A, double b, const Vec3& B, const Vec3& C);

struct IntegralBundle {
  Matrix S;          // overlap
  Matrix T;          // kinetic
  Matrix V;          // nuclear attraction
  Matrix h_core;     // T + V
  Tensor eri;        // (ij|kl), chemists' order, n_b^4
  double e_nuc = 0;  // nuclear repulsion

  std::size_t n_basis() const { return static_cast<std::size_t>(S.rows()); }
};

/// Overlap, kinetic, nuclear attraction and electron repulsion over Cartesian
/// Gaussians via McMurchie-Davidson Hermite expansions. Throws
/// LinearDependence if the overlap matrix is numerically singular.
IntegralBundle compute_integrals(const Geometry& geom, const BasisSet& basis);

/// Overlap only (cheap; used when the target frame needs S alone).
Matrix compute_overlap(const Geometry& geom, const BasisSet& basis);

}  // namespace ccinterp
