#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ccinterp/basis.hpp"
#include "ccinterp/ccsd.hpp"
#include "ccinterp/exc_tensor.hpp"
#include "ccinterp/geometry.hpp"
#include "ccinterp/integrals.hpp"
#include "ccinterp/scf.hpp"
#include "ccinterp/snapshot.hpp"

namespace ccinterp {

/// Interpolation nodes in [0, 1] with barycentric weights.
struct NodeSet {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // barycentric, max |w| = 1

  std::size_t size() const { return nodes.size(); }
};

/// Chebyshev points of the first kind mapped to [0, 1], ascending.
NodeSet chebyshev_nodes(std::size_t d);

/// Barycentric weights for arbitrary distinct nodes (sorted on return).
NodeSet node_set_from(std::vector<double> nodes);

/// L_j(mu) for all j via the second barycentric form; an exact node hit
/// returns the unit vector.
std::vector<double> lagrange_basis(const NodeSet& ns, double mu);

/// n equidistant points on [0, 1] including both endpoints.
std::vector<double> test_grid(std::size_t n);

/// Everything needed to run the electronic-structure chain along a path.
struct SystemSpec {
  Trajectory trajectory;
  BasisLibrary basis;
  int charge = 0;
  ScfConfig scf;
  CcConfig cc;

  int n_electrons() const { return trajectory.reference().nuclear_charge() - charge; }
  /// One-line solver settings, stored in snapshots and CSV headers.
  std::string config_echo() const;
};

/// Integrals and SCF at one geometry (the online target frame).
struct Frame {
  double mu = 0;
  Geometry geometry;
  IntegralBundle ints;
  ScfSolution scf;
  TransformPair tp;
};

/// Errors are tagged with the offending mu.
Frame compute_frame(const SystemSpec& spec, double mu);

/// Frame plus MO transform and CCSD from the MP2 guess.
Snapshot compute_snapshot(const SystemSpec& spec, double mu);
/// Same, reusing an already computed frame.
Snapshot compute_snapshot(const SystemSpec& spec, const Frame& frame);

class Interpolant {
 public:
  Interpolant() = default;
  /// Validates count, node agreement and cross-snapshot consistency.
  Interpolant(NodeSet nodes, std::vector<Snapshot> snapshots);

  const NodeSet& node_set() const { return nodes_; }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  const TransformPair& frame(std::size_t j) const { return frames_[j]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  NodeSet nodes_;
  std::vector<Snapshot> snapshots_;
  std::vector<TransformPair> frames_;
};

/// Chebyshev weights when the snapshot mus are the Chebyshev nodes for
/// their count, generic barycentric weights otherwise.
Interpolant make_interpolant(std::vector<Snapshot> snapshots);

/// Runs compute_snapshot at the d Chebyshev nodes (in parallel).
Interpolant offline_build(const SystemSpec& spec, std::size_t d);

/// Writes node_XXX.snap files and the manifest into `dir` (created if needed).
SnapshotManifest save_interpolant(const Interpolant& itp, const std::filesystem::path& dir);
Interpolant load_interpolant(const std::filesystem::path& dir);

/// sum_j cross_transform(T(mu_j); mu <- mu_j) L_j(mu), t2 antisymmetrized.
AmplitudeSet online_eval(const Interpolant& itp, double mu, const TransformPair& target);
/// Computes the target frame first.
AmplitudeSet online_eval(const Interpolant& itp, const SystemSpec& spec, double mu);

/// sum_j T(mu_j) L_j(mu) on raw MO entries, no frame alignment.
AmplitudeSet raw_mo_eval(const Interpolant& itp, double mu);

struct BoundReport {
  std::array<double, 2> lhs{};  // ||T~_k - T_k||_F, k = 1, 2
  std::array<double, 2> rhs{};  // ||S||_2^k e_k
  double s_norm = 0;            // ||S(mu)||_2
  bool holds = false;           // lhs <= rhs + slack for both k
};

inline constexpr double kBoundSlack = 1e-10;

/// Compares the interpolation error against the AO-space interpolation
/// error scaled by powers of ||S(mu)||_2.
BoundReport error_bound_check(const Interpolant& itp, double mu, const TransformPair& target,
                              const AmplitudeSet& t_interp, const AmplitudeSet& t_exact);
BoundReport error_bound_check(const Interpolant& itp, double mu, const TransformPair& target,
                              const AmplitudeSet& t_exact);

/// ||approx - exact|| / ||exact|| over concatenated (t1, t2). Throws
/// ZeroReference if ||exact|| < 1e-14.
double amplitude_error(const AmplitudeSet& approx, const AmplitudeSet& exact);

/// Mean of log10 over the list. Throws NonpositiveError on entries <= 0.
double mle(std::span<const double> errors);

}  // namespace ccinterp
