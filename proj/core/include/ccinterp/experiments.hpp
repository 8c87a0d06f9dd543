#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ccinterp/interp.hpp"
#include "ccinterp/report.hpp"

namespace ccinterp {

/// Exact reference data at one test-grid point.
struct GridSample {
  double mu = 0;
  double e_hf = 0;
  double e_corr = 0;
  double gap = 0;
  Vector lambdas;
  Matrix S;  // spatial overlap
  Matrix C;  // spatial coefficients
  TransformPair tp;
  MoIntegrals mo;
  AmplitudeSet exact;
  int it_mp2 = 0;        // CCSD from MP2 guess, DIIS as configured
  int it_mp2_plain = -1; // same without DIIS (-1 if not run)
};

/// Online-stage evaluation at one grid point for one node count.
struct PointEval {
  double mu = 0;
  double amp_err = 0;
  double raw_err = 0;  // NaN unless raw-MO interpolation was requested
  BoundReport bound;
  double e_interp = 0;
  double e_rel_err = 0;
  int it_warm = -1;
  int it_warm_plain = -1;
};

/// Node-reproduction check at one interpolation node.
struct NodeEval {
  double mu = 0;
  double amp_err = 0;
  double e_rel_err = 0;
  int it_warm = -1;
};

struct DegreeResult {
  std::size_t d = 0;
  NodeSet nodes;
  std::vector<PointEval> points;
  std::vector<NodeEval> node_checks;
  double mle = 0;
  double raw_mle = 0;
  double max_err = 0;
  double min_err = 0;
  double max_e_err = 0;
  std::size_t bound_violations = 0;
  double mean_it_warm = 0;
  double mean_it_warm_plain = 0;
};

struct SweepOptions {
  std::vector<std::size_t> node_counts = {2, 4, 6, 8, 10, 12};
  std::size_t grid = 50;
  bool warm_start = true;   // paired CCSD solves from the interpolated guess
  bool plain = true;        // also count iterations without DIIS
  bool raw = false;         // raw-MO interpolation control
  bool node_checks = true;
  /// If set, interpolants are loaded from <root>/d<N> when a manifest exists
  /// there and saved there after an offline build otherwise.
  std::filesystem::path snapshot_root;
};

struct SweepResult {
  std::vector<GridSample> grid;
  std::vector<DegreeResult> degrees;
  double mean_it_mp2 = 0;
  double mean_it_mp2_plain = 0;
};

/// Exact SCF + CCSD at every grid point (parallel over points).
std::vector<GridSample> reference_grid(const SystemSpec& spec, const std::vector<double>& mus,
                                       bool plain);

/// Offline build (or load) plus online evaluation for every node count.
SweepResult run_sweep(const SystemSpec& spec, const SweepOptions& opt);

/// Evaluates one interpolant against a precomputed reference grid.
DegreeResult evaluate_degree(const SystemSpec& spec, const Interpolant& itp,
                             const std::vector<GridSample>& grid, const SweepOptions& opt);

/// Offline stage with optional persistence under `root`/d<N>.
Interpolant obtain_interpolant(const SystemSpec& spec, std::size_t d,
                               const std::filesystem::path& root);

/// Indices k where |y[k+1]-y[k]| exceeds `factor` times the median of the
/// up to 2*window neighbouring steps.
std::vector<std::size_t> find_jumps(const std::vector<double>& y, double factor = 10.0,
                                    std::size_t window = 2);

/// True if some grid index within `h` of `node` is a local minimum of
/// `values` (one-sided at the ends).
bool local_min_near(const std::vector<double>& mus, const std::vector<double>& values, double node,
                    double h);

/// Least-squares line y = a + b x; returns {slope, intercept, r_squared}.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct OrbitalSwap {
  std::size_t grid_index = 0;  // between grid points k and k+1
  std::size_t from = 0;        // spatial orbital index at k
  std::size_t to = 0;          // index of the same orbital at k+1
};

struct TracedEntry {
  std::string label;            // e.g. t2[a=0,b=1,i=4,j=5]
  std::vector<double> values;   // along the grid
  std::vector<std::size_t> jumps;
};

struct CrossingResult {
  SweepResult sweep;  // with raw-MO control
  std::vector<OrbitalSwap> swaps;
  std::vector<TracedEntry> traces;
  std::vector<std::size_t> transformed_jumps;  // largest d, amplitude error trace
};

/// Tracks orbital character between consecutive grid points via
/// C_k^T S_{k+1} C_{k+1}; throws NoCrossingDetected if nothing swaps.
std::vector<OrbitalSwap> detect_swaps(const std::vector<GridSample>& grid);

CrossingResult run_crossing_demo(const SystemSpec& spec, const SweepOptions& opt);

// CSV views shared by the CLI and the acceptance suite.
CsvTable decay_table(const SweepResult& r);
CsvTable bound_table(const SweepResult& r);
CsvTable warm_start_table(const SweepResult& r);
CsvTable energy_curve_table(const SweepResult& r);
CsvTable crossing_table(const CrossingResult& r);
CsvTable crossing_summary_table(const CrossingResult& r);

}  // namespace ccinterp
