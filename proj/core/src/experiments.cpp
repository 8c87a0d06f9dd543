#include "ccinterp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"
#include "ccinterp/parallel.hpp"

namespace ccinterp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CcConfig without_diis(CcConfig c) {
  c.diis_dim = 0;
  return c;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double relative_energy_error(double approx, double exact_value) {
  return std::abs(approx - exact_value) / std::max(std::abs(exact_value), 1e-300);
}

std::string d_label(std::size_t d) { return "d" + std::to_string(d); }

}  // namespace

std::vector<GridSample> reference_grid(const SystemSpec& spec, const std::vector<double>& mus,
                                       bool plain) {
  std::vector<GridSample> out(mus.size());
  parallel_for(mus.size(), [&](std::size_t k) {
    const Frame f = compute_frame(spec, mus[k]);
    GridSample& g = out[k];
    g.mu = mus[k];
    g.e_hf = f.scf.e_hf;
    g.gap = f.scf.gap;
    g.lambdas = f.scf.lambdas;
    g.S = f.scf.S;
    g.C = f.scf.C;
    g.tp = f.tp;
    try {
      g.mo = mo_transform(f.ints, f.scf);
      auto cc = solve_ccsd(g.mo, spec.cc);
      g.e_corr = cc.e_corr;
      g.it_mp2 = cc.iterations;
      g.exact = std::move(cc.amplitudes);
      if (plain) g.it_mp2_plain = solve_ccsd(g.mo, without_diis(spec.cc)).iterations;
    } catch (Error& e) {
      e.add_context("grid mu=" + exact(mus[k]));
      throw;
    }
  });
  return out;
}

Interpolant obtain_interpolant(const SystemSpec& spec, std::size_t d,
                               const std::filesystem::path& root) {
  if (!root.empty()) {
    const auto dir = root / d_label(d);
    if (std::filesystem::exists(dir / kManifestFile)) {
      auto itp = load_interpolant(dir);
      if (itp.size() != d || itp.snapshots().front().trajectory_checksum != spec.trajectory.checksum() ||
          itp.snapshots().front().basis_checksum != spec.basis.checksum) {
        throw InconsistentSet("snapshot set in '" + dir.string() +
                              "' does not match the requested trajectory, basis or node count");
      }
      return itp;
    }
    auto itp = offline_build(spec, d);
    save_interpolant(itp, dir);
    return itp;
  }
  return offline_build(spec, d);
}

DegreeResult evaluate_degree(const SystemSpec& spec, const Interpolant& itp,
                             const std::vector<GridSample>& grid, const SweepOptions& opt) {
  DegreeResult r;
  r.d = itp.size();
  r.nodes = itp.node_set();
  r.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const GridSample& g = grid[k];
    PointEval& p = r.points[k];
    p.mu = g.mu;
    const auto t = online_eval(itp, g.mu, g.tp);
    p.amp_err = amplitude_error(t, g.exact);
    p.raw_err = opt.raw ? amplitude_error(raw_mo_eval(itp, g.mu), g.exact) : kNaN;
    p.bound = error_bound_check(itp, g.mu, g.tp, t, g.exact);
    p.e_interp = cc_energy(t, g.mo);
    p.e_rel_err = relative_energy_error(p.e_interp, g.e_corr);
    if (opt.warm_start) {
      p.it_warm = solve_ccsd(t, g.mo, spec.cc).iterations;
      if (opt.plain) p.it_warm_plain = solve_ccsd(t, g.mo, without_diis(spec.cc)).iterations;
    }
  });

  if (opt.node_checks) {
    r.node_checks.resize(itp.size());
    parallel_for(itp.size(), [&](std::size_t j) {
      const auto& snap = itp.snapshots()[j];
      const Frame f = compute_frame(spec, snap.mu);
      const auto mo = mo_transform(f.ints, f.scf);
      const auto t = online_eval(itp, snap.mu, f.tp);
      NodeEval& n = r.node_checks[j];
      n.mu = snap.mu;
      n.amp_err = amplitude_error(t, snap.amplitudes);
      n.e_rel_err = relative_energy_error(cc_energy(t, mo), snap.e_corr);
      if (opt.warm_start) n.it_warm = solve_ccsd(t, mo, spec.cc).iterations;
    });
  }

  std::vector<double> errs, raws, warm, warm_plain;
  r.max_err = 0.0;
  r.min_err = std::numeric_limits<double>::infinity();
  for (const auto& p : r.points) {
    errs.push_back(p.amp_err);
    if (opt.raw) raws.push_back(p.raw_err);
    r.max_err = std::max(r.max_err, p.amp_err);
    r.min_err = std::min(r.min_err, p.amp_err);
    r.max_e_err = std::max(r.max_e_err, p.e_rel_err);
    if (!p.bound.holds) ++r.bound_violations;
    if (p.it_warm >= 0) warm.push_back(p.it_warm);
    if (p.it_warm_plain >= 0) warm_plain.push_back(p.it_warm_plain);
  }
  // Exact node hits give zero error; clamp so the log-mean stays finite.
  for (double& e : errs) e = std::max(e, std::numeric_limits<double>::min());
  r.mle = mle(errs);
  r.raw_mle = opt.raw ? mle(raws) : kNaN;
  r.mean_it_warm = mean_of(warm);
  r.mean_it_warm_plain = mean_of(warm_plain);
  return r;
}

SweepResult run_sweep(const SystemSpec& spec, const SweepOptions& opt) {
  SweepResult res;
  res.grid = reference_grid(spec, test_grid(opt.grid), opt.plain);
  std::vector<double> mp2, mp2_plain;
  for (const auto& g : res.grid) {
    mp2.push_back(g.it_mp2);
    if (g.it_mp2_plain >= 0) mp2_plain.push_back(g.it_mp2_plain);
  }
  res.mean_it_mp2 = mean_of(mp2);
  res.mean_it_mp2_plain = mean_of(mp2_plain);
  for (std::size_t d : opt.node_counts) {
    const auto itp = obtain_interpolant(spec, d, opt.snapshot_root);
    res.degrees.push_back(evaluate_degree(spec, itp, res.grid, opt));
  }
  return res;
}

std::vector<std::size_t> find_jumps(const std::vector<double>& y, double factor, std::size_t window) {
  std::vector<std::size_t> out;
  if (y.size() < 3) return out;
  std::vector<double> steps(y.size() - 1);
  for (std::size_t k = 0; k + 1 < y.size(); ++k) steps[k] = std::abs(y[k + 1] - y[k]);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    std::vector<double> nb;
    for (std::size_t q = (k >= window ? k - window : 0); q <= std::min(steps.size() - 1, k + window); ++q) {
      if (q != k) nb.push_back(steps[q]);
    }
    if (nb.empty()) continue;
    std::nth_element(nb.begin(), nb.begin() + static_cast<std::ptrdiff_t>(nb.size() / 2), nb.end());
    double med = nb[nb.size() / 2];
    if (nb.size() % 2 == 0) {
      const double lo = *std::max_element(nb.begin(), nb.begin() + static_cast<std::ptrdiff_t>(nb.size() / 2));
      med = 0.5 * (med + lo);
    }
    if (steps[k] > factor * med && steps[k] > 1e-14) out.push_back(k);
  }
  return out;
}

bool local_min_near(const std::vector<double>& mus, const std::vector<double>& values, double node,
                    double h) {
  const std::size_t n = values.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(mus[k] - node) > h * (1.0 + 1e-12)) continue;
    const bool left = k == 0 || values[k] <= values[k - 1];
    const bool right = k + 1 == n || values[k] <= values[k + 1];
    if (left && right) return true;
  }
  return false;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
    syy += y[k] * y[k];
  }
  LinearFit f;
  const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
  f.slope = cxy / cxx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r_squared = cyy > 0 ? (cxy * cxy) / (cxx * cyy) : 1.0;
  return f;
}

std::vector<OrbitalSwap> detect_swaps(const std::vector<GridSample>& grid) {
  std::vector<OrbitalSwap> out;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const Matrix O = grid[k].C.transpose() * grid[k + 1].S * grid[k + 1].C;
    for (Eigen::Index p = 0; p < O.rows(); ++p) {
      Eigen::Index q = 0;
      O.row(p).cwiseAbs().maxCoeff(&q);
      if (q != p) out.push_back({k, static_cast<std::size_t>(p), static_cast<std::size_t>(q)});
    }
  }
  if (out.empty()) {
    throw NoCrossingDetected("no orbital order swap between consecutive grid points");
  }
  return out;
}

CrossingResult run_crossing_demo(const SystemSpec& spec, const SweepOptions& opt_in) {
  SweepOptions opt = opt_in;
  opt.raw = true;
  CrossingResult r;
  r.sweep.grid = reference_grid(spec, test_grid(opt.grid), false);
  r.swaps = detect_swaps(r.sweep.grid);

  // Trace the largest same-pair doubles amplitude of each swapped occupied
  // orbital (alpha i, beta i) through the grid.
  const std::size_t no_so = r.sweep.grid.front().exact.n_occ();
  const std::size_t nv_so = r.sweep.grid.front().exact.n_virt();
  std::vector<std::size_t> traced;
  for (const auto& s : r.swaps) {
    if (2 * s.from >= no_so) continue;
    if (std::find(traced.begin(), traced.end(), s.from) != traced.end()) continue;
    traced.push_back(s.from);
    const auto& t2 = r.sweep.grid[s.grid_index].exact.t2;
    const std::size_t i = 2 * s.from, j = 2 * s.from + 1;
    std::size_t ba = 0, bb = 1;
    double best = -1.0;
    for (std::size_t a = 0; a < nv_so; ++a)
      for (std::size_t b = 0; b < nv_so; ++b)
        if (std::abs(t2(a, b, i, j)) > best) best = std::abs(t2(a, b, i, j)), ba = a, bb = b;
    TracedEntry e;
    e.label = "t2[a=" + std::to_string(ba) + ",b=" + std::to_string(bb) + ",i=" + std::to_string(i) +
              ",j=" + std::to_string(j) + "]";
    for (const auto& g : r.sweep.grid) e.values.push_back(g.exact.t2(ba, bb, i, j));
    e.jumps = find_jumps(e.values);
    r.traces.push_back(std::move(e));
  }

  for (std::size_t d : opt.node_counts) {
    const auto itp = obtain_interpolant(spec, d, opt.snapshot_root);
    r.sweep.degrees.push_back(evaluate_degree(spec, itp, r.sweep.grid, opt));
  }
  if (!r.sweep.degrees.empty()) {
    std::vector<double> trace;
    for (const auto& p : r.sweep.degrees.back().points) trace.push_back(p.amp_err);
    r.transformed_jumps = find_jumps(trace);
  }
  return r;
}

CsvTable decay_table(const SweepResult& r) {
  CsvTable t;
  t.columns = {"d", "E_MLE", "min_E_mu", "max_E_mu", "bound_violations", "raw_E_MLE"};
  for (const auto& d : r.degrees) {
    t.add_row({cell(d.d), cell(d.mle), cell(d.min_err), cell(d.max_err), cell(d.bound_violations),
               cell(d.raw_mle)});
  }
  return t;
}

CsvTable bound_table(const SweepResult& r) {
  CsvTable t;
  t.columns = {"d",          "mu",          "E_mu",         "bound_lhs_t1", "bound_rhs_t1",
               "bound_lhs_t2", "bound_rhs_t2", "bound_holds", "iterations_warm", "iterations_mp2"};
  for (const auto& d : r.degrees) {
    for (std::size_t k = 0; k < d.points.size(); ++k) {
      const auto& p = d.points[k];
      t.add_row({cell(d.d), cell(p.mu), cell(p.amp_err), cell(p.bound.lhs[0]), cell(p.bound.rhs[0]),
                 cell(p.bound.lhs[1]), cell(p.bound.rhs[1]), p.bound.holds ? "1" : "0",
                 cell(p.it_warm), cell(r.grid[k].it_mp2)});
    }
  }
  return t;
}

CsvTable warm_start_table(const SweepResult& r) {
  CsvTable t;
  t.columns = {"d", "mean_iterations_warm_diis", "mean_iterations_mp2_diis",
               "mean_iterations_warm_nodiis", "mean_iterations_mp2_nodiis", "max_node_iterations"};
  for (const auto& d : r.degrees) {
    int node_max = -1;
    for (const auto& n : d.node_checks) node_max = std::max(node_max, n.it_warm);
    t.add_row({cell(d.d), cell(d.mean_it_warm), cell(r.mean_it_mp2), cell(d.mean_it_warm_plain),
               cell(r.mean_it_mp2_plain), cell(node_max)});
  }
  return t;
}

CsvTable energy_curve_table(const SweepResult& r) {
  CsvTable t;
  t.columns = {"d", "mu", "e_corr_exact", "e_corr_interp", "relative_error"};
  for (const auto& d : r.degrees) {
    for (std::size_t k = 0; k < d.points.size(); ++k) {
      const auto& p = d.points[k];
      t.add_row({cell(d.d), cell(p.mu), cell(r.grid[k].e_corr), cell(p.e_interp), cell(p.e_rel_err)});
    }
  }
  return t;
}

CsvTable crossing_table(const CrossingResult& r) {
  CsvTable t;
  t.columns = {"mu"};
  const auto nb = r.sweep.grid.empty() ? 0 : static_cast<std::size_t>(r.sweep.grid.front().lambdas.size());
  for (std::size_t p = 0; p < nb; ++p) t.columns.push_back("lambda_" + std::to_string(p));
  for (const auto& e : r.traces) t.columns.push_back("raw_" + e.label);
  const bool have = !r.sweep.degrees.empty();
  if (have) {
    t.columns.push_back("E_mu_transformed");
    t.columns.push_back("E_mu_raw");
  }
  for (std::size_t k = 0; k < r.sweep.grid.size(); ++k) {
    std::vector<std::string> row = {cell(r.sweep.grid[k].mu)};
    for (std::size_t p = 0; p < nb; ++p) row.push_back(cell(r.sweep.grid[k].lambdas(static_cast<Eigen::Index>(p))));
    for (const auto& e : r.traces) row.push_back(cell(e.values[k]));
    if (have) {
      row.push_back(cell(r.sweep.degrees.back().points[k].amp_err));
      row.push_back(cell(r.sweep.degrees.back().points[k].raw_err));
    }
    t.add_row(std::move(row));
  }
  return t;
}

CsvTable crossing_summary_table(const CrossingResult& r) {
  CsvTable t;
  t.columns = {"d", "E_MLE_transformed", "E_MLE_raw", "difference"};
  for (const auto& d : r.sweep.degrees) {
    t.add_row({cell(d.d), cell(d.mle), cell(d.raw_mle), cell(d.raw_mle - d.mle)});
  }
  return t;
}

}  // namespace ccinterp
