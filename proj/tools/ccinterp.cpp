#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ccinterp/basis.hpp"
#include "ccinterp/config.hpp"
#include "ccinterp/errors.hpp"
#include "ccinterp/experiments.hpp"
#include "ccinterp/hash.hpp"
#include "ccinterp/integrals.hpp"
#include "ccinterp/interp.hpp"
#include "ccinterp/report.hpp"
#include "ccinterp/scf.hpp"

namespace fs = std::filesystem;
using namespace ccinterp;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string geometry;
  std::string trajectory;
  std::string basis;
  std::string nodes;
  std::string out = ".";
  std::string snapshots;
  std::optional<std::size_t> grid;
  std::optional<int> charge;
};

RunConfig resolve_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.nodes.empty()) cfg.set("nodes", o.nodes);
  if (o.grid) cfg.set("grid", std::to_string(*o.grid));
  if (o.charge) cfg.charge = *o.charge;
  cfg.validate();
  return cfg;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InvalidArgument(std::string("missing required option ") + flag);
}

SystemSpec make_spec(const Options& o, const RunConfig& cfg) {
  require(o.trajectory, "--trajectory");
  require(o.basis, "--basis");
  SystemSpec spec;
  spec.trajectory = load_trajectory(o.trajectory);
  spec.basis = load_basis_library(o.basis);
  spec.charge = cfg.charge;
  spec.scf = cfg.scf;
  spec.cc = cfg.cc;
  return spec;
}

struct SinglePoint {
  IntegralBundle ints;
  ScfSolution scf;
};

SinglePoint single_point(const Options& o, const RunConfig& cfg) {
  require(o.geometry, "--geometry");
  require(o.basis, "--basis");
  const Geometry geom = load_geometry(o.geometry);
  const BasisLibrary lib = load_basis_library(o.basis);
  SinglePoint sp;
  sp.ints = compute_integrals(geom, BasisSet::build(lib, geom));
  sp.scf = scf_iterate(sp.ints, geom.nuclear_charge() - cfg.charge, cfg.scf);
  return sp;
}

void print_scf(const ScfSolution& s) {
  std::printf("E_hf        %.12f\n", s.e_hf);
  std::printf("gap         %.12f\n", s.gap);
  std::printf("scf_iter    %d\n", s.iterations);
  std::printf("grad_norm   %.3e\n", s.grad_norm);
}

int cmd_scf(const Options& o) {
  const auto cfg = resolve_config(o);
  print_scf(single_point(o, cfg).scf);
  return 0;
}

int cmd_ccsd(const Options& o) {
  const auto cfg = resolve_config(o);
  const auto sp = single_point(o, cfg);
  print_scf(sp.scf);
  const auto mo = mo_transform(sp.ints, sp.scf);
  const auto cc = solve_ccsd(mo, cfg.cc);
  std::printf("e_corr      %.12f\n", cc.e_corr);
  std::printf("E_ccsd      %.12f\n", sp.scf.e_hf + cc.e_corr);
  std::printf("cc_iter     %d\n", cc.iterations);
  return 0;
}

std::string d_dir(std::size_t d) { return "d" + std::to_string(d); }

int cmd_offline(const Options& o) {
  const auto cfg = resolve_config(o);
  const auto spec = make_spec(o, cfg);
  for (std::size_t d : cfg.nodes) {
    const auto dir = fs::path(o.out) / d_dir(d);
    save_interpolant(offline_build(spec, d), dir);
    std::printf("%s\n", (dir / kManifestFile).string().c_str());
  }
  return 0;
}

SweepOptions sweep_options(const Options& o, const RunConfig& cfg) {
  SweepOptions opt;
  opt.node_counts = cfg.nodes;
  opt.grid = cfg.grid;
  opt.snapshot_root = o.snapshots.empty() ? fs::path(o.out) : fs::path(o.snapshots);
  return opt;
}

std::vector<double> d_axis(const SweepResult& r) {
  std::vector<double> x;
  for (const auto& d : r.degrees) x.push_back(static_cast<double>(d.d));
  return x;
}

int cmd_decay(const Options& o) {
  const auto cfg = resolve_config(o);
  const auto spec = make_spec(o, cfg);
  auto opt = sweep_options(o, cfg);
  opt.warm_start = false;
  opt.plain = false;
  opt.node_checks = false;
  const auto r = run_sweep(spec, opt);
  const fs::path out(o.out);
  write_csv(out / "decay.csv", decay_table(r), cfg.checksum());
  write_csv(out / "decay_bound.csv", bound_table(r), cfg.checksum());

  PlotSpec plot{"Mean log error vs node count", "d", "relative amplitude error", true, {}};
  PlotSeries mle_s{"10^E_MLE", d_axis(r), {}, true}, max_s{"max E_mu", d_axis(r), {}, true};
  for (const auto& d : r.degrees) {
    mle_s.y.push_back(std::pow(10.0, d.mle));
    max_s.y.push_back(d.max_err);
  }
  plot.series = {mle_s, max_s};
  write_svg(out / "decay.svg", plot);

  std::size_t violations = 0;
  for (const auto& d : r.degrees) {
    std::printf("d=%-3zu E_MLE=% .4f  max_E_mu=%.3e  bound_violations=%zu\n", d.d, d.mle, d.max_err,
                d.bound_violations);
    violations += d.bound_violations;
  }
  return violations == 0 ? 0 : kExitNumerical;
}

int cmd_warm_start(const Options& o) {
  const auto cfg = resolve_config(o);
  const auto spec = make_spec(o, cfg);
  auto opt = sweep_options(o, cfg);
  const auto r = run_sweep(spec, opt);
  const fs::path out(o.out);
  write_csv(out / "warm_start.csv", warm_start_table(r), cfg.checksum());

  PlotSpec plot{"Mean CCSD iterations", "d", "iterations", false, {}};
  PlotSeries warm{"interpolated guess (DIIS)", d_axis(r), {}, true};
  PlotSeries warm_plain{"interpolated guess (no DIIS)", d_axis(r), {}, true};
  PlotSeries mp2{"MP2 guess (DIIS)", d_axis(r), {}, false};
  PlotSeries mp2_plain{"MP2 guess (no DIIS)", d_axis(r), {}, false};
  for (const auto& d : r.degrees) {
    warm.y.push_back(d.mean_it_warm);
    warm_plain.y.push_back(d.mean_it_warm_plain);
    mp2.y.push_back(r.mean_it_mp2);
    mp2_plain.y.push_back(r.mean_it_mp2_plain);
  }
  plot.series = {warm, warm_plain, mp2, mp2_plain};
  write_svg(out / "warm_start.svg", plot);

  for (const auto& d : r.degrees) {
    std::printf("d=%-3zu warm=%.2f mp2=%.2f warm_nodiis=%.2f mp2_nodiis=%.2f\n", d.d, d.mean_it_warm,
                r.mean_it_mp2, d.mean_it_warm_plain, r.mean_it_mp2_plain);
  }
  return 0;
}

int cmd_energy_curve(const Options& o) {
  const auto cfg = resolve_config(o);
  const auto spec = make_spec(o, cfg);
  auto opt = sweep_options(o, cfg);
  opt.warm_start = false;
  opt.plain = false;
  const auto r = run_sweep(spec, opt);
  const fs::path out(o.out);
  write_csv(out / "energy_curve.csv", energy_curve_table(r), cfg.checksum());

  PlotSpec curve{"Correlation energy", "mu", "e_corr", false, {}};
  PlotSpec err{"Relative correlation energy error", "mu", "relative error", true, {}};
  PlotSeries exact_s{"exact", {}, {}, false};
  for (const auto& g : r.grid) {
    exact_s.x.push_back(g.mu);
    exact_s.y.push_back(g.e_corr);
  }
  curve.series.push_back(exact_s);
  for (const auto& d : r.degrees) {
    PlotSeries e{"d=" + std::to_string(d.d), {}, {}, false}, rel = e;
    for (const auto& p : d.points) {
      e.x.push_back(p.mu);
      e.y.push_back(p.e_interp);
      rel.x.push_back(p.mu);
      rel.y.push_back(p.e_rel_err);
    }
    curve.series.push_back(e);
    err.series.push_back(rel);
  }
  write_svg(out / "energy_curve.svg", curve);
  write_svg(out / "energy_error.svg", err);

  for (const auto& d : r.degrees) {
    double node_max = 0.0;
    for (const auto& n : d.node_checks) node_max = std::max(node_max, n.e_rel_err);
    std::printf("d=%-3zu max_rel_err=%.3e node_rel_err=%.3e\n", d.d, d.max_e_err, node_max);
  }
  return 0;
}

int cmd_crossing(const Options& o) {
  const auto cfg = resolve_config(o);
  const auto spec = make_spec(o, cfg);
  auto opt = sweep_options(o, cfg);
  opt.warm_start = false;
  opt.plain = false;
  opt.node_checks = false;
  const auto r = run_crossing_demo(spec, opt);
  const fs::path out(o.out);
  write_csv(out / "crossing.csv", crossing_table(r), cfg.checksum());
  write_csv(out / "crossing_summary.csv", crossing_summary_table(r), cfg.checksum());

  PlotSpec raw{"Raw MO amplitudes along the path", "mu", "amplitude", false, {}};
  for (const auto& e : r.traces) {
    PlotSeries s{e.label, {}, e.values, false};
    for (const auto& g : r.sweep.grid) s.x.push_back(g.mu);
    raw.series.push_back(s);
  }
  write_svg(out / "crossing_amplitudes.svg", raw);
  if (!r.sweep.degrees.empty()) {
    const auto& last = r.sweep.degrees.back();
    PlotSpec err{"Interpolation error, d=" + std::to_string(last.d), "mu", "relative amplitude error",
                 true, {}};
    PlotSeries tr{"AO-transformed", {}, {}, false}, rw{"raw MO", {}, {}, false};
    for (const auto& p : last.points) {
      tr.x.push_back(p.mu);
      tr.y.push_back(p.amp_err);
      rw.x.push_back(p.mu);
      rw.y.push_back(p.raw_err);
    }
    err.series = {tr, rw};
    write_svg(out / "crossing_error.svg", err);
  }

  for (const auto& s : r.swaps) {
    std::printf("swap between grid %zu and %zu: orbital %zu -> %zu\n", s.grid_index, s.grid_index + 1,
                s.from, s.to);
  }
  for (const auto& e : r.traces) std::printf("%s: %zu jumps\n", e.label.c_str(), e.jumps.size());
  for (const auto& d : r.sweep.degrees) {
    std::printf("d=%-3zu E_MLE transformed=% .4f raw=% .4f\n", d.d, d.mle, d.raw_mle);
  }
  std::printf("transformed-path jumps: %zu\n", r.transformed_jumps.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled cluster amplitude interpolation along nuclear trajectories"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "key = value solver/experiment settings")->check(CLI::ExistingFile);
    sub->add_option("--basis", o.basis, "Gaussian94 basis library");
    sub->add_option("--charge", o.charge, "Molecular charge");
  };
  const auto study = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--trajectory", o.trajectory, "Trajectory file");
    sub->add_option("--nodes", o.nodes, "Node counts, e.g. 2,4,6 or 2:12:2");
    sub->add_option("--grid", o.grid, "Test-grid size");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--snapshots", o.snapshots, "Snapshot root with d<N> subdirectories (default: --out)");
  };

  auto* scf = app.add_subcommand("scf", "Restricted Hartree-Fock single point");
  auto* ccsd = app.add_subcommand("ccsd", "CCSD single point");
  for (auto* sub : {scf, ccsd}) {
    common(sub);
    sub->add_option("--geometry", o.geometry, "Geometry file");
  }
  auto* offline = app.add_subcommand("offline", "Build snapshot sets at Chebyshev nodes");
  auto* decay = app.add_subcommand("decay", "Mean log error vs node count");
  auto* warm = app.add_subcommand("warm-start", "CCSD iterations from interpolated vs MP2 guesses");
  auto* curve = app.add_subcommand("energy-curve", "Correlation energy from interpolated amplitudes");
  auto* crossing = app.add_subcommand("crossing-demo", "Raw MO vs transformed interpolation across a crossing");
  for (auto* sub : {offline, decay, warm, curve, crossing}) study(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*scf) return cmd_scf(o);
    if (*ccsd) return cmd_ccsd(o);
    if (*offline) return cmd_offline(o);
    if (*decay) return cmd_decay(o);
    if (*warm) return cmd_warm_start(o);
    if (*curve) return cmd_energy_curve(o);
    if (*crossing) return cmd_crossing(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.numerical() ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
