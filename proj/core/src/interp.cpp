#include "ccinterp/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"
#include "ccinterp/parallel.hpp"

namespace ccinterp {

namespace {

void normalize_weights(std::vector<double>& w) {
  double big = 0.0;
  for (double x : w) big = std::max(big, std::abs(x));
  if (big > 0.0) {
    for (double& x : w) x /= big;
  }
}

}  // namespace

NodeSet chebyshev_nodes(std::size_t d) {
  if (d == 0) throw InvalidArgument("node count must be at least 1");
  NodeSet ns;
  ns.nodes.resize(d);
  ns.weights.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double theta = static_cast<double>(2 * k + 1) * std::numbers::pi / static_cast<double>(2 * d);
    // k = 0 is the largest node; store ascending.
    ns.nodes[d - 1 - k] = 0.5 * (1.0 + std::cos(theta));
    ns.weights[d - 1 - k] = (k % 2 ? -1.0 : 1.0) * std::sin(theta);
  }
  normalize_weights(ns.weights);
  return ns;
}

NodeSet node_set_from(std::vector<double> nodes) {
  if (nodes.empty()) throw InvalidArgument("node set is empty");
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (!(nodes[k] > nodes[k - 1])) {
      throw InvalidArgument("duplicate interpolation node " + exact(nodes[k]));
    }
  }
  NodeSet ns;
  ns.nodes = std::move(nodes);
  const std::size_t d = ns.nodes.size();
  ns.weights.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double prod = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      if (k != j) prod *= ns.nodes[j] - ns.nodes[k];
    }
    ns.weights[j] = 1.0 / prod;
  }
  normalize_weights(ns.weights);
  return ns;
}

std::vector<double> lagrange_basis(const NodeSet& ns, double mu) {
  const std::size_t d = ns.size();
  std::vector<double> L(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    if (mu == ns.nodes[j]) {
      L[j] = 1.0;
      return L;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    L[j] = ns.weights[j] / (mu - ns.nodes[j]);
    denom += L[j];
  }
  for (double& x : L) x /= denom;
  return L;
}

std::vector<double> test_grid(std::size_t n) {
  if (n < 2) throw InvalidArgument("test grid needs at least 2 points");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = static_cast<double>(k) / static_cast<double>(n - 1);
  return g;
}

std::string SystemSpec::config_echo() const {
  std::string s = "basis=" + basis.name + " charge=" + std::to_string(charge);
  s += " scf.tol_grad=" + exact(scf.tol_grad) + " scf.tol_e=" + exact(scf.tol_e) +
       " scf.max_iter=" + std::to_string(scf.max_iter) + " scf.diis_dim=" +
       std::to_string(scf.diis_dim) + " scf.gap_min=" + exact(scf.gap_min);
  s += " cc.tol_r=" + exact(cc.tol_r) + " cc.tol_e=" + exact(cc.tol_e) +
       " cc.max_iter=" + std::to_string(cc.max_iter) + " cc.diis_dim=" + std::to_string(cc.diis_dim);
  return s;
}

Frame compute_frame(const SystemSpec& spec, double mu) {
  try {
    Frame f;
    f.mu = mu;
    f.geometry = spec.trajectory.evaluate(mu);
    const auto basis = BasisSet::build(spec.basis, f.geometry);
    f.ints = compute_integrals(f.geometry, basis);
    f.scf = scf_iterate(f.ints, spec.n_electrons(), spec.scf);
    f.tp = TransformPair::from_spatial(f.scf.S, f.scf.C, f.scf.n_occ);
    return f;
  } catch (Error& e) {
    e.add_context("mu=" + exact(mu));
    throw;
  }
}

Snapshot compute_snapshot(const SystemSpec& spec, const Frame& frame) {
  CcSolution cc;
  try {
    const auto mo = mo_transform(frame.ints, frame.scf);
    cc = solve_ccsd(mo, spec.cc);
  } catch (Error& e) {
    e.add_context("mu=" + exact(frame.mu));
    throw;
  }
  Snapshot s;
  s.mu = frame.mu;
  s.geometry = frame.geometry;
  s.basis_name = spec.basis.name;
  s.basis_checksum = spec.basis.checksum;
  s.trajectory_checksum = spec.trajectory.checksum();
  s.n_electrons = spec.n_electrons();
  s.S = frame.scf.S;
  s.C = frame.scf.C;
  s.lambdas = frame.scf.lambdas;
  s.e_hf = frame.scf.e_hf;
  s.gap = frame.scf.gap;
  s.e_corr = cc.e_corr;
  s.scf_iterations = frame.scf.iterations;
  s.cc_iterations = cc.iterations;
  s.amplitudes = std::move(cc.amplitudes);
  s.config_echo = spec.config_echo();
  return s;
}

Snapshot compute_snapshot(const SystemSpec& spec, double mu) {
  return compute_snapshot(spec, compute_frame(spec, mu));
}

Interpolant::Interpolant(NodeSet nodes, std::vector<Snapshot> snapshots)
    : nodes_(std::move(nodes)), snapshots_(std::move(snapshots)) {
  if (nodes_.size() != snapshots_.size() || nodes_.weights.size() != nodes_.size()) {
    throw InconsistentSet("interpolant has " + std::to_string(nodes_.size()) + " nodes and " +
                          std::to_string(snapshots_.size()) + " snapshots");
  }
  if (snapshots_.empty()) throw InconsistentSet("interpolant needs at least one snapshot");
  const auto& s0 = snapshots_.front();
  for (std::size_t j = 0; j < snapshots_.size(); ++j) {
    const auto& s = snapshots_[j];
    if (s.mu != nodes_.nodes[j]) {
      throw InconsistentSet("snapshot " + std::to_string(j) + " has mu " + exact(s.mu) +
                            ", node is " + exact(nodes_.nodes[j]));
    }
    if (s.basis_checksum != s0.basis_checksum || s.n_electrons != s0.n_electrons ||
        s.n_basis() != s0.n_basis() || s.trajectory_checksum != s0.trajectory_checksum) {
      throw InconsistentSet("snapshots 0 and " + std::to_string(j) +
                            " differ in basis, electron count or trajectory");
    }
    frames_.push_back(s.transform_pair());
  }
}

Interpolant make_interpolant(std::vector<Snapshot> snapshots) {
  std::sort(snapshots.begin(), snapshots.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.mu < b.mu; });
  std::vector<double> mus;
  for (const auto& s : snapshots) mus.push_back(s.mu);
  NodeSet ns;
  const auto cheb = chebyshev_nodes(std::max<std::size_t>(1, mus.size()));
  bool is_cheb = cheb.size() == mus.size();
  for (std::size_t j = 0; is_cheb && j < mus.size(); ++j) {
    is_cheb = std::abs(cheb.nodes[j] - mus[j]) <= 1e-15;
  }
  if (is_cheb) {
    ns.nodes = mus;
    ns.weights = cheb.weights;
  } else {
    ns = node_set_from(mus);
  }
  return Interpolant(std::move(ns), std::move(snapshots));
}

Interpolant offline_build(const SystemSpec& spec, std::size_t d) {
  auto ns = chebyshev_nodes(d);
  std::vector<Snapshot> snaps(d);
  parallel_for(d, [&](std::size_t j) {
    try {
      snaps[j] = compute_snapshot(spec, ns.nodes[j]);
    } catch (Error& e) {
      e.add_context("node " + std::to_string(j));
      throw;
    }
  });
  return Interpolant(std::move(ns), std::move(snaps));
}

SnapshotManifest save_interpolant(const Interpolant& itp, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create '" + dir.string() + "': " + ec.message());
  SnapshotManifest m;
  const auto& s0 = itp.snapshots().front();
  m.trajectory_checksum = s0.trajectory_checksum;
  m.basis_checksum = s0.basis_checksum;
  m.n_electrons = s0.n_electrons;
  for (std::size_t j = 0; j < itp.size(); ++j) {
    const auto name = snapshot_file_name(j);
    write_snapshot(itp.snapshots()[j], dir / name);
    m.nodes.push_back(itp.snapshots()[j].mu);
    m.files.push_back(name);
  }
  write_manifest(m, dir);
  return m;
}

Interpolant load_interpolant(const std::filesystem::path& dir) {
  const auto m = read_manifest(dir, false);
  return make_interpolant(load_snapshots(m, dir));
}

AmplitudeSet online_eval(const Interpolant& itp, double mu, const TransformPair& target) {
  const auto L = lagrange_basis(itp.node_set(), mu);
  const auto& s0 = itp.snapshots().front().amplitudes;
  auto out = AmplitudeSet::zeros(s0.n_virt(), s0.n_occ());
  for (std::size_t j = 0; j < itp.size(); ++j) {
    if (L[j] == 0.0) continue;
    auto t = cross_transform(itp.snapshots()[j].amplitudes, target, itp.frame(j));
    out.t1.axpy(L[j], t.t1);
    out.t2.axpy(L[j], t.t2);
  }
  out.antisymmetrize();
  return out;
}

AmplitudeSet online_eval(const Interpolant& itp, const SystemSpec& spec, double mu) {
  return online_eval(itp, mu, compute_frame(spec, mu).tp);
}

AmplitudeSet raw_mo_eval(const Interpolant& itp, double mu) {
  const auto L = lagrange_basis(itp.node_set(), mu);
  const auto& s0 = itp.snapshots().front().amplitudes;
  auto out = AmplitudeSet::zeros(s0.n_virt(), s0.n_occ());
  for (std::size_t j = 0; j < itp.size(); ++j) {
    if (L[j] == 0.0) continue;
    out.t1.axpy(L[j], itp.snapshots()[j].amplitudes.t1);
    out.t2.axpy(L[j], itp.snapshots()[j].amplitudes.t2);
  }
  return out;
}

BoundReport error_bound_check(const Interpolant& itp, double mu, const TransformPair& target,
                              const AmplitudeSet& t_interp, const AmplitudeSet& t_exact) {
  BoundReport r;
  Eigen::SelfAdjointEigenSolver<Matrix> es(target.S, Eigen::EigenvaluesOnly);
  r.s_norm = es.eigenvalues().maxCoeff();
  const auto L = lagrange_basis(itp.node_set(), mu);
  r.holds = true;
  for (int k = 1; k <= 2; ++k) {
    const auto pick = [k](const AmplitudeSet& a) -> const Tensor& { return k == 1 ? a.t1 : a.t2; };
    r.lhs[k - 1] = (pick(t_interp) - pick(t_exact)).norm();
    Tensor ao = mo_to_ao(ExcTensor::mo(pick(t_exact)), target).data;
    ao *= -1.0;
    for (std::size_t j = 0; j < itp.size(); ++j) {
      if (L[j] == 0.0) continue;
      ao.axpy(L[j], mo_to_ao(ExcTensor::mo(pick(itp.snapshots()[j].amplitudes)), itp.frame(j)).data);
    }
    r.rhs[k - 1] = std::pow(r.s_norm, k) * ao.norm();
    r.holds = r.holds && r.lhs[k - 1] <= r.rhs[k - 1] + kBoundSlack;
  }
  return r;
}

BoundReport error_bound_check(const Interpolant& itp, double mu, const TransformPair& target,
                              const AmplitudeSet& t_exact) {
  return error_bound_check(itp, mu, target, online_eval(itp, mu, target), t_exact);
}

double amplitude_error(const AmplitudeSet& approx, const AmplitudeSet& exact_amps) {
  if (!approx.same_shape(exact_amps)) throw ShapeMismatch("amplitude_error: shapes differ");
  const double ref = exact_amps.norm();
  if (ref < 1e-14) throw ZeroReference("reference amplitude norm " + exact(ref) + " below 1e-14");
  AmplitudeSet diff = approx;
  diff.t1 -= exact_amps.t1;
  diff.t2 -= exact_amps.t2;
  return diff.norm() / ref;
}

double mle(std::span<const double> errors) {
  if (errors.empty()) throw InvalidArgument("mle of an empty list");
  double s = 0.0;
  for (double e : errors) {
    if (!(e > 0.0)) throw NonpositiveError("mle needs positive errors, got " + exact(e));
    s += std::log10(e);
  }
  return s / static_cast<double>(errors.size());
}

}  // namespace ccinterp
