#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccinterp/basis.hpp"
#include "ccinterp/geometry.hpp"
#include "ccinterp/integrals.hpp"
#include "ccinterp/interp.hpp"
#include "ccinterp/scf.hpp"

namespace ccinterp::test {

inline std::filesystem::path source_dir() { return CCINTERP_SOURCE_DIR; }
inline std::filesystem::path data_path(const std::string& rel) { return source_dir() / "data" / rel; }
inline std::filesystem::path fixture_path(const std::string& rel) {
  return source_dir() / "tests" / "fixtures" / rel;
}

/// Reference fixture: "<key> <n> <v1..vn>" records, '#' comments.
using Fixture = std::map<std::string, std::vector<double>>;

inline Fixture load_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name + ".ref"));
  if (!in) throw std::runtime_error("missing fixture " + name);
  Fixture f;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    std::size_t n = 0;
    ls >> key >> n;
    std::vector<double> v(n);
    for (auto& x : v) ls >> x;
    if (!ls) throw std::runtime_error("malformed fixture record " + key + " in " + name);
    f[key] = std::move(v);
  }
  return f;
}

inline double scalar(const Fixture& f, const std::string& key) { return f.at(key).at(0); }

inline BasisLibrary sto3g() { return load_basis_library(data_path("basis/sto-3g.gbs")); }
inline BasisLibrary b631g() { return load_basis_library(data_path("basis/6-31g.gbs")); }

inline Geometry h2(double r = 1.4) {
  return Geometry({{1, Vec3(0, 0, 0)}, {1, Vec3(0, 0, r)}});
}
inline Geometry he() { return Geometry({{2, Vec3(0, 0, 0)}}); }
inline Geometry lih() { return Geometry({{3, Vec3(0, 0, 0)}, {1, Vec3(0, 0, 3.015)}}); }
inline Geometry h2o() {
  return Geometry({{8, Vec3(0, 0, 0)}, {1, Vec3(0, 1.430429, 1.107157)}, {1, Vec3(0, -1.430429, 1.107157)}});
}

struct System {
  IntegralBundle ints;
  ScfSolution scf;
};

inline System run_scf(const Geometry& g, const BasisLibrary& lib, const ScfConfig& cfg = {}) {
  System s;
  s.ints = compute_integrals(g, BasisSet::build(lib, g));
  s.scf = scf_iterate(s.ints, g.nuclear_charge(), cfg);
  return s;
}

/// Solver settings used by the interpolation studies.
inline SystemSpec study_spec(const std::string& trajectory) {
  SystemSpec spec;
  spec.trajectory = load_trajectory(data_path("trajectories/" + trajectory));
  spec.basis = sto3g();
  spec.scf.tol_grad = 1e-12;
  spec.scf.tol_e = 1e-13;
  spec.scf.max_iter = 300;
  spec.cc.tol_r = 1e-12;
  spec.cc.tol_e = 1e-13;
  spec.cc.max_iter = 400;
  return spec;
}

}  // namespace ccinterp::test
