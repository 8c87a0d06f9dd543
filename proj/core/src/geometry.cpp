#include "ccinterp/geometry.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"

namespace ccinterp {

namespace {

constexpr std::array<std::string_view, 18> kSymbols = {
    "H", "He", "Li", "Be", "B",  "C",  "N", "O",  "F",
    "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

double unit_scale(const std::string& unit) {
  auto u = lower(unit);
  if (u == "bohr" || u == "au" || u == "a.u.") return 1.0;
  if (u == "angstrom" || u == "ang") return kBohrPerAngstrom;
  throw ParseError("unknown length unit '" + unit + "' (expected bohr or angstrom)");
}

Atom parse_atom_line(const std::string& line, double scale, int lineno) {
  std::istringstream in(line);
  std::string sym;
  double x, y, z;
  if (!(in >> sym >> x >> y >> z)) {
    throw ParseError("line " + std::to_string(lineno) +
                     ": expected 'SYMBOL x y z', got '" + line + "'");
  }
  return Atom{atomic_number(sym), Vec3(x, y, z) * scale};
}

}  // namespace

int atomic_number(std::string_view symbol) {
  auto want = lower(symbol);
  for (std::size_t i = 0; i < kSymbols.size(); ++i) {
    if (lower(kSymbols[i]) == want) return static_cast<int>(i) + 1;
  }
  throw ParseError("unknown element symbol '" + std::string(symbol) + "'");
}

std::string element_symbol(int z) {
  if (z < 1 || z > static_cast<int>(kSymbols.size())) {
    throw InvalidArgument("atomic number " + std::to_string(z) + " out of range");
  }
  return std::string(kSymbols[z - 1]);
}

Geometry::Geometry(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (a.atomic_number < 1) {
      throw InvalidArgument("atomic number must be positive");
    }
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double r = (atoms_[i].position - atoms_[j].position).norm();
      if (r < kCoincidenceThreshold) {
        throw DegenerateGeometry("nuclei " + std::to_string(j) + " and " +
                                 std::to_string(i) + " coincide (distance " +
                                 exact(r) + " bohr)");
      }
    }
  }
}

int Geometry::nuclear_charge() const {
  int z = 0;
  for (const auto& a : atoms_) z += a.atomic_number;
  return z;
}

double Geometry::nuclear_repulsion() const {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      e += atoms_[i].atomic_number * atoms_[j].atomic_number /
           (atoms_[i].position - atoms_[j].position).norm();
    }
  }
  return e;
}

double Geometry::min_distance() const {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      r = std::min(r, (atoms_[i].position - atoms_[j].position).norm());
    }
  }
  return r;
}

Geometry Geometry::translated(const Vec3& d) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.position += d;
  return Geometry(std::move(atoms));
}

Geometry parse_geometry(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  double scale = -1.0;
  std::vector<Atom> atoms;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    if (scale < 0) {
      std::istringstream hdr(line);
      std::string unit;
      hdr >> unit;
      scale = unit_scale(unit);
      continue;
    }
    atoms.push_back(parse_atom_line(line, scale, lineno));
  }
  if (scale < 0) throw ParseError("geometry: missing unit header (bohr|angstrom)");
  if (atoms.empty()) throw ParseError("geometry: no atoms");
  return Geometry(std::move(atoms));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Geometry load_geometry(const std::filesystem::path& path) {
  try {
    return parse_geometry(read_text_file(path));
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

Trajectory::Trajectory(Geometry gamma0, std::vector<Mode> modes, double lo,
                       double hi)
    : gamma0_(std::move(gamma0)), modes_(std::move(modes)), lo_(lo), hi_(hi) {
  if (!(lo_ < hi_)) throw InvalidArgument("trajectory domain must satisfy lo < hi");
  const auto n = static_cast<Eigen::Index>(3 * gamma0_.size());
  for (const auto& m : modes_) {
    if (m.displacement.size() != n) {
      throw ShapeMismatch("mode displacement has " +
                          std::to_string(m.displacement.size()) +
                          " components, expected " + std::to_string(n));
    }
  }
}

Geometry Trajectory::evaluate(double mu) const {
  if (mu < lo_ || mu > hi_) {
    throw InvalidArgument("mu=" + exact(mu) + " outside trajectory domain [" +
                          exact(lo_) + ", " + exact(hi_) + "]");
  }
  auto atoms = gamma0_.atoms();
  for (const auto& m : modes_) {
    const double amp = m.coefficient * std::sin(2.0 * std::numbers::pi * m.frequency * mu);
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      atoms[a].position += amp * m.displacement.segment<3>(static_cast<Eigen::Index>(3 * a));
    }
  }
  try {
    return Geometry(std::move(atoms));
  } catch (Error& e) {
    e.add_context("trajectory at mu=" + exact(mu));
    throw;
  }
}

std::string Trajectory::canonical_text() const {
  std::ostringstream out;
  out << "domain " << exact(lo_) << ' ' << exact(hi_) << '\n';
  for (const auto& a : gamma0_.atoms()) {
    out << "atom " << a.atomic_number << ' ' << exact(a.position.x()) << ' '
        << exact(a.position.y()) << ' ' << exact(a.position.z()) << '\n';
  }
  for (const auto& m : modes_) {
    out << "mode " << exact(m.coefficient) << ' ' << exact(m.frequency);
    for (Eigen::Index i = 0; i < m.displacement.size(); ++i) {
      out << ' ' << exact(m.displacement[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::uint64_t Trajectory::checksum() const { return fnv1a64(canonical_text()); }

Trajectory parse_trajectory(std::string_view text,
                            const std::filesystem::path& base_dir) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  double scale = 1.0;
  double lo = 0.0, hi = 1.0;
  std::optional<Geometry> gamma0;
  std::vector<std::vector<double>> raw_modes;
  bool in_block = false;
  std::vector<Atom> block;

  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto k = lower(key);
    if (in_block) {
      if (k == "end") {
        in_block = false;
        gamma0 = Geometry(std::move(block));
        block.clear();
      } else {
        block.push_back(parse_atom_line(line, scale, lineno));
      }
      continue;
    }
    if (k == "units") {
      std::string u;
      ls >> u;
      scale = unit_scale(u);
    } else if (k == "reference") {
      std::string rel;
      ls >> rel;
      std::filesystem::path p(rel);
      if (p.is_relative()) p = base_dir / p;
      gamma0 = load_geometry(p);
    } else if (k == "geometry") {
      in_block = true;
    } else if (k == "domain") {
      if (!(ls >> lo >> hi)) {
        throw ParseError("line " + std::to_string(lineno) + ": domain needs two numbers");
      }
    } else if (k == "mode") {
      std::vector<double> vals;
      double v;
      while (ls >> v) vals.push_back(v);
      if (!ls.eof()) {
        throw ParseError("line " + std::to_string(lineno) + ": non-numeric mode entry");
      }
      if (vals.size() < 2) {
        throw ParseError("line " + std::to_string(lineno) + ": mode needs c, omega and displacements");
      }
      raw_modes.push_back(std::move(vals));
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown keyword '" + key + "'");
    }
  }
  if (in_block) throw ParseError("trajectory: unterminated geometry block");
  if (!gamma0) throw ParseError("trajectory: no reference geometry");

  std::vector<Mode> modes;
  for (const auto& vals : raw_modes) {
    Mode m;
    m.coefficient = vals[0];
    m.frequency = vals[1];
    m.displacement = Eigen::Map<const Eigen::VectorXd>(
        vals.data() + 2, static_cast<Eigen::Index>(vals.size() - 2));
    modes.push_back(std::move(m));
  }
  return Trajectory(std::move(*gamma0), std::move(modes), lo, hi);
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  try {
    return parse_trajectory(read_text_file(path), path.parent_path());
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

}  // namespace ccinterp
