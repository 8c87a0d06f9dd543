#include "ccinterp/basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"

namespace ccinterp {

namespace {

double double_factorial_odd(int n) {  // n!! for odd n >= -1
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

double parse_fortran_double(std::string tok) {
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError("bad number '" + tok + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::array<int, 3> cartesian_powers(int l, std::size_t c) {
  std::size_t idx = 0;
  for (int lx = l; lx >= 0; --lx) {
    for (int ly = l - lx; ly >= 0; --ly) {
      if (idx++ == c) return {lx, ly, l - lx - ly};
    }
  }
  throw InvalidArgument("cartesian component out of range");
}

double component_scale(int l, std::size_t c) {
  auto p = cartesian_powers(l, c);
  return std::sqrt(double_factorial_odd(2 * l - 1) /
                   (double_factorial_odd(2 * p[0] - 1) * double_factorial_odd(2 * p[1] - 1) *
                    double_factorial_odd(2 * p[2] - 1)));
}

std::vector<Primitive> normalize_contraction(int l, const std::vector<Primitive>& raw) {
  const double df = double_factorial_odd(2 * l - 1);
  std::vector<Primitive> prims;
  prims.reserve(raw.size());
  for (const auto& p : raw) {
    if (!(p.exponent > 0.0)) {
      throw InvalidArgument("basis exponent must be positive, got " + exact(p.exponent));
    }
    const double n = std::pow(2.0 * p.exponent / std::numbers::pi, 0.75) *
                     std::pow(4.0 * p.exponent, 0.5 * l) / std::sqrt(df);
    prims.push_back({p.exponent, p.coefficient * n});
  }
  double self = 0.0;
  for (const auto& a : prims) {
    for (const auto& b : prims) {
      const double p = a.exponent + b.exponent;
      self += a.coefficient * b.coefficient * std::pow(std::numbers::pi / p, 1.5) * df /
              std::pow(2.0 * p, l);
    }
  }
  if (!(self > 0.0)) throw InvalidArgument("contracted shell has zero norm");
  const double scale = 1.0 / std::sqrt(self);
  for (auto& p : prims) p.coefficient *= scale;
  return prims;
}

BasisLibrary parse_basis_library(std::string_view text, std::string name) {
  BasisLibrary lib;
  lib.name = std::move(name);
  lib.checksum = fnv1a64(text);

  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  int current_z = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto lineno = std::to_string(i + 1);
    auto tok = tokens(lines[i]);
    if (tok.empty() || tok[0][0] == '!' || tok[0][0] == '#') continue;
    if (tok[0].starts_with("****")) {
      current_z = 0;
      continue;
    }
    if (current_z == 0) {
      // Element header: "H 0" (or a stray header line like "BASIS ..." which we reject).
      try {
        current_z = atomic_number(tok[0]);
      } catch (const ParseError&) {
        throw ParseError("basis line " + lineno + ": expected element header, got '" +
                         lines[i] + "'");
      }
      lib.elements[current_z];
      continue;
    }
    if (tok.size() < 2) throw ParseError("basis line " + lineno + ": malformed shell header");
    const auto kind = upper(tok[0]);
    int nprim = 0;
    try {
      nprim = std::stoi(tok[1]);
    } catch (const std::exception&) {
      throw ParseError("basis line " + lineno + ": bad primitive count '" + tok[1] + "'");
    }
    if (nprim <= 0 || i + static_cast<std::size_t>(nprim) >= lines.size()) {
      throw ParseError("basis line " + lineno + ": shell runs past end of file");
    }
    std::vector<int> ls;
    if (kind == "S") ls = {0};
    else if (kind == "P") ls = {1};
    else if (kind == "D") ls = {2};
    else if (kind == "SP" || kind == "L") ls = {0, 1};
    else throw ParseError("basis line " + lineno + ": unsupported shell type '" + tok[0] + "'");

    std::vector<ShellTemplate> shells(ls.size());
    for (std::size_t s = 0; s < ls.size(); ++s) shells[s].l = ls[s];
    for (int k = 0; k < nprim; ++k) {
      auto row = tokens(lines[++i]);
      if (row.size() < 1 + ls.size()) {
        throw ParseError("basis line " + std::to_string(i + 1) + ": expected " +
                         std::to_string(1 + ls.size()) + " columns");
      }
      const double a = parse_fortran_double(row[0]);
      for (std::size_t s = 0; s < ls.size(); ++s) {
        shells[s].primitives.push_back({a, parse_fortran_double(row[1 + s])});
      }
    }
    auto& dst = lib.elements[current_z];
    dst.insert(dst.end(), shells.begin(), shells.end());
  }
  if (lib.elements.empty()) throw ParseError("basis file defines no elements");
  return lib;
}

BasisLibrary load_basis_library(const std::filesystem::path& path) {
  try {
    return parse_basis_library(read_text_file(path), path.stem().string());
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

BasisSet::BasisSet(std::vector<Shell> shells, std::size_t n_atoms, std::string name,
                   std::uint64_t checksum)
    : shells_(std::move(shells)), n_atoms_(n_atoms), name_(std::move(name)),
      checksum_(checksum) {
  for (const auto& sh : shells_) {
    if (sh.center >= n_atoms_) {
      throw InvalidArgument("shell references atom " + std::to_string(sh.center) +
                            " but geometry has " + std::to_string(n_atoms_));
    }
    if (sh.l < 0 || sh.l > kMaxAngularMomentum) {
      throw InvalidArgument("angular momentum " + std::to_string(sh.l) + " not supported");
    }
    if (sh.primitives.empty()) throw InvalidArgument("shell without primitives");
    for (const auto& p : sh.primitives) {
      if (!(p.exponent > 0.0)) throw InvalidArgument("non-positive exponent");
    }
    offsets_.push_back(n_functions_);
    n_functions_ += sh.size();
  }
}

BasisSet BasisSet::build(const BasisLibrary& lib, const Geometry& geom) {
  std::vector<Shell> shells;
  for (std::size_t a = 0; a < geom.size(); ++a) {
    const int z = geom[a].atomic_number;
    auto it = lib.elements.find(z);
    if (it == lib.elements.end()) {
      throw ParseError("basis '" + lib.name + "' has no entry for element " +
                       element_symbol(z));
    }
    for (const auto& t : it->second) {
      shells.push_back(Shell{a, t.l, normalize_contraction(t.l, t.primitives)});
    }
  }
  return BasisSet(std::move(shells), geom.size(), lib.name, lib.checksum);
}

}  // namespace ccinterp
