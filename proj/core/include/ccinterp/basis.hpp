#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ccinterp/geometry.hpp"

namespace ccinterp {

inline constexpr int kMaxAngularMomentum = 2;

struct Primitive {
  double exponent = 0.0;
  double coefficient = 0.0;
};

/// Shell as written in a basis file: unnormalized contraction coefficients.
struct ShellTemplate {
  int l = 0;
  std::vector<Primitive> primitives;
};

/// Element -> shells, parsed from a Gaussian94-style basis file.
struct BasisLibrary {
  std::string name;
  std::uint64_t checksum = 0;  // FNV-1a of the file bytes
  std::map<int, std::vector<ShellTemplate>> elements;
};

/// Parses the Gaussian94 layout used by the Basis Set Exchange:
///
///   ****
///   H     0
///   S   3   1.00
///         3.42525091             0.15432897
///         ...
///   ****
///
/// Shell letters S, P, D and the combined SP are accepted. Fortran 'D'
/// exponents (1.0D+01) are accepted.
BasisLibrary parse_basis_library(std::string_view text, std::string name);
BasisLibrary load_basis_library(const std::filesystem::path& path);

/// Contracted Cartesian shell placed on an atom. Coefficients are scaled so
/// that the x^l component is normalized; `component_scale` fixes up the other
/// Cartesian components, so every basis function has unit self-overlap.
struct Shell {
  std::size_t center = 0;
  int l = 0;
  std::vector<Primitive> primitives;  // normalized coefficients

  std::size_t size() const { return static_cast<std::size_t>((l + 1) * (l + 2) / 2); }
};

/// Cartesian exponents (lx, ly, lz) of component `c` of a shell with angular
/// momentum l, in the order x..., i.e. for l=2: xx xy xz yy yz zz.
std::array<int, 3> cartesian_powers(int l, std::size_t c);

/// Factor applied to component `c` relative to the x^l normalization.
double component_scale(int l, std::size_t c);

class BasisSet {
 public:
  BasisSet() = default;

  /// Places the library shells on every atom of `geom`. Throws ParseError
  /// if an element is missing from the library.
  static BasisSet build(const BasisLibrary& lib, const Geometry& geom);

  /// Direct construction (tests). Validates centers against `n_atoms`.
  BasisSet(std::vector<Shell> shells, std::size_t n_atoms, std::string name = "custom",
           std::uint64_t checksum = 0);

  const std::vector<Shell>& shells() const noexcept { return shells_; }
  std::size_t n_functions() const noexcept { return n_functions_; }
  std::size_t n_atoms() const noexcept { return n_atoms_; }
  /// Index of the first basis function of each shell.
  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::string& name() const noexcept { return name_; }
  std::uint64_t checksum() const noexcept { return checksum_; }

 private:
  std::vector<Shell> shells_;
  std::vector<std::size_t> offsets_;
  std::size_t n_functions_ = 0;
  std::size_t n_atoms_ = 0;
  std::string name_;
  std::uint64_t checksum_ = 0;
};

/// Normalizes contraction coefficients of a shell template (x^l component).
std::vector<Primitive> normalize_contraction(int l, const std::vector<Primitive>& raw);

}  // namespace ccinterp
