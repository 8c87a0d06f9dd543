#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ccinterp {

using Vec3 = Eigen::Vector3d;

inline constexpr double kBohrPerAngstrom = 1.0 / 0.529177210903;
/// Two nuclei closer than this are treated as coincident.
inline constexpr double kCoincidenceThreshold = 1e-8;

struct Atom {
  int atomic_number = 0;
  Vec3 position = Vec3::Zero();  // bohr
};

/// Element symbol <-> atomic number for H..Ar.
int atomic_number(std::string_view symbol);
std::string element_symbol(int atomic_number);

/// Nuclear configuration. Construction validates that no two nuclei
/// coincide (DegenerateGeometry otherwise).
class Geometry {
 public:
  Geometry() = default;
  explicit Geometry(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  int nuclear_charge() const;
  double nuclear_repulsion() const;
  double min_distance() const;

  /// Same atoms rigidly shifted by `d`.
  Geometry translated(const Vec3& d) const;

 private:
  std::vector<Atom> atoms_;
};

/// Parses "bohr"/"angstrom" header followed by "SYMBOL x y z" lines.
Geometry parse_geometry(std::string_view text);
Geometry load_geometry(const std::filesystem::path& path);

struct Mode {
  double coefficient = 0.0;       // c_s
  double frequency = 0.0;         // omega_s, per unit mu
  Eigen::VectorXd displacement;   // 3M components, bohr
};

/// Analytic path mu -> gamma0 + sum_s c_s sin(2 pi omega_s mu) zeta_s.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(Geometry gamma0, std::vector<Mode> modes, double lo = 0.0,
             double hi = 1.0);

  const Geometry& reference() const noexcept { return gamma0_; }
  const std::vector<Mode>& modes() const noexcept { return modes_; }
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }

  /// Throws InvalidArgument outside the domain, DegenerateGeometry if two
  /// nuclei collide at mu.
  Geometry evaluate(double mu) const;

  /// Canonical text form; its FNV-1a hash identifies the trajectory.
  std::string canonical_text() const;
  std::uint64_t checksum() const;

 private:
  Geometry gamma0_;
  std::vector<Mode> modes_;
  double lo_ = 0.0;
  double hi_ = 1.0;
};

/// Trajectory file:
///
///   units bohr|angstrom          (applies to the reference geometry only)
///   reference <geometry file>    or an inline block:  geometry ... end
///   domain <lo> <hi>             (optional, default 0 1)
///   mode <c> <omega> <3M displacement components in bohr>
///
/// '#' starts a comment. Relative reference paths resolve against
/// `base_dir`.
Trajectory parse_trajectory(std::string_view text,
                            const std::filesystem::path& base_dir = {});
Trajectory load_trajectory(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ccinterp
