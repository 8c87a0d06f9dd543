#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ccinterp/ccsd.hpp"
#include "ccinterp/exc_tensor.hpp"
#include "ccinterp/geometry.hpp"

namespace ccinterp {

inline constexpr int kSnapshotSchemaVersion = 1;
inline constexpr std::string_view kSnapshotMagic = "ccinterp-snapshot";
inline constexpr std::string_view kManifestMagic = "ccinterp-manifest";
inline constexpr std::string_view kManifestFile = "manifest.txt";
inline constexpr std::string_view kAmplitudeLayout =
    "spin-orbital p->2p(alpha),2p+1(beta); t1[a,i] t2[a,b,i,j] row-major";

/// Tolerances applied on every load.
inline constexpr double kSnapshotOrthonormalityTol = 1e-8;
inline constexpr double kSnapshotAntisymmetryTol = 1e-8;

/// Per-geometry record from the offline stage. Matrices are spatial (AO
/// rows); amplitudes are spin-orbital.
struct Snapshot {
  int schema_version = kSnapshotSchemaVersion;
  double mu = 0;
  Geometry geometry;
  std::string basis_name;
  std::uint64_t basis_checksum = 0;
  std::uint64_t trajectory_checksum = 0;
  int n_electrons = 0;
  Matrix S;
  Matrix C;
  Vector lambdas;
  double e_hf = 0;
  double gap = 0;
  double e_corr = 0;
  int scf_iterations = 0;
  int cc_iterations = 0;
  AmplitudeSet amplitudes;
  std::string config_echo;  // one line, free form

  std::size_t n_basis() const { return static_cast<std::size_t>(S.rows()); }
  std::size_t n_occ() const { return static_cast<std::size_t>(n_electrons / 2); }
  TransformPair transform_pair() const { return TransformPair::from_spatial(S, C, n_occ()); }
};

/// Serialized container bytes (deterministic for identical input).
std::string serialize_snapshot(const Snapshot& s);
/// Parses and validates container bytes. `origin` names the source in
/// diagnostics.
Snapshot parse_snapshot(std::string_view bytes, std::string_view origin = "<memory>");

/// Throws IoFailure.
void write_snapshot(const Snapshot& s, const std::filesystem::path& path);
/// Throws IoFailure, CorruptContainer, VersionMismatch, InvariantViolation.
Snapshot read_snapshot(const std::filesystem::path& path);

/// Checks the physical invariants enforced on load.
void validate_snapshot(const Snapshot& s, std::string_view origin);

struct SnapshotManifest {
  std::uint64_t trajectory_checksum = 0;
  std::uint64_t basis_checksum = 0;
  int n_electrons = 0;
  std::vector<double> nodes;       // ascending
  std::vector<std::string> files;  // relative to the manifest directory

  std::size_t size() const { return nodes.size(); }
};

void write_manifest(const SnapshotManifest& m, const std::filesystem::path& dir);
/// Reads `dir/manifest.txt`. With `verify`, every referenced snapshot is
/// loaded and its mu compared to the node list.
SnapshotManifest read_manifest(const std::filesystem::path& dir, bool verify = true);
std::vector<Snapshot> load_snapshots(const SnapshotManifest& m, const std::filesystem::path& dir);

/// Validates every `*.snap` file in `dir` as one node set (same basis
/// checksum, electron count and basis size; ascending unique mu), writes
/// the manifest and returns it. Throws InconsistentSet naming the offending
/// pair.
SnapshotManifest ingest_external(const std::filesystem::path& dir);

/// Conventional file name for node k: node_<k>.snap, zero padded.
std::string snapshot_file_name(std::size_t k);

}  // namespace ccinterp
