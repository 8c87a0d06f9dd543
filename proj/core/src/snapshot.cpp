#include "ccinterp/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"

namespace ccinterp {

namespace {

namespace fs = std::filesystem;

struct ArrayDecl {
  std::string name;
  std::size_t offset = 0;
  std::vector<std::size_t> dims;

  std::size_t count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
};

void put_le(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

double get_le(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  }
  return std::bit_cast<double>(bits);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, std::string_view what, std::string_view origin) {
  T v{};
  tok = trim(tok);
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw CorruptContainer(std::string(origin) + ": bad value '" + std::string(tok) + "' for " +
                           std::string(what));
  }
  return v;
}

std::uint64_t parse_hex(std::string_view tok, std::string_view what, std::string_view origin) {
  std::uint64_t v = 0;
  tok = trim(tok);
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v, 16);
  if (ec != std::errc() || ptr != end || tok.empty()) {
    throw CorruptContainer(std::string(origin) + ": bad hex value '" + std::string(tok) +
                           "' for " + std::string(what));
  }
  return v;
}

void add_array(std::string& header, std::string& payload, const std::string& name,
               const double* data, std::vector<std::size_t> dims) {
  header += "array " + name + " " + std::to_string(payload.size());
  std::size_t n = 1;
  for (auto d : dims) {
    header += " " + std::to_string(d);
    n *= d;
  }
  header += "\n";
  for (std::size_t k = 0; k < n; ++k) put_le(payload, data[k]);
}

std::string single_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

}  // namespace

std::string snapshot_file_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "node_%03zu.snap", k);
  return buf;
}

std::string serialize_snapshot(const Snapshot& s) {
  const std::size_t nb = s.n_basis();
  const std::size_t nv = s.amplitudes.n_virt(), no = s.amplitudes.n_occ();
  std::string h;
  h += std::string(kSnapshotMagic) + "\n";
  h += "schema_version " + std::to_string(s.schema_version) + "\n";
  h += "mu " + exact(s.mu) + "\n";
  h += "n_electrons " + std::to_string(s.n_electrons) + "\n";
  h += "n_basis " + std::to_string(nb) + "\n";
  h += "n_occ_so " + std::to_string(no) + "\n";
  h += "n_virt_so " + std::to_string(nv) + "\n";
  h += "basis_name " + single_line(s.basis_name) + "\n";
  h += "basis_checksum " + hex64(s.basis_checksum) + "\n";
  h += "trajectory_checksum " + hex64(s.trajectory_checksum) + "\n";
  h += "e_hf " + exact(s.e_hf) + "\n";
  h += "e_corr " + exact(s.e_corr) + "\n";
  h += "gap " + exact(s.gap) + "\n";
  h += "scf_iterations " + std::to_string(s.scf_iterations) + "\n";
  h += "cc_iterations " + std::to_string(s.cc_iterations) + "\n";
  h += "amplitude_layout " + std::string(kAmplitudeLayout) + "\n";
  h += "config " + single_line(s.config_echo) + "\n";
  for (const auto& a : s.geometry.atoms()) {
    h += "atom " + std::to_string(a.atomic_number) + " " + exact(a.position.x()) + " " +
         exact(a.position.y()) + " " + exact(a.position.z()) + "\n";
  }
  std::string payload;
  // Eigen matrices are column-major; the container stores row-major.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> S = s.S, C = s.C;
  add_array(h, payload, "overlap", S.data(), {nb, nb});
  add_array(h, payload, "coefficients", C.data(), {nb, nb});
  add_array(h, payload, "orbital_energies", s.lambdas.data(), {nb});
  add_array(h, payload, "t1", s.amplitudes.t1.data(), {nv, no});
  add_array(h, payload, "t2", s.amplitudes.t2.data(), {nv, nv, no, no});
  h += "end_header\n";
  return h + payload;
}

Snapshot parse_snapshot(std::string_view bytes, std::string_view origin) {
  const std::string org(origin);
  const auto corrupt = [&](const std::string& msg) { return CorruptContainer(org + ": " + msg); };

  std::size_t pos = 0;
  std::size_t header_end = std::string_view::npos;
  std::vector<std::string_view> lines;
  while (pos < bytes.size()) {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) break;
    const auto line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    if (trim(line) == "end_header") {
      header_end = pos;
      break;
    }
    lines.push_back(line);
  }
  if (header_end == std::string_view::npos) throw corrupt("header not terminated (truncated file?)");
  if (lines.empty() || trim(lines[0]) != kSnapshotMagic) throw corrupt("missing magic line");

  std::map<std::string, std::string, std::less<>> kv;
  std::vector<ArrayDecl> arrays;
  std::vector<Atom> atoms;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto line = trim(lines[k]);
    if (line.empty() || line.front() == '#') continue;
    const auto sp = line.find_first_of(" \t");
    const std::string key(line.substr(0, sp));
    const auto rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
    if (key == "atom") {
      const auto t = split_ws(rest);
      if (t.size() != 4) throw corrupt("atom line needs Z x y z");
      Atom a;
      a.atomic_number = parse_number<int>(t[0], "atom Z", origin);
      a.position = Vec3(parse_number<double>(t[1], "atom x", origin),
                        parse_number<double>(t[2], "atom y", origin),
                        parse_number<double>(t[3], "atom z", origin));
      atoms.push_back(a);
    } else if (key == "array") {
      const auto t = split_ws(rest);
      if (t.size() < 3) throw corrupt("array line needs name, offset and dims");
      ArrayDecl d;
      d.name = std::string(t[0]);
      d.offset = parse_number<std::size_t>(t[1], "array offset", origin);
      for (std::size_t q = 2; q < t.size(); ++q) {
        d.dims.push_back(parse_number<std::size_t>(t[q], "array dim", origin));
      }
      arrays.push_back(std::move(d));
    } else {
      kv[key] = std::string(rest);
    }
  }

  const auto get = [&](std::string_view key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw corrupt("missing key '" + std::string(key) + "'");
    return it->second;
  };
  const auto get_opt = [&](std::string_view key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  Snapshot s;
  s.schema_version = parse_number<int>(get("schema_version"), "schema_version", origin);
  if (s.schema_version != kSnapshotSchemaVersion) {
    throw VersionMismatch(org + ": schema_version " + std::to_string(s.schema_version) +
                          " not supported (expected " + std::to_string(kSnapshotSchemaVersion) + ")");
  }
  s.mu = parse_number<double>(get("mu"), "mu", origin);
  s.n_electrons = parse_number<int>(get("n_electrons"), "n_electrons", origin);
  const auto nb = parse_number<std::size_t>(get("n_basis"), "n_basis", origin);
  const auto no = parse_number<std::size_t>(get("n_occ_so"), "n_occ_so", origin);
  const auto nv = parse_number<std::size_t>(get("n_virt_so"), "n_virt_so", origin);
  s.basis_name = get_opt("basis_name").value_or("");
  s.basis_checksum = parse_hex(get("basis_checksum"), "basis_checksum", origin);
  if (auto v = get_opt("trajectory_checksum")) {
    s.trajectory_checksum = parse_hex(*v, "trajectory_checksum", origin);
  }
  s.e_hf = parse_number<double>(get("e_hf"), "e_hf", origin);
  s.e_corr = parse_number<double>(get("e_corr"), "e_corr", origin);
  s.gap = parse_number<double>(get("gap"), "gap", origin);
  if (auto v = get_opt("scf_iterations")) s.scf_iterations = parse_number<int>(*v, "scf_iterations", origin);
  if (auto v = get_opt("cc_iterations")) s.cc_iterations = parse_number<int>(*v, "cc_iterations", origin);
  s.config_echo = get_opt("config").value_or("");
  if (s.n_electrons <= 0 || s.n_electrons % 2 != 0 || no != static_cast<std::size_t>(s.n_electrons) ||
      no + nv != 2 * nb) {
    throw corrupt("inconsistent counts: n_electrons " + std::to_string(s.n_electrons) +
                  ", n_basis " + std::to_string(nb) + ", n_occ_so " + std::to_string(no) +
                  ", n_virt_so " + std::to_string(nv));
  }
  try {
    s.geometry = Geometry(atoms);
  } catch (const Error& e) {
    throw corrupt(std::string("geometry: ") + e.what());
  }

  const std::string_view payload = bytes.substr(header_end);
  const std::map<std::string, std::vector<std::size_t>> expected = {
      {"overlap", {nb, nb}},
      {"coefficients", {nb, nb}},
      {"orbital_energies", {nb}},
      {"t1", {nv, no}},
      {"t2", {nv, nv, no, no}}};
  std::map<std::string, const ArrayDecl*> found;
  std::size_t total = 0;
  for (const auto& d : arrays) {
    const auto it = expected.find(d.name);
    if (it == expected.end()) throw corrupt("unknown array '" + d.name + "'");
    if (d.dims != it->second) throw corrupt("array '" + d.name + "' has unexpected dimensions");
    if (!found.emplace(d.name, &d).second) throw corrupt("duplicate array '" + d.name + "'");
    const std::size_t nbytes = 8 * d.count();
    if (d.offset > payload.size() || nbytes > payload.size() - d.offset) {
      throw corrupt("array '" + d.name + "' extends past end of file (truncated?)");
    }
    total += nbytes;
  }
  for (const auto& [name, dims] : expected) {
    if (!found.count(name)) throw corrupt("missing array '" + name + "'");
  }
  if (total != payload.size()) {
    throw corrupt("payload is " + std::to_string(payload.size()) + " bytes, arrays declare " +
                  std::to_string(total));
  }
  const auto read = [&](const std::string& name, double* dst) {
    const auto* d = found.at(name);
    for (std::size_t k = 0; k < d->count(); ++k) dst[k] = get_le(payload.data() + d->offset + 8 * k);
  };
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> S(nb, nb), C(nb, nb);
  read("overlap", S.data());
  read("coefficients", C.data());
  s.S = S;
  s.C = C;
  s.lambdas.resize(static_cast<Eigen::Index>(nb));
  read("orbital_energies", s.lambdas.data());
  s.amplitudes = AmplitudeSet::zeros(nv, no);
  read("t1", s.amplitudes.t1.data());
  read("t2", s.amplitudes.t2.data());

  validate_snapshot(s, origin);
  return s;
}

void validate_snapshot(const Snapshot& s, std::string_view origin) {
  const std::string org(origin);
  const auto finite = [](const auto& m) { return m.allFinite(); };
  if (!finite(s.S) || !finite(s.C) || !finite(s.lambdas)) {
    throw InvariantViolation(org + ": non-finite matrix entries");
  }
  for (double x : s.amplitudes.t1.flat()) {
    if (!std::isfinite(x)) throw InvariantViolation(org + ": non-finite t1 entries");
  }
  for (double x : s.amplitudes.t2.flat()) {
    if (!std::isfinite(x)) throw InvariantViolation(org + ": non-finite t2 entries");
  }
  const Matrix I = Matrix::Identity(s.C.cols(), s.C.cols());
  const double ortho = (s.C.transpose() * s.S * s.C - I).cwiseAbs().maxCoeff();
  if (!(ortho <= kSnapshotOrthonormalityTol)) {
    throw InvariantViolation(org + ": orthonormality C^T S C = I violated, residual " + exact(ortho));
  }
  const double anti = s.amplitudes.antisymmetry_violation();
  if (!(anti <= kSnapshotAntisymmetryTol)) {
    throw InvariantViolation(org + ": t2 antisymmetry violated, residual " + exact(anti));
  }
  if (!(s.gap > 0.0)) {
    throw InvariantViolation(org + ": HOMO-LUMO gap must be positive, got " + exact(s.gap));
  }
}

void write_snapshot(const Snapshot& s, const std::filesystem::path& path) {
  const std::string bytes = serialize_snapshot(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoFailure("write to '" + path.string() + "' failed");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_snapshot(ss.str(), path.string());
}

void write_manifest(const SnapshotManifest& m, const std::filesystem::path& dir) {
  std::string t;
  t += std::string(kManifestMagic) + " " + std::to_string(kSnapshotSchemaVersion) + "\n";
  t += "trajectory_checksum " + hex64(m.trajectory_checksum) + "\n";
  t += "basis_checksum " + hex64(m.basis_checksum) + "\n";
  t += "n_electrons " + std::to_string(m.n_electrons) + "\n";
  t += "nodes " + std::to_string(m.nodes.size()) + "\n";
  for (std::size_t k = 0; k < m.nodes.size(); ++k) {
    t += "node " + exact(m.nodes[k]) + " " + m.files[k] + "\n";
  }
  const auto path = dir / kManifestFile;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path.string() + "' for writing");
  out << t;
  if (!out) throw IoFailure("write to '" + path.string() + "' failed");
}

SnapshotManifest read_manifest(const std::filesystem::path& dir, bool verify) {
  const auto path = dir / kManifestFile;
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path.string() + "'");
  const std::string org = path.string();
  SnapshotManifest m;
  std::string line;
  std::size_t declared = 0;
  bool magic = false;
  while (std::getline(in, line)) {
    const auto t = split_ws(trim(line));
    if (t.empty() || t[0].front() == '#') continue;
    if (!magic) {
      if (t.size() != 2 || t[0] != kManifestMagic) throw CorruptContainer(org + ": missing magic line");
      if (parse_number<int>(t[1], "manifest version", org) != kSnapshotSchemaVersion) {
        throw VersionMismatch(org + ": unsupported manifest version " + std::string(t[1]));
      }
      magic = true;
    } else if (t[0] == "trajectory_checksum" && t.size() == 2) {
      m.trajectory_checksum = parse_hex(t[1], "trajectory_checksum", org);
    } else if (t[0] == "basis_checksum" && t.size() == 2) {
      m.basis_checksum = parse_hex(t[1], "basis_checksum", org);
    } else if (t[0] == "n_electrons" && t.size() == 2) {
      m.n_electrons = parse_number<int>(t[1], "n_electrons", org);
    } else if (t[0] == "nodes" && t.size() == 2) {
      declared = parse_number<std::size_t>(t[1], "nodes", org);
    } else if (t[0] == "node" && t.size() == 3) {
      m.nodes.push_back(parse_number<double>(t[1], "node mu", org));
      m.files.emplace_back(t[2]);
    } else {
      throw CorruptContainer(org + ": unrecognized line '" + line + "'");
    }
  }
  if (!magic) throw CorruptContainer(org + ": empty manifest");
  if (declared != m.nodes.size()) {
    throw CorruptContainer(org + ": declares " + std::to_string(declared) + " nodes, lists " +
                           std::to_string(m.nodes.size()));
  }
  for (std::size_t k = 1; k < m.nodes.size(); ++k) {
    if (!(m.nodes[k] > m.nodes[k - 1])) {
      throw InconsistentSet(org + ": nodes not strictly ascending at " + m.files[k - 1] + ", " +
                            m.files[k]);
    }
  }
  if (verify) (void)load_snapshots(m, dir);
  return m;
}

std::vector<Snapshot> load_snapshots(const SnapshotManifest& m, const std::filesystem::path& dir) {
  std::vector<Snapshot> out;
  out.reserve(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    auto s = read_snapshot(dir / m.files[k]);
    if (s.mu != m.nodes[k]) {
      throw InconsistentSet(m.files[k] + ": mu " + exact(s.mu) + " differs from manifest node " +
                            exact(m.nodes[k]));
    }
    if (s.basis_checksum != m.basis_checksum || s.n_electrons != m.n_electrons) {
      throw InconsistentSet(m.files[k] + ": basis checksum or electron count differs from manifest");
    }
    out.push_back(std::move(s));
  }
  return out;
}

SnapshotManifest ingest_external(const std::filesystem::path& dir) {
  if (!fs::is_directory(dir)) throw IoFailure("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".snap") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InconsistentSet("no .snap files in '" + dir.string() + "'");

  struct Entry {
    fs::path path;
    Snapshot snap;
  };
  std::vector<Entry> entries;
  for (const auto& f : files) entries.push_back({f, read_snapshot(f)});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.snap.mu < b.snap.mu; });

  const auto& first = entries.front();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const auto pair = first.path.filename().string() + " vs " + e.path.filename().string();
    if (e.snap.basis_checksum != first.snap.basis_checksum) {
      throw InconsistentSet("basis checksum differs: " + pair);
    }
    if (e.snap.n_electrons != first.snap.n_electrons) {
      throw InconsistentSet("electron count differs: " + pair);
    }
    if (e.snap.n_basis() != first.snap.n_basis()) throw InconsistentSet("basis size differs: " + pair);
    if (k > 0 && !(e.snap.mu > entries[k - 1].snap.mu)) {
      throw InconsistentSet("duplicate mu " + exact(e.snap.mu) + ": " +
                            entries[k - 1].path.filename().string() + " vs " +
                            e.path.filename().string());
    }
  }

  SnapshotManifest m;
  m.trajectory_checksum = first.snap.trajectory_checksum;
  m.basis_checksum = first.snap.basis_checksum;
  m.n_electrons = first.snap.n_electrons;
  for (const auto& e : entries) {
    m.nodes.push_back(e.snap.mu);
    m.files.push_back(e.path.filename().string());
  }
  write_manifest(m, dir);
  return m;
}

}  // namespace ccinterp
