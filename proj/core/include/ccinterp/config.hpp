#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ccinterp/ccsd.hpp"
#include "ccinterp/scf.hpp"

namespace ccinterp {

/// Solver and experiment settings read from a `key = value` file.
///
///   scf.tol_grad, scf.tol_e, scf.max_iter, scf.diis_dim, scf.gap_min
///   cc.tol_r, cc.tol_e, cc.max_iter, cc.diis_dim, cc.guess (mp2|supplied)
///   nodes   comma list "2,4,6" or range "2:12:2"
///   grid    test-grid size (>= 2)
///   charge  molecular charge
///
/// '#' starts a comment. Unknown keys and malformed values raise ParseError.
struct RunConfig {
  ScfConfig scf;
  CcConfig cc;
  std::vector<std::size_t> nodes = {2, 4, 6, 8, 10, 12};
  std::size_t grid = 50;
  int charge = 0;

  /// Applies one assignment; throws ParseError.
  void set(std::string_view key, std::string_view value);
  /// Canonical `key=value` list, one line.
  std::string echo() const;
  std::uint64_t checksum() const;
  /// Throws ParseError if node counts are not positive ascending or grid < 2.
  void validate() const;
};

RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// "2,4,6" or "start:stop[:step]" (inclusive).
std::vector<std::size_t> parse_node_list(std::string_view text);

}  // namespace ccinterp
