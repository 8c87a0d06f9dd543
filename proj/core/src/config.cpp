#include "ccinterp/config.hpp"

#include <charconv>
#include <sstream>

#include "ccinterp/errors.hpp"
#include "ccinterp/geometry.hpp"
#include "ccinterp/hash.hpp"

namespace ccinterp {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T number(std::string_view key, std::string_view v) {
  v = trim(v);
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ParseError("invalid value '" + std::string(v) + "' for " + std::string(key));
  }
  return out;
}

double positive(std::string_view key, std::string_view v) {
  const double x = number<double>(key, v);
  if (!(x > 0.0)) throw ParseError(std::string(key) + " must be positive");
  return x;
}

int count(std::string_view key, std::string_view v, int min) {
  const int x = number<int>(key, v);
  if (x < min) throw ParseError(std::string(key) + " must be at least " + std::to_string(min));
  return x;
}

}  // namespace

std::vector<std::size_t> parse_node_list(std::string_view text) {
  text = trim(text);
  std::vector<std::size_t> out;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::size_t> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto c = text.find(':', pos);
      const auto tok = text.substr(pos, c == std::string_view::npos ? text.size() - pos : c - pos);
      parts.push_back(number<std::size_t>("nodes", tok));
      if (c == std::string_view::npos) break;
      pos = c + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) throw ParseError("node range must be start:stop[:step]");
    const std::size_t step = parts.size() == 3 ? parts[2] : 1;
    if (step == 0) throw ParseError("node range step must be positive");
    for (std::size_t d = parts[0]; d <= parts[1]; d += step) out.push_back(d);
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto c = text.find(',', pos);
      const auto tok = text.substr(pos, c == std::string_view::npos ? text.size() - pos : c - pos);
      out.push_back(number<std::size_t>("nodes", tok));
      if (c == std::string_view::npos) break;
      pos = c + 1;
    }
  }
  if (out.empty()) throw ParseError("empty node list");
  return out;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "scf.tol_grad") scf.tol_grad = positive(key, value);
  else if (key == "scf.tol_e") scf.tol_e = positive(key, value);
  else if (key == "scf.max_iter") scf.max_iter = count(key, value, 1);
  else if (key == "scf.diis_dim") scf.diis_dim = count(key, value, 0);
  else if (key == "scf.gap_min") scf.gap_min = positive(key, value);
  else if (key == "cc.tol_r") cc.tol_r = positive(key, value);
  else if (key == "cc.tol_e") cc.tol_e = positive(key, value);
  else if (key == "cc.max_iter") cc.max_iter = count(key, value, 1);
  else if (key == "cc.diis_dim") cc.diis_dim = count(key, value, 0);
  else if (key == "cc.guess") {
    if (value == "mp2") cc.guess = CcGuess::Mp2;
    else if (value == "supplied") cc.guess = CcGuess::Supplied;
    else throw ParseError("cc.guess must be mp2 or supplied, got '" + std::string(value) + "'");
  } else if (key == "nodes") nodes = parse_node_list(value);
  else if (key == "grid") grid = static_cast<std::size_t>(count(key, value, 2));
  else if (key == "charge") charge = number<int>(key, value);
  else throw ParseError("unknown config key '" + std::string(key) + "'");
}

std::string RunConfig::echo() const {
  std::string s = "scf.tol_grad=" + exact(scf.tol_grad) + " scf.tol_e=" + exact(scf.tol_e) +
                  " scf.max_iter=" + std::to_string(scf.max_iter) +
                  " scf.diis_dim=" + std::to_string(scf.diis_dim) + " scf.gap_min=" + exact(scf.gap_min) +
                  " cc.tol_r=" + exact(cc.tol_r) + " cc.tol_e=" + exact(cc.tol_e) +
                  " cc.max_iter=" + std::to_string(cc.max_iter) +
                  " cc.diis_dim=" + std::to_string(cc.diis_dim) +
                  " cc.guess=" + (cc.guess == CcGuess::Mp2 ? "mp2" : "supplied") + " nodes=";
  for (std::size_t k = 0; k < nodes.size(); ++k) s += (k ? "," : "") + std::to_string(nodes[k]);
  s += " grid=" + std::to_string(grid) + " charge=" + std::to_string(charge);
  return s;
}

std::uint64_t RunConfig::checksum() const { return fnv1a64(echo()); }

void RunConfig::validate() const {
  if (grid < 2) throw ParseError("grid must be at least 2");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] == 0) throw ParseError("node counts must be positive");
    if (k > 0 && nodes[k] <= nodes[k - 1]) throw ParseError("node counts must be ascending");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = line;
    if (const auto h = v.find('#'); h != std::string_view::npos) v = v.substr(0, h);
    v = trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      base.set(v.substr(0, eq), v.substr(eq + 1));
    } catch (Error& e) {
      e.add_context("line " + std::to_string(lineno));
      throw;
    }
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  try {
    return parse_config(read_text_file(path), std::move(base));
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

}  // namespace ccinterp
