#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccinterp/hash.hpp"
#include "support.hpp"

using namespace ccinterp::test;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CCINTERP_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.output.append(buf, n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string path(const std::string& rel) { return data_path(rel).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("ccinterp_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

double value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST(Cli, ScfAndCcsdOnH2) {
  const auto scf = run("scf --geometry " + path("geometries/h2.xyz") + " --basis " + path("basis/sto-3g.gbs"));
  ASSERT_EQ(scf.exit_code, 0) << scf.output;
  EXPECT_NEAR(value_after(scf.output, "E_hf"), scalar(load_fixture("h2_sto3g"), "e_hf"), 1e-8);

  const auto cc = run("ccsd --geometry " + path("geometries/h2.xyz") + " --basis " + path("basis/sto-3g.gbs"));
  ASSERT_EQ(cc.exit_code, 0) << cc.output;
  EXPECT_NEAR(value_after(cc.output, "E_ccsd"), scalar(load_fixture("h2_sto3g"), "e_fci"), 1e-8);
}

TEST(Cli, InputErrorsExitTwo) {
  const auto bad_basis = run("scf --geometry " + path("geometries/h2.xyz") + " --basis /nonexistent/basis.gbs");
  EXPECT_EQ(bad_basis.exit_code, 2) << bad_basis.output;
  const auto open_shell =
      run("ccsd --geometry " + path("geometries/oh_radical.xyz") + " --basis " + path("basis/sto-3g.gbs"));
  EXPECT_EQ(open_shell.exit_code, 2);
  EXPECT_NE(open_shell.output.find("closed shell required"), std::string::npos) << open_shell.output;
  EXPECT_EQ(run("scf --basis " + path("basis/sto-3g.gbs")).exit_code, 2);
  EXPECT_EQ(run("no-such-command").exit_code, 2);
  EXPECT_EQ(run("--help").exit_code, 0);
}

TEST(Cli, NumericalFailuresExitThree) {
  const auto dir = scratch("numerical");
  std::ofstream(dir / "one_iter.cfg") << "scf.max_iter = 1\n";
  const auto r = run("scf --geometry " + path("geometries/water.xyz") + " --basis " + path("basis/sto-3g.gbs") +
                     " --config " + (dir / "one_iter.cfg").string());
  EXPECT_EQ(r.exit_code, 3) << r.output;
  EXPECT_NE(r.output.find("ScfNotConverged"), std::string::npos) << r.output;

  std::ofstream(dir / "wide_gap.cfg") << "scf.gap_min = 5\n";
  const auto g = run("offline --trajectory " + path("trajectories/h4_breathing.traj") + " --basis " +
                     path("basis/sto-3g.gbs") + " --nodes 2 --out " + (dir / "out").string() + " --config " +
                     (dir / "wide_gap.cfg").string());
  EXPECT_EQ(g.exit_code, 3) << g.output;
  EXPECT_NE(g.output.find("GapCollapse"), std::string::npos) << g.output;
  EXPECT_NE(g.output.find("node "), std::string::npos) << g.output;
}

TEST(Cli, OfflineIsReproducible) {
  const auto a = scratch("offline_a"), b = scratch("offline_b");
  const std::string common =
      "offline --trajectory " + path("trajectories/h4_breathing.traj") + " --basis " + path("basis/sto-3g.gbs") +
      " --config " + path("configs/study.cfg") + " --nodes 4 --out ";
  ASSERT_EQ(run(common + a.string()).exit_code, 0);
  ASSERT_EQ(run(common + b.string()).exit_code, 0);
  std::size_t snaps = 0;
  for (const auto& e : fs::directory_iterator(a / "d4")) {
    if (e.path().extension() == ".snap") ++snaps;
    EXPECT_EQ(ccinterp::fnv1a64(slurp(e.path())), ccinterp::fnv1a64(slurp(b / "d4" / e.path().filename())))
        << e.path();
  }
  EXPECT_EQ(snaps, 4u);
  EXPECT_TRUE(fs::exists(a / "d4" / "manifest.txt"));
}

TEST(Cli, DecayWritesCsvWithChecksumHeader) {
  const auto dir = scratch("decay");
  const auto r = run("decay --trajectory " + path("trajectories/h4_breathing.traj") + " --basis " +
                     path("basis/sto-3g.gbs") + " --config " + path("configs/study.cfg") +
                     " --nodes 2,4 --grid 8 --out " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto csv = slurp(dir / "decay.csv");
  EXPECT_EQ(csv.rfind("# config_checksum=", 0), 0u);
  EXPECT_NE(csv.find("\nd,E_MLE,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "decay.svg"));
  EXPECT_TRUE(fs::exists(dir / "decay_bound.csv"));
  EXPECT_TRUE(fs::exists(dir / "d4" / "manifest.txt"));
}
