#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ccinterp/config.hpp"
#include "ccinterp/errors.hpp"
#include "ccinterp/hash.hpp"
#include "ccinterp/report.hpp"
#include "support.hpp"

using namespace ccinterp;
using namespace ccinterp::test;

TEST(Config, ParsesKeysCommentsAndRanges) {
  const auto c = parse_config(
      "# study settings\n"
      "scf.tol_grad = 1e-11\n"
      "cc.max_iter=250   # trailing comment\n"
      "cc.guess = supplied\n"
      "nodes = 2:8:3\n"
      "\n"
      "grid = 17\n"
      "charge = -1\n");
  EXPECT_EQ(c.scf.tol_grad, 1e-11);
  EXPECT_EQ(c.cc.max_iter, 250);
  EXPECT_EQ(c.cc.guess, CcGuess::Supplied);
  EXPECT_EQ(c.nodes, (std::vector<std::size_t>{2, 5, 8}));
  EXPECT_EQ(c.grid, 17u);
  EXPECT_EQ(c.charge, -1);
  EXPECT_EQ(c.scf.max_iter, ScfConfig{}.max_iter);
}

TEST(Config, ShippedStudyConfig) {
  const auto c = load_config(data_path("configs/study.cfg"));
  EXPECT_EQ(c.nodes, (std::vector<std::size_t>{2, 4, 6, 8, 10, 12}));
  EXPECT_EQ(c.grid, 50u);
  EXPECT_EQ(c.cc.tol_r, 1e-12);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("bogus = 1\n"), ParseError);
  EXPECT_THROW(parse_config("scf.tol_grad = -1\n"), ParseError);
  EXPECT_THROW(parse_config("scf.max_iter = 3.5\n"), ParseError);
  EXPECT_THROW(parse_config("grid = 1\n"), ParseError);
  EXPECT_THROW(parse_config("nodes = 4,2\n"), ParseError);
  EXPECT_THROW(parse_config("nodes = 0,2\n"), ParseError);
  EXPECT_THROW(parse_config("just text\n"), ParseError);
  EXPECT_THROW(parse_config("cc.guess = hf\n"), ParseError);
  try {
    parse_config("grid = 4\nwhat = 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_config(data_path("configs/missing.cfg")), IoFailure);
}

TEST(Config, NodeLists) {
  EXPECT_EQ(parse_node_list("2,4,6"), (std::vector<std::size_t>{2, 4, 6}));
  EXPECT_EQ(parse_node_list("3:5"), (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_EQ(parse_node_list(" 7 "), (std::vector<std::size_t>{7}));
  EXPECT_THROW(parse_node_list("2:4:0"), ParseError);
  EXPECT_THROW(parse_node_list("1:2:3:4"), ParseError);
  EXPECT_THROW(parse_node_list("a,b"), ParseError);
}

TEST(Config, EchoAndChecksumTrackSettings) {
  RunConfig a, b;
  EXPECT_EQ(a.checksum(), b.checksum());
  b.set("grid", "51");
  EXPECT_NE(a.checksum(), b.checksum());
  EXPECT_NE(b.echo().find("grid=51"), std::string::npos);
  EXPECT_EQ(b.checksum(), fnv1a64(b.echo()));
  EXPECT_EQ(b.echo().find('\n'), std::string::npos);
}

TEST(Csv, HeaderCommentAndRows) {
  CsvTable t;
  t.columns = {"d", "E_MLE"};
  t.add_row({cell(2), cell(-2.5)});
  t.add_row({cell(std::size_t{4}), cell(std::numeric_limits<double>::quiet_NaN())});
  EXPECT_EQ(t.render(0xabcULL), "# config_checksum=0000000000000abc\nd,E_MLE\n2,-2.5\n4,nan\n");
  EXPECT_THROW(t.add_row({"1"}), ShapeMismatch);
  EXPECT_EQ(cell(1.0 / 3.0), "0.3333333333");
}

TEST(Svg, RendersSeriesAndSkipsNonpositiveOnLogScale) {
  PlotSpec p;
  p.title = "decay <test>";
  p.x_label = "mu";
  p.y_label = "E";
  p.log_y = true;
  p.series.push_back({"d=2", {0.0, 0.5, 1.0}, {1e-3, 0.0, 1e-5}, true});
  const auto svg = render_svg(p);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("decay &lt;test&gt;"), std::string::npos);
  EXPECT_NE(svg.find("d=2"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}
