#include <gtest/gtest.h>

#include <sstream>

#include "lowcolor/io.hpp"
#include "lowcolor/models.hpp"

using namespace lowcolor;

TEST(GraphText, RoundTripIsBitExact) {
  for (int t = 0; t < 10; ++t) {
    auto g = sample_gnp_half(1 + 7 * t, sub_seed(3, t));
    std::stringstream ss;
    write_graph(ss, g);
    EXPECT_EQ(read_graph(ss), g);
  }
}

TEST(GraphText, ParsesCommentsAndAbsentPairs) {
  std::istringstream in("# a comment\nn 4\n0 1\n\n# another\n2 3\n");
  auto g = read_graph(in);
  EXPECT_EQ(g.n(), 4);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(2, 3));
  EXPECT_EQ(g.edge_count(), 2);
}

TEST(GraphText, RejectsMalformed) {
  for (const char* bad : {"0 1\n", "n 3\n1 0\n", "n 3\n0 3\n", "n 3\n0 1\n0 1\n", "n 3\n0 1 2\n", "n x\n",
                          "n 3\nfoo\n", ""}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_graph(in), FormatError) << bad;
  }
}

TEST(TruthText, CliqueRoundTrip) {
  auto s = sample_mc_partial(30, 3, 0.5, 2);
  std::stringstream ss;
  write_truth(ss, s);
  auto t = read_truth(ss, 30);
  ASSERT_TRUE(std::holds_alternative<CliqueLabeling>(t));
  EXPECT_EQ(std::get<CliqueLabeling>(t).labels, s.cliques()->labels);
  EXPECT_NE(ss.str().find("none"), std::string::npos);
}

TEST(TruthText, QuietRoundTrip) {
  auto s = sample_quiet(25, 4, 8);
  std::stringstream ss;
  write_truth(ss, s);
  auto t = read_truth(ss, 25);
  ASSERT_TRUE(std::holds_alternative<QuietLabels>(t));
  EXPECT_EQ(std::get<QuietLabels>(t).pairs, s.quiet()->pairs);
}

TEST(TruthText, RejectsMalformed) {
  for (const char* bad : {"label 0 1\n", "kind clique 2\nlabel 0 2\nlabel 1 0\n", "kind clique 2\nlabel 0 0\n",
                          "kind clique 2\nlabel 0 0\nlabel 0 1\n", "kind quiet 2\nlabel 0 0\nlabel 1 0 5\n",
                          "kind odd 2\n", "kind clique 2\nlabel 5 0\nlabel 1 0\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_truth(in, 2), FormatError) << bad;
  }
}
