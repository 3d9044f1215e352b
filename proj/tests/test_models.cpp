#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "lowcolor/models.hpp"
#include "lowcolor/stats.hpp"

using namespace lowcolor;

namespace {

double density(const PM1Graph& g) { return static_cast<double>(g.edge_count()) / static_cast<double>(num_pairs(g.n())); }

// Mean density over `trials` draws and its standard error from the spread.
template <class Sampler>
std::pair<double, double> density_and_se(Sampler&& s, int trials) {
  std::vector<double> xs;
  for (int t = 0; t < trials; ++t) xs.push_back(density(s(sub_seed(2024, t))));
  auto m = sample_moments(xs);
  return {m.mean, std::sqrt(m.var / trials)};
}

}  // namespace

TEST(Gnp, DeterministicAndFair) {
  EXPECT_EQ(sample_gnp_half(1, 3).signs().size(), 0u);
  EXPECT_EQ(sample_gnp_half(50, 3), sample_gnp_half(50, 3));
  EXPECT_NE(sample_gnp_half(50, 3), sample_gnp_half(50, 4));
  auto [d, se] = density_and_se([](Seed s) { return sample_gnp_half(400, s); }, 200);
  EXPECT_NEAR(d, 0.5, 3 * se);
}

TEST(Mc, SingleLabelIsComplete) {
  auto s = sample_mc(30, 1, 5);
  EXPECT_EQ(s.graph, PM1Graph::complete(30));
  EXPECT_TRUE(truth_consistent(s));
}

TEST(Mc, EdgeMarginal) {
  auto [d, se] = density_and_se([](Seed s) { return sample_mc(500, 10, s).graph; }, 40);
  EXPECT_NEAR(d, 0.5 + 1.0 / 20, 3 * se);
}

TEST(Mc, TruthConsistentOnEveryDraw) {
  for (int t = 0; t < 30; ++t) {
    auto s = sample_mc(60, 1 + t % 7, sub_seed(11, t));
    ASSERT_TRUE(truth_consistent(s));
    for (int l : s.cliques()->labels) ASSERT_NE(l, kNoLabel);
  }
}

TEST(Mc, PairMarginalOverManyPairDraws) {
  // 10^4 independent pair draws: pair (0,1) of 10^4 small graphs.
  int plus = 0;
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) plus += sample_mc(2, 4, sub_seed(77, t)).graph.sign(0) == 1;
  const double p = 0.5 + 1.0 / 8;
  EXPECT_NEAR(plus / double(draws), p, 3 * std::sqrt(p * (1 - p) / draws));
}

TEST(McPartial, ExactBlocks) {
  auto s = sample_mc_partial(100, 4, 0.2, 3);
  const auto& c = *s.cliques();
  EXPECT_EQ(c.unlabeled().size(), 20u);
  auto cls = c.classes();
  ASSERT_EQ(cls.size(), 4u);
  for (const auto& k : cls) EXPECT_EQ(k.size(), 20u);
  EXPECT_TRUE(truth_consistent(s));
}

TEST(McPartial, FullCoverAndSingleBlock) {
  auto s = sample_mc_partial(60, 3, 0.0, 1);
  EXPECT_TRUE(s.cliques()->unlabeled().empty());
  for (const auto& k : s.cliques()->classes()) EXPECT_EQ(k.size(), 20u);
  EXPECT_EQ(sample_mc_partial(20, 1, 0.0, 2).graph, PM1Graph::complete(20));
}

TEST(McPartial, RejectsNonIntegerCliqueSize) {
  EXPECT_THROW(sample_mc_partial(100, 3, 0.0, 1), ParameterError);
  EXPECT_THROW(sample_mc_partial(100, 4, 1.0, 1), ParameterError);
  EXPECT_EQ(clique_size_from_delta(1300, 5, 700.0 / 1300.0), 120);
}

TEST(Pc, Cases) {
  EXPECT_EQ(sample_pc(25, 25, 1).graph, PM1Graph::complete(25));
  auto s = sample_pc(200, 50, 9);
  auto cls = s.cliques()->classes();
  ASSERT_EQ(cls.size(), 1u);
  ASSERT_EQ(cls[0].size(), 50u);
  for (std::size_t a = 0; a < cls[0].size(); ++a)
    for (std::size_t b = a + 1; b < cls[0].size(); ++b) ASSERT_TRUE(s.graph.has_edge(cls[0][a], cls[0][b]));
  EXPECT_THROW(sample_pc(10, 11, 1), ParameterError);
  EXPECT_THROW(sample_pc(10, 0, 1), ParameterError);
}

TEST(Pc, SingleVertexCliqueIsFairCoins) {
  auto [d, se] = density_and_se([](Seed s) { return sample_pc(300, 1, s).graph; }, 50);
  EXPECT_NEAR(d, 0.5, 3 * se);
}

TEST(Quiet, SingleLabelIsEmpty) { EXPECT_EQ(sample_quiet(20, 1, 4).graph, PM1Graph::empty(20)); }

TEST(Quiet, RulesHoldOnEveryDraw) {
  for (int t = 0; t < 20; ++t) {
    auto s = sample_quiet(80, 2 + t % 5, sub_seed(8, t));
    ASSERT_TRUE(truth_consistent(s));
    const auto& pr = s.quiet()->pairs;
    for (Vertex i = 0; i < 80; ++i)
      for (Vertex j = i + 1; j < 80; ++j) {
        if (pr[i].a == pr[j].a) {
          ASSERT_FALSE(s.graph.has_edge(i, j));
        } else if (pr[i].b == pr[j].b) {
          ASSERT_TRUE(s.graph.has_edge(i, j));
        }
      }
  }
}

TEST(Quiet, EdgeMarginal) {
  auto [d, se] = density_and_se([](Seed s) { return sample_quiet(400, 4, s).graph; }, 40);
  EXPECT_NEAR(d, 0.5 - 1.0 / 32, 3 * se);
}

TEST(EdgeCorrected, CrossProbability) {
  EXPECT_DOUBLE_EQ(edge_corrected_cross_probability(2), 0.0);
  EXPECT_NEAR(edge_corrected_cross_probability(4), 1.0 / 3, 1e-15);
  EXPECT_THROW(edge_corrected_cross_probability(1), ParameterError);
}

TEST(EdgeCorrected, BipartiteAtTwoLabels) {
  auto s = sample_edge_corrected(40, 2, 3);
  const auto& l = s.cliques()->labels;
  for (Vertex i = 0; i < 40; ++i)
    for (Vertex j = i + 1; j < 40; ++j) ASSERT_EQ(s.graph.has_edge(i, j), l[i] == l[j]);
}

TEST(EdgeCorrected, MarginalIsOneHalf) {
  auto [d, se] = density_and_se([](Seed s) { return sample_edge_corrected(400, 4, s).graph; }, 40);
  EXPECT_NEAR(d, 0.5, 3 * se);
}

TEST(Samplers, DeterministicGivenSeed) {
  for (const char* spec : {"gnp", "mc:5", "mcp:3:10", "pc:12", "quiet:3", "ec:4"}) {
    auto m = ModelSpec::parse(spec);
    auto a = sample_model(m, 40, 17), b = sample_model(m, 40, 17);
    EXPECT_EQ(a.graph, b.graph) << spec;
    EXPECT_TRUE(truth_consistent(a)) << spec;
    EXPECT_EQ(m.str(), spec);
  }
}

TEST(ModelSpec, RejectsMalformed) {
  for (const char* bad : {"", "mc", "mc:x", "mc:3:4", "mcp:3", "zz:1", "pc:3x"})
    EXPECT_THROW(ModelSpec::parse(bad), ParameterError) << bad;
}

TEST(Samplers, ParameterErrors) {
  EXPECT_THROW(sample_mc(0, 2, 1), ParameterError);
  EXPECT_THROW(sample_mc(10, 0, 1), ParameterError);
  EXPECT_THROW(sample_quiet(10, 0, 1), ParameterError);
  EXPECT_THROW(sample_gnp_half(0, 1), ParameterError);
  EXPECT_THROW(sample_mc_partial_k(10, 3, 4, 1), ParameterError);
}
