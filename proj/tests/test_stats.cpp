#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lowcolor/colorability.hpp"
#include "lowcolor/models.hpp"
#include "lowcolor/stats.hpp"

using namespace lowcolor;

namespace {

PM1Graph random_graph(int n, Seed s) { return sample_gnp_half(n, s); }

std::int64_t brute_triangles(const PM1Graph& g) {
  std::int64_t s = 0;
  for (int a = 0; a < g.n(); ++a)
    for (int b = a + 1; b < g.n(); ++b)
      for (int c = b + 1; c < g.n(); ++c) s += g.sign(a, b) * g.sign(b, c) * g.sign(a, c);
  return s;
}

// Each 4-set {a<b<c<d} carries three cycles: abcd, abdc, acbd.
std::int64_t brute_four_cycles(const PM1Graph& g) {
  std::int64_t s = 0;
  const int n = g.n();
  auto y = [&](int i, int j) { return static_cast<int>(g.sign(i, j)); };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d)
          s += y(a, b) * y(b, c) * y(c, d) * y(d, a) + y(a, b) * y(b, d) * y(d, c) * y(c, a) +
               y(a, c) * y(c, b) * y(b, d) * y(d, a);
  return s;
}

}  // namespace

TEST(SignedEdges, Extremes) {
  EXPECT_EQ(signed_edge_count(PM1Graph::complete(4)), 6);
  EXPECT_EQ(signed_edge_count(PM1Graph::empty(4)), -6);
}

TEST(SignedTriangles, Extremes) {
  EXPECT_EQ(signed_triangle_count(PM1Graph::complete(3)), 1);
  EXPECT_EQ(signed_triangle_count(PM1Graph::empty(3)), -1);
  EXPECT_EQ(signed_triangle_count(PM1Graph::empty(2)), 0);
}

TEST(SignedFourCycles, Extremes) {
  EXPECT_EQ(signed_four_cycle_count(PM1Graph::empty(4)), 3);
  EXPECT_EQ(signed_four_cycle_count(PM1Graph::complete(5)), 15);
  EXPECT_EQ(signed_four_cycle_count(PM1Graph::complete(3)), 0);
}

TEST(SubgraphCounts, MatchBruteForce) {
  for (int t = 0; t < 40; ++t) {
    const int n = 4 + t % 12;
    auto g = t % 3 ? random_graph(n, sub_seed(1, t)) : sample_mc(n, 2 + t % 3, sub_seed(2, t)).graph;
    ASSERT_EQ(signed_triangle_count(g), brute_triangles(g)) << n;
    ASSERT_EQ(signed_four_cycle_count(g), brute_four_cycles(g)) << n;
  }
}

TEST(SubgraphCounts, InvariantUnderRelabeling) {
  for (int t = 0; t < 10; ++t) {
    auto g = sample_mc(30, 3, sub_seed(5, t)).graph;
    Rng r(sub_seed(6, t));
    auto perm = r.permutation(30);
    auto h = g.relabeled(perm);
    EXPECT_EQ(signed_edge_count(g), signed_edge_count(h));
    EXPECT_EQ(signed_triangle_count(g), signed_triangle_count(h));
    EXPECT_EQ(signed_four_cycle_count(g), signed_four_cycle_count(h));
  }
}

TEST(SubgraphCounts, NullMeansAreZero) {
  const int trials = 2000;
  std::vector<double> e(trials), tr(trials), c4(trials);
  parallel_for(trials, [&](std::size_t t) {
    auto g = random_graph(100, sub_seed(31, t));
    e[t] = static_cast<double>(signed_edge_count(g));
    tr[t] = static_cast<double>(signed_triangle_count(g));
    c4[t] = static_cast<double>(signed_four_cycle_count(g));
  });
  for (const auto* xs : {&e, &tr, &c4}) {
    auto m = sample_moments(*xs);
    EXPECT_LE(std::abs(m.mean), 3 * std::sqrt(m.var / trials));
  }
}

TEST(TraceStat, EmptyGraphValue) {
  EXPECT_NEAR(spectral_trace_stat(PM1Graph::empty(4), 2, 1), 12.0, 1e-9);
}

TEST(TraceStat, MatchesMatrixPower) {
  auto g = random_graph(12, 3);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) a(i, j) = a(j, i) = -g.sign(i, j);
  Eigen::MatrixXd p = a * a;
  p = p * p;  // A^4
  const double scale = 12.0 / 3 - 1;
  EXPECT_NEAR(spectral_trace_stat(g, 3, 2), p.trace() / std::pow(scale, 4), 1e-9);
}

TEST(TraceStat, AtLeastOneOnEveryTwoColourableSixVertexGraph) {
  for (std::uint64_t x = 0; x < (1u << 15); ++x) {
    auto g = graph_from_mask(6, x);
    if (!is_q_colorable(g, 2)) continue;
    for (int m : {1, 2, 4}) ASSERT_GE(spectral_trace_stat(g, 2, m), 1.0) << x;
  }
}

TEST(TraceStat, SmallOnRandomGraphs) {
  std::vector<double> v(100);
  parallel_for(100, [&](std::size_t t) { v[t] = spectral_trace_stat(random_graph(256, sub_seed(4, t)), 4, 4); });
  std::nth_element(v.begin(), v.begin() + 50, v.end());
  EXPECT_LT(v[50], 0.5);
}

TEST(TraceStat, ParameterErrors) {
  auto g = PM1Graph::empty(5);
  EXPECT_THROW(spectral_trace_stat(g, 5, 1), TraceStatError);
  EXPECT_THROW(spectral_trace_stat(g, 0, 1), TraceStatError);
  EXPECT_THROW(spectral_trace_stat(g, 2, 0), TraceStatError);
}

TEST(Separation, IdenticalSamplersGiveZero) {
  auto stat = [](const PM1Graph& g) { return static_cast<double>(signed_edge_count(g)); };
  auto s = [](Seed seed) { return sample_mc(50, 3, seed).graph; };
  auto r = separation_report(stat, s, s, 20, 1);
  EXPECT_EQ(r.ratio, 0.0);
  EXPECT_EQ(r.values_p, r.values_q);
  EXPECT_EQ(r.trials, 20);
}

TEST(Separation, RatioDefinition) {
  EXPECT_DOUBLE_EQ(separation_ratio(10, 4, 4, 9), 2.0);
  EXPECT_TRUE(std::isinf(separation_ratio(1, 0, 0, 0)));
  EXPECT_EQ(separation_ratio(1, 1, 0, 0), 0.0);
  auto stat = [](const PM1Graph& g) { return static_cast<double>(signed_edge_count(g)); };
  auto s = [](Seed seed) { return sample_gnp_half(5, seed); };
  EXPECT_THROW(separation_report(stat, s, s, 1, 1), ParameterError);
}

TEST(Separation, SignedEdgesSeparateMoreWithWiderGap) {
  auto stat = [](const PM1Graph& g) { return static_cast<double>(signed_edge_count(g)); };
  auto mc = [](int q) { return [q](Seed s) { return sample_mc(2000, q, s).graph; }; };
  auto near = separation_report(stat, mc(20), mc(21), 30, 5);
  auto far = separation_report(stat, mc(20), mc(40), 30, 5);
  EXPECT_LT(near.ratio, far.ratio);
}

TEST(SampleMoments, Unbiased) {
  auto m = sample_moments({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.var, 5.0 / 3);
}
