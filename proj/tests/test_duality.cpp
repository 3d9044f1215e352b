#include <gtest/gtest.h>

#include <cmath>

#include "lowcolor/duality.hpp"

using namespace lowcolor;

TEST(MicroInstance, ColouringInstances) {
  auto a = build_coloring_instance(3, 1, 1);
  EXPECT_EQ(a.universe_size, 8u);
  EXPECT_EQ(a.R, (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(a.monomials.size(), 3u);
  EXPECT_EQ(build_coloring_instance(4, 2, 2).R.size(), 41u);
  EXPECT_EQ(build_coloring_instance(4, 4, 1).R.size(), 64u);
  EXPECT_EQ(build_coloring_instance(4, 2, 2).monomials.size(), 6u + 15u);
  double s = 0;
  for (double w : a.q_weights) s += w;
  EXPECT_DOUBLE_EQ(s, 1.0);
  EXPECT_THROW(build_coloring_instance(6, 2, 1), ParameterError);
  EXPECT_THROW(build_coloring_instance(3, 0, 1), ParameterError);
}

TEST(MicroInstance, MonomialSigns) {
  EXPECT_EQ(MicroInstance::monomial(0b11, 0b11), 1.0);
  EXPECT_EQ(MicroInstance::monomial(0b11, 0b01), -1.0);
  EXPECT_EQ(MicroInstance::monomial(0b11, 0b00), 1.0);
  EXPECT_EQ(MicroInstance::monomial(0, 0b101), 1.0);
}

TEST(Duality, EdgelessPropertyAtDegreeOne) {
  auto r = solve_duality(build_coloring_instance(3, 1, 1));
  EXPECT_NEAR(r.primal_value, std::sqrt(3.0), 1e-6);
  EXPECT_NEAR(r.dual_adv, 2.0, 1e-6);
  EXPECT_LE(r.gap, 1e-6);
}

TEST(Duality, DegreeZeroIsTrivial) {
  auto r = solve_duality(build_coloring_instance(4, 2, 0));
  EXPECT_EQ(r.primal_value, 0.0);
  EXPECT_EQ(r.dual_adv, 1.0);
  EXPECT_EQ(r.gap, 0.0);
}

TEST(Duality, FullUniverseHasNoAdvantage) {
  auto r = solve_duality(build_coloring_instance(4, 4, 2));
  EXPECT_NEAR(r.primal_value, 0.0, 1e-6);
  EXPECT_NEAR(r.dual_adv, 1.0, 1e-9);
}

TEST(Duality, StrongDualityAtDegreeTwo) {
  auto r = solve_duality(build_coloring_instance(4, 2, 2));
  EXPECT_LE(r.gap, 1e-3);
  EXPECT_GE(r.dual_adv, 1.0);
}

TEST(Duality, WeakDualityAlongTraces) {
  for (auto [nv, q, D] : {std::tuple{3, 1, 2}, std::tuple{4, 2, 2}, std::tuple{4, 3, 3}}) {
    auto inst = build_coloring_instance(nv, q, D);
    SolverOptions opt{4000, 1e-9};
    auto p = primal_value(inst, opt);
    auto d = dual_value(inst, opt);
    const double dual_norm = std::sqrt(d.objective);
    for (double v : p.trace) EXPECT_LE(v, dual_norm + 1e-9);
    for (double v : d.trace) EXPECT_GE(v, p.value - 1e-9);
    EXPECT_LE(p.coefficients.norm(), 1.0 + 1e-12);
    EXPECT_EQ(d.monotonicity_violations, 0);
    EXPECT_GE(d.fw_gap, -1e-9);
  }
}

TEST(Duality, DualTraceIsMonotone) {
  auto d = dual_value(build_coloring_instance(5, 2, 2));
  for (std::size_t i = 1; i < d.trace.size(); ++i) EXPECT_LE(d.trace[i], d.trace[i - 1] + 1e-12);
  double s = 0;
  for (double x : d.p) {
    EXPECT_GE(x, 0.0);
    s += x;
  }
  EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST(AdvMeanIdentity, PointMass) {
  auto inst = build_coloring_instance(3, 1, 1);
  auto id = adv_mean_identity_check(inst, {1.0});
  EXPECT_NEAR(id.sup_mean, std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(id.adv_squared, 4.0, 1e-9);
  EXPECT_LE(id.residual, 1e-9);
}

TEST(AdvMeanIdentity, RandomDistributions) {
  auto inst = build_coloring_instance(4, 2, 2);
  Rng rng(5);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> p(inst.R.size());
    double s = 0;
    for (auto& x : p) s += x = rng.uniform();
    for (auto& x : p) x /= s;
    EXPECT_LE(adv_mean_identity_check(inst, p).residual, 1e-9);
  }
}

TEST(AdvMeanIdentity, RejectsBadDistributions) {
  auto inst = build_coloring_instance(3, 1, 1);
  EXPECT_THROW(adv_mean_identity_check(inst, {0.5}), ParameterError);
  EXPECT_THROW(adv_mean_identity_check(inst, {1.0, 0.0}), ParameterError);
  EXPECT_THROW(adv_mean_identity_check(inst, {-1.0}), ParameterError);
}
