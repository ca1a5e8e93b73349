#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"

using namespace dilatia;

TEST(Distance, PythagoreanPair) {
  const auto plane = gallery::euclidean_space(2, 10.0);
  EXPECT_DOUBLE_EQ(distance(plane, Vec{0, 0}, Vec{3, 4}), 5.0);
}

TEST(Distance, SelfDistanceIsZero) {
  const auto disk = gallery::euclidean_ball(2, 1.0);
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const Vec p = disk.sample(rng);
    EXPECT_EQ(distance(disk, p, p), 0.0);
  }
  const auto circle = gallery::circle_arc(1.0);
  EXPECT_EQ(distance(circle, Vec{2.5}, Vec{2.5}), 0.0);
}

TEST(Distance, MatrixLookup) {
  const auto s = finite_space("m", {{0, 0.3, 0.5}, {0.3, 0, 0.7}, {0.5, 0.7, 0}}, Index{0});
  EXPECT_EQ(distance(s, Index{1}, Index{2}), 0.7);
}

TEST(Distance, OutsideSpaceIsDomainError) {
  const auto disk = gallery::euclidean_ball(2, 1.0);
  EXPECT_THROW(distance(disk, Vec{0, 0}, Vec{3, 4}), DomainError);
  const auto s = finite_space("m", {{0, 1}, {1, 0}}, Index{0});
  EXPECT_THROW(distance(s, Index{0}, Index{2}), DomainError);
}

TEST(FiniteSpace, RejectsMalformedMatrices) {
  EXPECT_THROW(finite_space("a", {{0, 1}, {2, 0}}, Index{0}), SpecError);
  EXPECT_THROW(finite_space("b", {{1, 1}, {1, 0}}, Index{0}), SpecError);
  EXPECT_THROW(finite_space("c", {{0, 1, 2}, {1, 0}}, Index{0}), SpecError);
  EXPECT_THROW(finite_space("d", {{0, -1}, {-1, 0}}, Index{0}), SpecError);
}

TEST(MetricAxioms, EuclideanDiskPasses) {
  const auto rep = check_metric_axioms(gallery::euclidean_ball(2, 1.0), ToleranceConfig{});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.find("triangle")->max_violation, 0.0);
  EXPECT_EQ(rep.find("zero_diagonal")->max_violation, 0.0);
}

TEST(MetricAxioms, TriangleViolationWitness) {
  const auto s = finite_space("bad", {{0, 5, 10}, {5, 0, 1}, {10, 1, 0}}, Index{0});
  const auto rep = check_metric_axioms(s, ToleranceConfig{});
  EXPECT_FALSE(rep.passed());
  const CheckRecord* tri = rep.find("triangle");
  ASSERT_NE(tri, nullptr);
  EXPECT_FALSE(tri->pass);
  EXPECT_DOUBLE_EQ(tri->max_violation, 4.0);
  EXPECT_EQ(tri->witness["x"], 0);
  EXPECT_EQ(tri->witness["y"], 1);
  EXPECT_EQ(tri->witness["z"], 2);
  EXPECT_TRUE(rep.find("symmetry")->pass);
}

TEST(MetricAxioms, ShortestPathClosureIsAMetric) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 6 + trial;
    Matrix m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = rng.uniform(0.1, 10.0);
    const auto raw = check_metric_axioms(finite_space("raw", m, Index{0}), ToleranceConfig{});
    const auto closed = check_metric_axioms(finite_space("closed", oracle::floyd_warshall(m), Index{0}),
                                            ToleranceConfig{});
    EXPECT_TRUE(closed.passed()) << "trial " << trial;
    // Random entries on this many points essentially always break the triangle inequality.
    EXPECT_FALSE(raw.find("triangle")->pass) << "trial " << trial;
  }
}

TEST(Diameter, CircleIsPi) {
  const auto est = diameter(gallery::circle_arc(1.0), ToleranceConfig{});
  EXPECT_DOUBLE_EQ(est.value, std::numbers::pi);
  EXPECT_TRUE(est.exact);
}

TEST(Diameter, TwoPointMatrix) {
  const auto est = diameter(finite_space("two", {{0, 0.7}, {0.7, 0}}, Index{0}), ToleranceConfig{});
  EXPECT_EQ(est.value, 0.7);
  EXPECT_TRUE(est.exact);
}

TEST(Diameter, UnitBallSampledNearTwo) {
  const auto disk = gallery::euclidean_ball(2, 1.0);
  EXPECT_DOUBLE_EQ(diameter(disk, ToleranceConfig{}).value, 2.0);
  const auto est = sampled_diameter(disk, ToleranceConfig{});
  EXPECT_FALSE(est.exact);
  EXPECT_LE(est.value, 2.0 + 1e-12);
  EXPECT_GE(est.value, 1.99);
}

TEST(Diameter, UnboundedSpaceHasNone) {
  EXPECT_THROW(diameter(gallery::euclidean_space(2, 1.0), ToleranceConfig{}), DomainError);
}

TEST(Rescale, CircleScaledByTwoOverPi) {
  const auto circle = gallery::circle_arc(1.0);
  const auto r = rescale_to_diameter(circle, 2.0);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec p = circle.sample(rng), q = circle.sample(rng);
    EXPECT_NEAR(r.distance(p, q), circle.distance(p, q) * 2.0 / std::numbers::pi, 1e-15);
  }
  EXPECT_EQ(*r.declared_diameter, 2.0);
}

TEST(Rescale, AlreadyDiameterTwoIsIdentity) {
  const auto disk = gallery::euclidean_ball(2, 1.0);
  const auto r = rescale_to_diameter(disk, 2.0);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec p = disk.sample(rng), q = disk.sample(rng);
    EXPECT_EQ(r.distance(p, q), disk.distance(p, q));
  }
}

TEST(Rescale, FiniteMaxEntryBecomesTarget) {
  const auto s = finite_space("m", {{0, 10, 4}, {10, 0, 7}, {4, 7, 0}}, Index{0});
  const auto r = rescale_to_diameter(s, 2.0);
  EXPECT_EQ(r.distance(Index{0}, Index{1}), 2.0);
  EXPECT_DOUBLE_EQ(r.distance(Index{0}, Index{2}), 0.8);
  EXPECT_EQ(diameter(r, ToleranceConfig{}).value, 2.0);
}

TEST(Rescale, RejectsNonPositiveTarget) {
  EXPECT_THROW(rescale_to_diameter(gallery::circle_arc(1.0), 0.0), DomainError);
}

TEST(Tolerance, ValidateRejectsNonsense) {
  ToleranceConfig c;
  c.abs_tol = -1.0;
  EXPECT_THROW(c.validate(), SpecError);
  ToleranceConfig d;
  d.sample_pairs = 0;
  EXPECT_THROW(d.validate(), SpecError);
}

TEST(Rng, DerivedStreamsAreReproducible) {
  Rng a = Rng::derive(42, "x"), b = Rng::derive(42, "x"), c = Rng::derive(42, "y");
  const auto va = a.next(), vb = b.next(), vc = c.next();
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
}
