#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace dilatia;

namespace {

RadialAction<Vec> disk() { return gallery::build_as<RadialAction<Vec>>("disk_radial_action"); }

}  // namespace

TEST(Gamma, DiskExamples) {
  const auto a = disk();
  const ToleranceConfig cfg;
  EXPECT_NEAR(gamma(a, Vec{0.3, 0.4}, 1.0, cfg), 0.5, 1e-9);
  EXPECT_EQ(gamma(a, Vec{0.0, 0.0}, 1.0, cfg), 0.0);
  EXPECT_NEAR(gamma(a, Vec{0.6, 0.8}, 1.0, cfg), 1.0, cfg.abs_tol);
  EXPECT_NEAR(gamma(a, Vec{0.3, 0.4}, 0.25, cfg), 2.0, 1e-9);
  EXPECT_THROW(gamma(a, Vec{0.3, 0.4}, 0.0, cfg), DomainError);
}

TEST(Gamma, AgreesWithGridOracleAndNorm) {
  const auto a = disk();
  const ToleranceConfig cfg;
  Rng rng(2024);
  const double cell = 1.0 / 4096.0;
  for (int i = 0; i < 2000; ++i) {
    const Vec x = a.space.sample(rng);
    const double g = gamma(a, x, 1.0, cfg);
    EXPECT_NEAR(g, euclidean_norm(x), 1e-9);
    const double og = oracle::gamma_grid(a, x, 1.0);
    EXPECT_LE(g, og + cfg.abs_tol);
    EXPECT_GT(g, og - cell - cfg.abs_tol);
  }
}

TEST(Gamma, EquivariantAlongOrbits) {
  const auto a = gallery::build_as<RadialAction<Vec>>("square_radial_action");
  const ToleranceConfig cfg;
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Vec x = a.space.sample(rng);
    const double b = rng.uniform();
    EXPECT_NEAR(gamma(a, a.act(b, x), 1.0, cfg), b * gamma(a, x, 1.0, cfg), cfg.abs_tol);
  }
}

TEST(ConeCoordinates, PolarDecomposition) {
  const auto a = disk();
  const auto cc = cone_coordinates(a, Vec{0.3, 0.4}, 1.0, ToleranceConfig{});
  EXPECT_NEAR(cc.alpha, 0.5, 1e-9);
  ASSERT_TRUE(cc.base.has_value());
  EXPECT_NEAR((*cc.base)[0], 0.6, 1e-9);
  EXPECT_NEAR((*cc.base)[1], 0.8, 1e-9);
  EXPECT_FALSE(cc.base_arbitrary);
}

TEST(ConeCoordinates, SphereAndCenter) {
  const auto a = disk();
  const auto s = cone_coordinates(a, Vec{0.0, 1.0}, 1.0, ToleranceConfig{});
  EXPECT_NEAR(s.alpha, 1.0, 1e-9);
  EXPECT_NEAR(euclidean_distance(*s.base, Vec{0.0, 1.0}), 0.0, 1e-9);
  const auto z = cone_coordinates(a, Vec{0.0, 0.0}, 1.0, ToleranceConfig{});
  EXPECT_EQ(z.alpha, 0.0);
  EXPECT_TRUE(z.base_arbitrary);
  EXPECT_FALSE(z.base.has_value());
}

TEST(BoundarySet, UnitCircle) {
  const auto C = boundary_set(disk(), 1.0, ToleranceConfig{});
  ASSERT_FALSE(C.empty());
  for (const Vec& c : C) EXPECT_NEAR(euclidean_norm(c), 1.0, 1e-9);
}

TEST(BoundarySet, SmallSupSphere) {
  const auto a = gallery::build_as<RadialAction<Vec>>("square_radial_action");
  for (const Vec& c : boundary_set(a, 0.1, ToleranceConfig{}))
    EXPECT_NEAR(std::max(std::abs(c[0]), std::abs(c[1])), 0.1, 1e-9);
}

TEST(BoundarySet, OnePointSpaceHasNoBoundary) {
  RadialAction<Index> a;
  a.name = "point";
  a.space = finite_space("point", {{0.0}}, Index{0});
  a.act = [](double, const Index& i) { return i; };
  EXPECT_THROW(boundary_set(a, 1.0, ToleranceConfig{}), DecompositionError);
}

TEST(Partition, DiskAndCube) {
  EXPECT_TRUE(verify_partition(disk(), ToleranceConfig{}).passed());
  const auto cube = gallery::build_as<RadialAction<Vec>>("cube_coordinatewise_action");
  const auto rep = verify_partition(cube, ToleranceConfig{}, 1.0);
  EXPECT_TRUE(rep.passed());
  // The base set {max coordinate = 1} sits at sup distance exactly 1 from the origin.
  EXPECT_NEAR(rep.data["base_min_distance"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(rep.data["base_max_distance"].get<double>(), 1.0, 1e-9);
}

TEST(Homeomorphism, DiskRoundTrip) {
  ToleranceConfig cfg;
  cfg.sample_pairs = 10000;
  const auto rep = verify_cone_homeomorphism(disk(), 1.0, cfg);
  EXPECT_TRUE(rep.passed());
  EXPECT_LE(rep.data["max_round_trip_residual"].get<double>(), 1e-9);
}

TEST(Homeomorphism, PlaneLocallyCompact) {
  const auto a = gallery::build_as<RadialAction<Vec>>("plane_radial_action");
  EXPECT_EQ(a.variant, RadialVariant::locally_compact);
  EXPECT_TRUE(verify_cone_homeomorphism(a, 1.0, ToleranceConfig{}).passed());
  EXPECT_TRUE(verify_partition(a, ToleranceConfig{}, 1.0).passed());
}

TEST(Homeomorphism, FixedRingFailsThePrecondition) {
  const auto a = gallery::build_as<RadialAction<Vec>>("fixed_ring_action");
  const auto rep = verify_action(a, ToleranceConfig{});
  EXPECT_FALSE(rep.find("shrinking")->pass);
  EXPECT_THROW(verify_cone_homeomorphism(a, 1.0, ToleranceConfig{}), PreconditionError);
}

TEST(Action, OffsetCompositionBreaksTheMonoidLaw) {
  const auto a = gallery::build_as<RadialAction<Vec>>("offset_composition_action");
  const auto rep = verify_action(a, ToleranceConfig{});
  EXPECT_FALSE(rep.find("composition")->pass);
  EXPECT_TRUE(rep.find("identity_at_one")->pass);
}

TEST(Action, PositiveActionsPass) {
  for (const char* name : {"disk_radial_action", "cube_coordinatewise_action", "plane_radial_action",
                           "square_radial_action"})
    EXPECT_TRUE(verify_action(gallery::build_as<RadialAction<Vec>>(name), ToleranceConfig{}).passed()) << name;
}

TEST(MetricCone, DiskAndSquare) {
  const auto d = verify_metric_cone(disk(), 1.0, ToleranceConfig{});
  EXPECT_TRUE(d.passed());
  for (const auto& c : d.checks) EXPECT_LE(c.max_violation, 1e-9) << c.name;
  const auto sq = gallery::build_as<RadialAction<Vec>>("square_radial_action");
  EXPECT_TRUE(verify_metric_cone(sq, 1.0, ToleranceConfig{}).passed());
}
