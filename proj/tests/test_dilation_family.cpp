#include <gtest/gtest.h>

#include <cmath>

#include "dilatia/dilatia.hpp"

using namespace dilatia;

namespace {

DilationFamily<Vec> plane_scaling(IndexSet I = IndexSet::full_ray()) {
  return gallery::linear_scale(gallery::euclidean_space(2, 2.0), I);
}

}  // namespace

TEST(VerifyFamily, PlaneScalingPassesTightly) {
  const auto rep = verify_dilation_family(plane_scaling(), ToleranceConfig{});
  EXPECT_TRUE(rep.passed());
  for (const char* name : {"scale", "center", "composition", "identity_at_one", "zero_is_constant"})
    EXPECT_LE(rep.find(name)->max_violation, 1e-12) << name;
  // The limit checks stop at |a - 1| = 1e-12, on points of norm <= 2.
  EXPECT_LE(rep.find("limit_is_identity")->max_violation, 1e-11);
  EXPECT_LE(rep.find("limit_exists")->max_violation, 1e-10);
}

TEST(VerifyFamily, RotationBreaksComposition) {
  const auto fam = gallery::build_as<DilationFamily<Vec>>("rotation_scale_family");
  const auto rep = verify_dilation_family(fam, ToleranceConfig{});
  const CheckRecord* comp = rep.find("composition");
  ASSERT_NE(comp, nullptr);
  EXPECT_FALSE(comp->pass);
  EXPECT_GE(comp->max_violation, 0.1);
  // At a = b = 0.5, x = (1,0): 0.25 R(1)x against 0.25 R(0.25)x.
  const Vec x{1.0, 0.0};
  const Vec lhs = fam.map(0.5, fam.map(0.5, x)), rhs = fam.map(0.25, x);
  EXPECT_NEAR(euclidean_distance(lhs, rhs), 0.5 * std::sin(0.375), 1e-15);
  EXPECT_GE(euclidean_distance(lhs, rhs), 0.1);
}

TEST(VerifyFamily, OffsetMovesTheCenter) {
  const Vec v{1.0, 0.0};
  const auto fam = gallery::offset_scale(gallery::euclidean_ball(2, 2.0), IndexSet::interval_01_open_zero(), v);
  const auto rep = verify_dilation_family(fam, ToleranceConfig{});
  EXPECT_FALSE(rep.find("center")->pass);
  EXPECT_NEAR(rep.data["center_probe"]["distance"].get<double>(), 0.5 * euclidean_norm(v), 1e-12);
  EXPECT_NEAR(euclidean_distance(fam.map(0.5, Vec{0, 0}), Vec{0, 0}), 0.5, 1e-15);
}

TEST(Linearity, PlaneScalingPasses) {
  EXPECT_TRUE(verify_linearity(plane_scaling(), ToleranceConfig{}).passed());
}

TEST(Linearity, LongWayRoundTheCircleFails) {
  const auto fam = gallery::build_as<DilationFamily<Vec>>("circle_long_way_family");
  const auto rep = verify_linearity(fam, ToleranceConfig{});
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.find("linearity")->pass);
}

TEST(AdjoinZero, AddsTheConstantMap) {
  const auto fam = plane_scaling(IndexSet::interval_01_open_zero());
  const auto j = adjoin_zero(fam);
  EXPECT_TRUE(j.index.contains(0.0));
  EXPECT_TRUE(j.index.contains(0.5));
  EXPECT_EQ(j.map(0.0, Vec{3.0, -1.0}), (Vec{0.0, 0.0}));
  EXPECT_EQ(j.map(0.5, Vec{3.0, -1.0}), fam.map(0.5, Vec{3.0, -1.0}));
  EXPECT_TRUE(verify_dilation_family(j, ToleranceConfig{}).passed());
}

TEST(AdjoinZero, IdempotentWhenZeroPresent) {
  const auto fam = plane_scaling(IndexSet::interval_01());
  const auto j = adjoin_zero(fam);
  EXPECT_EQ(j.name, fam.name);
  EXPECT_EQ(j.index.to_json(), fam.index.to_json());
}

TEST(AdjoinZero, RayAboveOneIsRejected) {
  EXPECT_THROW(adjoin_zero(plane_scaling(IndexSet::ray_1())), PreconditionError);
}

TEST(ExtendToClosure, RationalFamilyAtIrrationalScale) {
  const auto fam = gallery::build_as<DilationFamily<Vec>>("rational_scale_family");
  const double a = 1.0 / std::sqrt(2.0);
  const Vec y = extend_to_closure(fam, a, Vec{1.0, 0.0}, ToleranceConfig{});
  EXPECT_NEAR(y[0], a, 1e-9);
  EXPECT_NEAR(y[1], 0.0, 1e-9);
}

TEST(ExtendToClosure, MembersAndOne) {
  const auto fam = gallery::build_as<DilationFamily<Vec>>("rational_scale_family");
  const Vec x{0.3, -0.2};
  EXPECT_EQ(extend_to_closure(fam, 0.5, x, ToleranceConfig{}), fam.map(0.5, x));
  EXPECT_EQ(extend_to_closure(fam, 1.0, x, ToleranceConfig{}), x);
  EXPECT_THROW(extend_to_closure(fam, 1.5, x, ToleranceConfig{}), DomainError);
}

TEST(ContinuityModulus, UnitVectorGivesDeltaEqualEpsilon) {
  const auto m = continuity_modulus(plane_scaling(), Vec{1.0, 0.0}, 0.5, 2.0, ToleranceConfig{});
  ASSERT_EQ(m.epsilon.size(), m.delta.size());
  for (std::size_t i = 0; i < m.epsilon.size(); ++i) {
    const double want = std::min(m.epsilon[i], 1.5);
    EXPECT_LE(m.delta[i], want + 1e-12) << m.epsilon[i];
    EXPECT_GE(m.delta[i], want - m.grid_step - 1e-12) << m.epsilon[i];
  }
}

TEST(ContinuityModulus, CenterIsConstant) {
  const auto m = continuity_modulus(plane_scaling(), Vec{0.0, 0.0}, 0.5, 2.0, ToleranceConfig{});
  for (double d : m.delta) EXPECT_DOUBLE_EQ(d, 1.5);
}

TEST(ContinuityModulus, EmptyIntervalIsDomainError) {
  EXPECT_THROW(continuity_modulus(plane_scaling(IndexSet::interval_01()), Vec{1.0, 0.0}, 2.0, 3.0,
                                  ToleranceConfig{}),
               DomainError);
}

TEST(VerifyFamily, HeisenbergAnisotropicPasses) {
  const auto fam = gallery::build_as<DilationFamily<Vec>>("heisenberg_dilation_family");
  EXPECT_TRUE(verify_dilation_family(fam, ToleranceConfig{}).passed());
}
