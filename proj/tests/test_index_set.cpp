#include <gtest/gtest.h>

#include <cmath>

#include "dilatia/dilatia.hpp"

using namespace dilatia;

TEST(PureSet, UnitIntervalIsCaseTwo) {
  const auto rep = check_pure_set(IndexSet::interval_01(), ToleranceConfig{});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.data["purity_case"], 2);
}

TEST(PureSet, GeometricIsCaseThree) {
  const auto rep = check_pure_set(IndexSet::geometric(2.0), ToleranceConfig{});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.data["purity_case"], 3);
}

TEST(PureSet, RayAboveOneIsCaseOne) {
  const auto rep = check_pure_set(IndexSet::ray_1(), ToleranceConfig{});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.data["purity_case"], 1);
}

TEST(PureSet, PositiveRayAndRationalsPass) {
  EXPECT_TRUE(check_pure_set(IndexSet::positive_ray(), ToleranceConfig{}).passed());
  EXPECT_TRUE(check_pure_set(IndexSet::full_ray(), ToleranceConfig{}).passed());
  EXPECT_TRUE(check_pure_set(IndexSet::rationals_01(), ToleranceConfig{}).passed());
  EXPECT_TRUE(check_pure_set(IndexSet::interval_01_open_zero(), ToleranceConfig{}).passed());
}

TEST(PureSet, ExplicitHalfAndOneIsNotClosed) {
  const auto rep = check_pure_set(IndexSet::explicit_list({0.5, 1.0}), ToleranceConfig{});
  EXPECT_FALSE(rep.passed());
  const CheckRecord* m = rep.find("multiplicative_closure");
  ASSERT_NE(m, nullptr);
  EXPECT_FALSE(m->pass);
  EXPECT_EQ(m->witness["product"], 0.25);
  EXPECT_TRUE(rep.find("contains_one")->pass);
}

TEST(PureSet, MissingOneFails) {
  const auto rep = check_pure_set(IndexSet::explicit_list({0.0, 0.5}), ToleranceConfig{});
  EXPECT_FALSE(rep.find("contains_one")->pass);
}

TEST(IndexSet, Membership) {
  EXPECT_TRUE(IndexSet::interval_01().contains(0.0));
  EXPECT_FALSE(IndexSet::interval_01_open_zero().contains(0.0));
  EXPECT_FALSE(IndexSet::interval_01().contains(1.5));
  EXPECT_TRUE(IndexSet::ray_1().contains(7.0));
  EXPECT_FALSE(IndexSet::ray_1().contains(0.9));
  EXPECT_TRUE(IndexSet::geometric(2.0).contains(0.125));
  EXPECT_FALSE(IndexSet::geometric(2.0).contains(0.3));
  EXPECT_TRUE(IndexSet::rationals_01().contains(3.0 / 7.0));
  EXPECT_FALSE(IndexSet::rationals_01().contains(1.0 / std::sqrt(2.0)));
}

TEST(IndexSet, Closure) {
  EXPECT_TRUE(IndexSet::rationals_01().in_closure(1.0 / std::sqrt(2.0)));
  EXPECT_TRUE(IndexSet::rationals_01().in_closure(0.0));
  EXPECT_FALSE(IndexSet::rationals_01().in_closure(1.2));
  EXPECT_FALSE(IndexSet::geometric(2.0).in_closure(0.3));
  EXPECT_TRUE(IndexSet::geometric(2.0).in_closure(0.0));
}

TEST(IndexSet, ApproachStaysInsideAndConverges) {
  for (const auto& I : {IndexSet::interval_01(), IndexSet::ray_1(), IndexSet::full_ray()}) {
    const auto seq = I.approach(1.0, 10);
    ASSERT_EQ(seq.size(), 10u) << I.name();
    for (double a : seq) EXPECT_TRUE(I.contains(a)) << I.name() << " " << a;
    EXPECT_LT(std::abs(seq.back() - 1.0), 1e-9);
  }
  EXPECT_TRUE(IndexSet::geometric(2.0).approach(1.0, 10).empty());
  const auto r = IndexSet::rationals_01().approach(1.0 / std::sqrt(2.0), 12);
  ASSERT_FALSE(r.empty());
  EXPECT_LT(std::abs(r.back() - 1.0 / std::sqrt(2.0)), 1e-9);
}

TEST(IndexSet, SampleStartsWithOneThenZero) {
  Rng rng(1);
  const auto s = IndexSet::interval_01().sample(20, rng);
  ASSERT_GE(s.size(), 2u);
  EXPECT_EQ(s[0], 1.0);
  EXPECT_EQ(s[1], 0.0);
  for (double a : s) EXPECT_TRUE(IndexSet::interval_01().contains(a));
}

TEST(IndexSet, JsonRoundTrip) {
  for (const auto& I : {IndexSet::interval_01(), IndexSet::geometric(3.0), IndexSet::rationals_01(),
                        IndexSet::explicit_list({0.25, 0.5, 1.0}), IndexSet::interval_01_open_zero().with_zero()}) {
    const auto back = IndexSet::from_json(I.to_json());
    EXPECT_EQ(back.to_json(), I.to_json());
  }
}

TEST(IndexSet, BadJsonIsSpecError) {
  EXPECT_THROW(IndexSet::from_json(Json{{"kind", "nope"}}), SpecError);
  EXPECT_THROW(IndexSet::from_json(Json{{"kind", "geometric"}}), SpecError);
  EXPECT_THROW(IndexSet::from_json(Json::array()), SpecError);
}
