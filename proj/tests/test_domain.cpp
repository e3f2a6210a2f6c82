#include <gtest/gtest.h>

#include <algorithm>

#include "ess/domain.hpp"
#include "ess/scenario_io.hpp"
#include "test_support.hpp"

namespace {

using namespace ess;

bool has_kind(const std::vector<Violation>& vs, ViolationKind k) {
  return std::any_of(vs.begin(), vs.end(), [k](const Violation& v) { return v.kind == k; });
}

TEST(ValidateScenario, ZeroScenarioIsValid) {
  const auto s = fixtures::zero_scenario();
  EXPECT_TRUE(validate_scenario(s).empty());
  EXPECT_EQ(validated(s), s);
}

TEST(ValidateScenario, LengthMismatch) {
  auto s = fixtures::zero_scenario();
  s.load.resize(23);
  const auto vs = validate_scenario(s);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::length_mismatch);
  EXPECT_EQ(vs[0].field, "load");
}

TEST(ValidateScenario, InitialChargeAboveCapacity) {
  auto s = fixtures::zero_scenario();
  s.initial_charge = 2.0;
  const auto vs = validate_scenario(s);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::initial_charge_out_of_range);
}

TEST(ValidateScenario, ZeroHorizon) {
  Scenario s;
  s.horizon = 0;
  EXPECT_TRUE(has_kind(validate_scenario(s), ViolationKind::zero_horizon));
}

TEST(ValidateScenario, ReportsEveryViolation) {
  auto s = fixtures::zero_scenario();
  s.load[3] = -1.0;
  s.generation.pop_back();
  s.tariff.demand_rate = -5.0;
  s.battery.charge_limit = -0.1;
  s.initial_charge = -0.5;
  const auto vs = validate_scenario(s);
  EXPECT_EQ(vs.size(), 5u);
  EXPECT_TRUE(has_kind(vs, ViolationKind::negative_value));
  EXPECT_TRUE(has_kind(vs, ViolationKind::length_mismatch));
  EXPECT_TRUE(has_kind(vs, ViolationKind::initial_charge_out_of_range));

  try {
    (void)validated(s);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.violations().size(), 5u);
    EXPECT_NE(std::string(e.what()).find("load[3]"), std::string::npos);
  }
}

TEST(ValidateScenario, RejectsNonFinite) {
  auto s = fixtures::zero_scenario();
  s.tariff.energy_price[0] = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(has_kind(validate_scenario(s), ViolationKind::non_finite));
}

TEST(ValidateScenario, AcceptsAnyPositiveHorizon) {
  std::mt19937_64 rng(3);
  for (std::size_t t : {1u, 2u, 7u, 48u}) {
    EXPECT_TRUE(validate_scenario(fixtures::random_scenario(rng, t, true)).empty()) << t;
  }
}

TEST(ValidateScenario, AcceptsBuiltInGenerators) {
  for (const auto& s : fixtures::synthetic_suite()) {
    EXPECT_TRUE(validate_scenario(s).empty()) << s.meta.name;
  }
}

}  // namespace
