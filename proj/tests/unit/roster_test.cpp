#include <cmath>

#include "doctest.h"

#include "egress/roster.hpp"

using namespace egress;

TEST_CASE("survey roster has 35 men then 46 women") {
  const auto roster = generate_roster(survey_roster_spec(), 3);
  REQUIRE(roster.size() == 81);
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const auto& p = roster[i];
    CHECK(p.gender == (i < 35 ? Gender::male : Gender::female));
    if (p.gender == Gender::male) {
      CHECK(p.age >= 18);
      CHECK(p.age <= 50);
      CHECK(p.weight_kg >= 65);
      CHECK(p.weight_kg <= 95);
    } else {
      CHECK(p.age <= 43);
      CHECK(p.weight_kg >= 57);
      CHECK(p.weight_kg <= 83);
    }
    CHECK(p.age == std::floor(p.age));
    CHECK(p.disease >= 0);
    CHECK(p.disease <= 100);
    CHECK_FALSE(p.familiar);
  }
  CHECK(roster.front().id == "m01");
  CHECK(roster.back().id == "f46");
}

TEST_CASE("same seed, same roster; different seed, different roster") {
  const auto spec = survey_roster_spec();
  CHECK(generate_roster(spec, 7) == generate_roster(spec, 7));
  CHECK(generate_roster(spec, 7) != generate_roster(spec, 8));
}

TEST_CASE("zero rates give no propensities") {
  RosterSpec spec;
  spec.male.count = 50;
  for (const auto& p : generate_roster(spec, 1)) CHECK(p.propensities == PropensitySet{});
}

TEST_CASE("familiarity follows its probability") {
  RosterSpec spec;
  spec.female.count = 20;
  spec.familiar_prob = 1.0;
  for (const auto& p : generate_roster(spec, 1)) CHECK(p.familiar);
}

TEST_CASE("an all-zero roster is rejected") {
  RosterSpec spec;
  CHECK_THROWS_WITH_AS(generate_roster(spec, 1), "empty roster", std::invalid_argument);
}

TEST_CASE("female aside rate converges to the survey rate") {
  RosterSpec spec = survey_roster_spec();
  spec.male.count = 0;
  spec.female.count = 10000;
  std::size_t aside = 0;
  for (const auto& p : generate_roster(spec, 42)) aside += p.propensities.aside ? 1 : 0;
  CHECK(std::abs(static_cast<double>(aside) / 10000.0 - 0.8696) <= 0.02);
}

TEST_CASE("intensity levels land in their bands") {
  RosterSpec spec;
  spec.male.count = 200;
  spec.male.shock = {0, 0, 1, 0, 0};
  spec.male.disease = {0, 0, 0, 0, 1};
  for (const auto& p : generate_roster(spec, 2)) {
    CHECK(p.shock >= 40);
    CHECK(p.shock < 60);
    CHECK(p.disease >= 80);
    CHECK(p.disease <= 100);
  }
  CHECK(level_support(4).closed_upper);
  CHECK_FALSE(level_support(0).closed_upper);
  CHECK_THROWS_AS(level_support(5), std::out_of_range);
}
