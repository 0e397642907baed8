#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "egress/fuzzy_speed.hpp"
#include "egress/model.hpp"

namespace egress {

/// Five ordinal levels (very low .. very high) for disease, shock and
/// collaboration. Each level is an intensity band of width 20 on [0, 100].
inline constexpr std::size_t kLevelCount = 5;
using LevelWeights = std::array<double, kLevelCount>;

/// Intensity support of a level: [20*i, 20*(i+1)), the top level closed.
Interval level_support(std::size_t level);

struct PropensityRates {
  double wait = 0.0;
  double aside = 0.0;
  double jump_over = 0.0;
  double help = 0.0;
  double wait_for_fallen = 0.0;

  bool operator==(const PropensityRates&) const = default;
};

struct GenderCohort {
  std::size_t count = 0;
  int age_min = 18;
  int age_max = 50;
  int weight_min = 60;
  int weight_max = 90;
  LevelWeights disease{1, 0, 0, 0, 0};
  LevelWeights shock{1, 0, 0, 0, 0};
  LevelWeights collaboration{1, 0, 0, 0, 0};
  PropensityRates propensities;

  bool operator==(const GenderCohort&) const = default;
};

struct RosterSpec {
  GenderCohort male;
  GenderCohort female;
  double familiar_prob = 0.0;
  std::uint64_t seed = 1;

  bool operator==(const RosterSpec&) const = default;
};

/// The surveyed population: 35 men and 46 women with the recorded age and
/// weight ranges, level counts and behaviour rates.
RosterSpec survey_roster_spec();

/// Samples a roster: males first (ids m01..), then females (f01..). Ages and
/// weights are uniform integers on their ranges; intensities pick a level by
/// the level weights, then a uniform value inside its support. Throws
/// std::invalid_argument("empty roster") when both counts are zero.
std::vector<AgentProfile> generate_roster(const RosterSpec& spec, std::uint64_t seed);

}  // namespace egress
