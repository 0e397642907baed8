#include "egress/roster.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

#include "egress/rng.hpp"

namespace egress {

Interval level_support(std::size_t level) {
  if (level >= kLevelCount) throw std::out_of_range("intensity level out of range");
  const double lo = 20.0 * static_cast<double>(level);
  return Interval{lo, lo + 20.0, level + 1 == kLevelCount};
}

RosterSpec survey_roster_spec() {
  RosterSpec spec;
  spec.male.count = 35;
  spec.male.age_min = 18;
  spec.male.age_max = 50;
  spec.male.weight_min = 65;
  spec.male.weight_max = 95;
  spec.male.disease = {25, 5, 2, 2, 1};
  spec.male.shock = {18, 8, 4, 3, 2};
  spec.male.collaboration = {26, 5, 2, 1, 1};
  spec.male.propensities = {0.5714, 0.6857, 0.3714, 0.2857, 0.5143};

  spec.female.count = 46;
  spec.female.age_min = 18;
  spec.female.age_max = 43;
  spec.female.weight_min = 57;
  spec.female.weight_max = 83;
  spec.female.disease = {35, 5, 3, 2, 1};
  spec.female.shock = {5, 5, 18, 15, 3};
  spec.female.collaboration = {21, 13, 7, 3, 2};
  spec.female.propensities = {0.3913, 0.8696, 0.1086, 0.0652, 0.1304};
  return spec;
}

namespace {

std::size_t pick_level(Rng& rng, const LevelWeights& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("level weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("level weights sum to zero");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < kLevelCount; ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  // u landed on the rounding edge; take the last populated level.
  for (std::size_t i = kLevelCount; i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return kLevelCount - 1;
}

double draw_intensity(Rng& rng, const LevelWeights& weights) {
  const Interval support = level_support(pick_level(rng, weights));
  return rng.uniform(support.lower, support.upper);
}

void append_cohort(std::vector<AgentProfile>& out, const GenderCohort& cohort, Gender gender,
                   double familiar_prob, Rng& rng) {
  if (cohort.count == 0) return;
  if (cohort.age_min > cohort.age_max || cohort.weight_min > cohort.weight_max)
    throw std::invalid_argument("roster cohort has an empty age or weight range");
  const char prefix = gender == Gender::male ? 'm' : 'f';
  for (std::size_t i = 0; i < cohort.count; ++i) {
    char id[24];
    std::snprintf(id, sizeof id, "%c%02zu", prefix, i + 1);
    AgentProfile p;
    p.id = id;
    p.gender = gender;
    p.age = rng.between(cohort.age_min, cohort.age_max);
    p.weight_kg = rng.between(cohort.weight_min, cohort.weight_max);
    p.disease = draw_intensity(rng, cohort.disease);
    p.shock = draw_intensity(rng, cohort.shock);
    p.collaboration = draw_intensity(rng, cohort.collaboration);
    p.propensities.wait = rng.bernoulli(cohort.propensities.wait);
    p.propensities.aside = rng.bernoulli(cohort.propensities.aside);
    p.propensities.jump_over = rng.bernoulli(cohort.propensities.jump_over);
    p.propensities.help = rng.bernoulli(cohort.propensities.help);
    p.propensities.wait_for_fallen = rng.bernoulli(cohort.propensities.wait_for_fallen);
    p.familiar = rng.bernoulli(familiar_prob);
    out.push_back(std::move(p));
  }
}

}  // namespace

std::vector<AgentProfile> generate_roster(const RosterSpec& spec, std::uint64_t seed) {
  if (spec.male.count + spec.female.count == 0) throw std::invalid_argument("empty roster");
  Rng rng(seed);
  std::vector<AgentProfile> roster;
  roster.reserve(spec.male.count + spec.female.count);
  append_cohort(roster, spec.male, Gender::male, spec.familiar_prob, rng);
  append_cohort(roster, spec.female, Gender::female, spec.familiar_prob, rng);
  return roster;
}

}  // namespace egress
