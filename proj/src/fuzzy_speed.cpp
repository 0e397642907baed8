#include "egress/fuzzy_speed.hpp"

#include <cmath>
#include <sstream>

namespace egress {

namespace {

constexpr double kSlowestKmh = 2.0;
constexpr double kFastestKmh = 7.0;

std::string describe(Property p, double value) {
  std::ostringstream os;
  os << to_string(p) << " value " << value;
  return os.str();
}

}  // namespace

std::string_view to_string(Property p) {
  switch (p) {
    case Property::age: return "age";
    case Property::weight: return "weight";
    case Property::disease: return "disease";
    case Property::shock: return "shock";
    case Property::collaboration: return "collaboration";
  }
  return "?";
}

Property property_from_string(std::string_view name) {
  for (Property p : kAllProperties) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown property '" + std::string(name) + "'");
}

FuzzyPartition::FuzzyPartition(Property property, std::vector<double> centers,
                               std::vector<std::string> labels, Interval domain)
    : property_(property), centers_(std::move(centers)), labels_(std::move(labels)), domain_(domain) {
  if (centers_.size() < 2) throw std::invalid_argument("fuzzy partition needs at least two sets");
  if (labels_.size() != centers_.size())
    throw std::invalid_argument("fuzzy partition labels and centers differ in length");
  for (std::size_t i = 1; i < centers_.size(); ++i) {
    if (!(centers_[i] > centers_[i - 1]))
      throw std::invalid_argument("fuzzy partition centers must be strictly increasing");
  }
  if (!(domain_.lower < domain_.upper)) throw std::invalid_argument("fuzzy partition domain is empty");
}

std::size_t FuzzyPartition::pair_index(double value) const {
  const std::size_t last = centers_.size() - 1;
  if (value <= centers_.front()) return 0;
  if (value >= centers_.back()) return last - 1;
  std::size_t k = 0;
  while (k + 1 < last && value >= centers_[k + 1]) ++k;
  return k;
}

DegreePair FuzzyPartition::degrees(double value) const {
  if (std::isnan(value) || !domain_.contains(value))
    throw DomainError(describe(property_, value) + " outside the fuzzy partition domain");
  const std::size_t k = pair_index(value);
  const double a = centers_[k];
  const double b = centers_[k + 1];
  if (value <= a) return {1.0, 0.0};
  if (value >= b) return {0.0, 1.0};
  const double up = (value - a) / (b - a);
  return {1.0 - up, up};
}

BracketMap::BracketMap(Property property, std::vector<Slot> slots)
    : property_(property), slots_(std::move(slots)) {
  if (slots_.empty()) throw std::invalid_argument("bracket map has no intervals");
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    auto& slot = slots_[i];
    slot.interval.closed_upper = (i + 1 == slots_.size());
    if (!(slot.interval.lower < slot.interval.upper))
      throw std::invalid_argument("bracket map interval is empty");
    const auto& b = slot.bracket;
    if (!(b.min_kmh >= kSlowestKmh && b.min_kmh < b.max_kmh && b.max_kmh <= kFastestKmh))
      throw std::invalid_argument("speed bracket must satisfy 2 <= min < max <= 7");
    if (i > 0) {
      if (slots_[i - 1].interval.upper != slot.interval.lower)
        throw std::invalid_argument("bracket map intervals must be contiguous");
      if (slot.bracket.min_kmh > slots_[i - 1].bracket.min_kmh)
        throw std::invalid_argument("bracket map must not speed up with increasing impairment");
    }
  }
}

const BracketMap::Slot& BracketMap::locate(double value) const {
  for (const auto& slot : slots_) {
    if (slot.interval.contains(value)) return slot;
  }
  throw DomainError(describe(property_, value) + " outside every crisp interval");
}

DegreePair membership_degrees(const FuzzyPartition& partition, double value) {
  return partition.degrees(value);
}

SpeedBracket speed_bracket_for(const BracketMap& map, double value) { return map.locate(value).bracket; }

double midvalue(double lower, double upper) {
  if (!(lower < upper)) throw std::invalid_argument("midvalue needs lower < upper");
  return (lower + upper) / 2.0;
}

double direct_blend(DegreePair d, SpeedBracket b) {
  return (d.lo * b.min_kmh + d.up * b.max_kmh) / (d.lo + d.up);
}

double swapped_blend(DegreePair d, SpeedBracket b) {
  return (d.up * b.min_kmh + d.lo * b.max_kmh) / (d.lo + d.up);
}

double weight_prop(DegreePair degrees, SpeedBracket bracket, double value, const Interval& interval) {
  if (!(degrees.lo >= 0.0 && degrees.up >= 0.0 && degrees.lo + degrees.up > 0.0))
    throw std::invalid_argument("membership degrees must be nonnegative with a positive sum");
  if (!interval.contains(value)) throw std::invalid_argument("value lies outside its crisp interval");
  const double position = (value - interval.lower) / (interval.upper - interval.lower);
  const double projected = bracket.min_kmh + position * (bracket.max_kmh - bracket.min_kmh);
  if (projected > midvalue(bracket)) return swapped_blend(degrees, bracket);
  return direct_blend(degrees, bracket);
}

double weighted_mean(std::span<const WeightedValue> pairs) {
  if (pairs.empty()) throw std::invalid_argument("weighted mean of an empty list");
  double weights = 0.0;
  double total = 0.0;
  for (const auto& p : pairs) {
    weights += p.weight;
    total += p.weight * p.value;
  }
  if (!(weights > 0.0)) throw std::invalid_argument("weighted mean needs a positive total weight");
  return total / weights;
}

const PropertyModel& FuzzyConfig::of(Property p) const {
  switch (p) {
    case Property::age: return age;
    case Property::weight: return weight;
    case Property::disease: return disease;
    case Property::shock: return shock;
    case Property::collaboration: return collaboration;
  }
  throw std::invalid_argument("unknown property");
}

PropertyModel& FuzzyConfig::of(Property p) {
  return const_cast<PropertyModel&>(static_cast<const FuzzyConfig&>(*this).of(p));
}

namespace {

PropertyModel intensity_model(Property p) {
  FuzzyPartition partition(p, {10, 30, 50, 70, 90}, {"very low", "low", "medium", "high", "very high"},
                           Interval{0, 100, true});
  BracketMap brackets(p, {{{0, 20}, {6, 7}},
                          {{20, 40}, {5, 6}},
                          {{40, 60}, {4, 5}},
                          {{60, 80}, {3, 4}},
                          {{80, 100}, {2, 3}}});
  return {std::move(partition), std::move(brackets)};
}

}  // namespace

FuzzyConfig FuzzyConfig::defaults() {
  // Age centers put 25 and 45 around the 30-40 bracket so that age 38 splits
  // 0.35 / 0.65 between its neighbouring sets.
  PropertyModel age{
      FuzzyPartition(Property::age, {18, 25, 45, 55, 65}, {"adult", "very young", "young", "old", "very old"},
                     Interval{18, 100, true}),
      BracketMap(Property::age, {{{18, 30}, {6, 7}},
                                 {{30, 40}, {5, 6}},
                                 {{40, 50}, {4, 5}},
                                 {{50, 60}, {3, 4}},
                                 {{60, 100}, {2, 3}}})};
  PropertyModel weight{
      FuzzyPartition(Property::weight, {55, 70, 85, 100}, {"very slim", "slim", "heavy", "very heavy"},
                     Interval{50, 150, true}),
      BracketMap(Property::weight, {{{50, 65}, {6, 7}},
                                    {{65, 75}, {5, 6}},
                                    {{75, 85}, {4, 5}},
                                    {{85, 95}, {3, 4}},
                                    {{95, 150}, {2, 3}}})};
  return FuzzyConfig{std::move(age), std::move(weight), intensity_model(Property::disease),
                     intensity_model(Property::shock), intensity_model(Property::collaboration)};
}

double property_value(const AgentProfile& profile, Property p) {
  switch (p) {
    case Property::age: return profile.age;
    case Property::weight: return profile.weight_kg;
    case Property::disease: return profile.disease;
    case Property::shock: return profile.shock;
    case Property::collaboration: return profile.collaboration;
  }
  throw std::invalid_argument("unknown property");
}

double property_speed(const AgentProfile& profile, Property p, const FuzzyConfig& config) {
  const auto& model = config.of(p);
  const double value = property_value(profile, p);
  const DegreePair degrees = membership_degrees(model.partition, value);
  const auto& slot = model.brackets.locate(value);
  return weight_prop(degrees, slot.bracket, value, slot.interval);
}

std::array<double, kPropertyCount> property_speeds(const AgentProfile& profile, const FuzzyConfig& config) {
  std::array<double, kPropertyCount> out{};
  for (std::size_t i = 0; i < kPropertyCount; ++i) out[i] = property_speed(profile, kAllProperties[i], config);
  return out;
}

double combine_speeds(std::span<const double> speeds, Gender gender, const SimParams& params) {
  if (speeds.empty()) throw std::invalid_argument("no property speeds to combine");
  double sum = 0.0;
  for (double s : speeds) sum += s;
  const double gender_factor = gender == Gender::female ? params.female_factor : 1.0;
  return (sum / static_cast<double>(speeds.size())) * gender_factor * params.emergency_coeff;
}

double desired_speed(const AgentProfile& profile, const SimParams& params, const FuzzyConfig& config) {
  const auto speeds = property_speeds(profile, config);
  return combine_speeds(speeds, profile.gender, params);
}

std::vector<AgentSpeed> roster_speeds(std::span<const AgentProfile> roster, const SimParams& params,
                                      const FuzzyConfig& config) {
  std::vector<AgentSpeed> out;
  out.reserve(roster.size());
  for (const auto& profile : roster) out.push_back({profile.id, desired_speed(profile, params, config)});
  return out;
}

}  // namespace egress
