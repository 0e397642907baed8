#pragma once

// Desired-speed assignment from personal attributes.
//
// Each attribute is fuzzified against a piecewise-linear partition, giving the
// degrees of the two adjacent sets that bracket the value. Separately the
// attribute's crisp interval selects a one-km/h speed bracket inside [2, 7].
// The two degrees are blended into a speed within that bracket, with the blend
// orientation chosen by which half of the bracket the value falls into. The
// five per-attribute speeds are averaged and scaled by the gender factor and
// the emergency coefficient.

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egress/model.hpp"

namespace egress {

enum class Property { age, weight, disease, shock, collaboration };

inline constexpr std::size_t kPropertyCount = 5;
inline constexpr std::array<Property, kPropertyCount> kAllProperties = {
    Property::age, Property::weight, Property::disease, Property::shock, Property::collaboration};

std::string_view to_string(Property p);
Property property_from_string(std::string_view name);

/// Raised when a crisp value lies outside the configured domain of a property.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Membership degrees of the two adjacent fuzzy sets bracketing a value.
/// `lo` belongs to the lower-centered set, `up` to the higher-centered one.
struct DegreePair {
  double lo = 1.0;
  double up = 0.0;
};

/// A class interval of speed, in km/h.
struct SpeedBracket {
  double min_kmh = 2.0;
  double max_kmh = 3.0;

  bool operator==(const SpeedBracket&) const = default;
};

/// Half-open [lower, upper) unless `closed_upper` is set.
struct Interval {
  double lower = 0.0;
  double upper = 1.0;
  bool closed_upper = false;

  bool contains(double v) const { return v >= lower && (closed_upper ? v <= upper : v < upper); }
  bool operator==(const Interval&) const = default;
};

/// Ruspini partition: triangular sets peaking at strictly increasing centers,
/// shouldered at both ends, so any value has at most two nonzero degrees that
/// sum to one.
class FuzzyPartition {
 public:
  FuzzyPartition(Property property, std::vector<double> centers, std::vector<std::string> labels,
                 Interval domain);

  Property property() const { return property_; }
  const std::vector<double>& centers() const { return centers_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Interval& domain() const { return domain_; }

  /// Index of the lower set of the adjacent pair used for `value`.
  std::size_t pair_index(double value) const;
  DegreePair degrees(double value) const;

  bool operator==(const FuzzyPartition&) const = default;

 private:
  Property property_;
  std::vector<double> centers_;
  std::vector<std::string> labels_;
  Interval domain_;
};

/// Maps crisp property intervals onto speed brackets. Intervals are
/// contiguous; the last one is closed on the right.
class BracketMap {
 public:
  struct Slot {
    Interval interval;
    SpeedBracket bracket;

    bool operator==(const Slot&) const = default;
  };

  BracketMap(Property property, std::vector<Slot> slots);

  Property property() const { return property_; }
  const std::vector<Slot>& slots() const { return slots_; }
  /// The slot whose interval contains `value`; throws DomainError otherwise.
  const Slot& locate(double value) const;

  bool operator==(const BracketMap&) const = default;

 private:
  Property property_;
  std::vector<Slot> slots_;
};

DegreePair membership_degrees(const FuzzyPartition& partition, double value);
SpeedBracket speed_bracket_for(const BracketMap& map, double value);

/// Midpoint of a class interval. Throws std::invalid_argument unless lower < upper.
double midvalue(double lower, double upper);
inline double midvalue(SpeedBracket b) { return midvalue(b.min_kmh, b.max_kmh); }

/// (lo*min + up*max) / (lo + up): leans toward the bracket maximum as `up` grows.
double direct_blend(DegreePair d, SpeedBracket b);
/// (up*min + lo*max) / (lo + up): the same blend with the degrees swapped.
double swapped_blend(DegreePair d, SpeedBracket b);

/// Per-property speed. The value's fractional position inside `interval` is
/// projected onto the bracket; positions above the bracket midpoint use
/// swapped_blend, positions at or below it use direct_blend.
double weight_prop(DegreePair degrees, SpeedBracket bracket, double value, const Interval& interval);

struct WeightedValue {
  double weight = 0.0;
  double value = 0.0;
};

/// Sum(w_i * v_i) / Sum(w_i). Throws std::invalid_argument on empty input or
/// non-positive total weight.
double weighted_mean(std::span<const WeightedValue> pairs);

struct PropertyModel {
  FuzzyPartition partition;
  BracketMap brackets;

  bool operator==(const PropertyModel&) const = default;
};

struct FuzzyConfig {
  PropertyModel age;
  PropertyModel weight;
  PropertyModel disease;
  PropertyModel shock;
  PropertyModel collaboration;

  const PropertyModel& of(Property p) const;
  PropertyModel& of(Property p);

  static FuzzyConfig defaults();
  bool operator==(const FuzzyConfig&) const = default;
};

double property_value(const AgentProfile& profile, Property p);

/// weight_prop for a single property of a profile.
double property_speed(const AgentProfile& profile, Property p, const FuzzyConfig& config);

/// The five per-property speeds in kAllProperties order.
std::array<double, kPropertyCount> property_speeds(const AgentProfile& profile,
                                                   const FuzzyConfig& config);

/// mean(property speeds) * gender factor * emergency coefficient, in km/h.
double desired_speed(const AgentProfile& profile, const SimParams& params, const FuzzyConfig& config);

/// desired_speed given precomputed property speeds.
double combine_speeds(std::span<const double> property_speeds, Gender gender, const SimParams& params);

struct AgentSpeed {
  std::string id;
  double kmh = 0.0;
};

std::vector<AgentSpeed> roster_speeds(std::span<const AgentProfile> roster, const SimParams& params,
                                      const FuzzyConfig& config);

}  // namespace egress
