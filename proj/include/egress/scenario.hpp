#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egress/fuzzy_speed.hpp"
#include "egress/model.hpp"
#include "egress/roster.hpp"

namespace egress {

/// One self-contained experiment: geometry, population, parameters and the
/// speed model. When `roster_spec` is set, `roster` holds the profiles it
/// generates.
struct Scenario {
  std::string name;
  FloorPlan floor;
  std::optional<RosterSpec> roster_spec;
  std::vector<AgentProfile> roster;
  SimParams params;
  FuzzyConfig fuzzy = FuzzyConfig::defaults();

  bool operator==(const Scenario&) const = default;
};

/// Checks every geometric, roster and parameter invariant. An empty report
/// means the scenario can be rasterized and simulated as-is.
ValidationReport validate_scenario(const FloorPlan& plan, const std::vector<AgentProfile>& roster,
                                   const SimParams& params);

/// Also checks the speed model covers every agent's attributes.
ValidationReport validate_scenario(const Scenario& scenario);

}  // namespace egress
