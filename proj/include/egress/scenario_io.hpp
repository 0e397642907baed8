#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "egress/scenario.hpp"

namespace egress {

using Json = nlohmann::ordered_json;

/// Structurally unusable scenario input: malformed JSON, a missing or
/// mistyped field, or an unknown key. Distinct from validation failures.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Scenario scenario_from_json(const Json& doc);
Json scenario_to_json(const Scenario& scenario);

Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& scenario);

/// Reads and parses a file. Throws std::runtime_error if it cannot be read,
/// ParseError if its content is unusable.
Scenario load_scenario(const std::filesystem::path& path);
Json load_json(const std::filesystem::path& path);

/// Applies "dotted.key=value" overrides to a scenario document. A bare key
/// naming a params field (e.g. "emergency_coeff") addresses params. Values
/// parse as JSON when possible, otherwise as strings.
void apply_overrides(Json& doc, std::span<const std::string> overrides);

Json params_to_json(const SimParams& params);
Json profile_to_json(const AgentProfile& profile);

}  // namespace egress
