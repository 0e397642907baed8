#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "egress/engine.hpp"

namespace egress {

struct AgentOutcome {
  std::string id;
  std::optional<double> evac_time_s;
  std::uint32_t cwa_count = 0;
  std::uint32_t cwo_count = 0;
  std::set<std::string> behaviors;
};

struct RunSummary {
  double cwa_rate_pct = 0.0;
  double cwo_rate_pct = 0.0;
  std::set<std::string> obde;  // observed behaviour labels: aside, wait, help, jump over
  double total_evac_s = 0.0;   // last exit time
  std::string total_evac;      // min:sec:ms
  std::vector<AgentOutcome> per_agent;
  bool complete = false;
  std::vector<std::string> stranded;
  std::uint64_t seed = 0;
};

/// Behaviour label for the observed-behaviour set, empty for non-behaviours.
std::string_view behavior_label(EventKind kind);

/// Rates count affected agents: 100 * |agents with >= 1 such event| / roster.
/// A run is complete when every agent in the roster has an EXIT event.
RunSummary summarize(const EventLog& log, std::span<const std::string> agent_ids, double tick_s);
RunSummary summarize(const EventLog& log, std::size_t roster_size, double tick_s);

/// "min:sec:ms" with unpadded fields and truncated milliseconds, e.g. 60.941 s
/// is "1:0:941". Throws std::invalid_argument for negative or non-finite input.
std::string format_time(double seconds);
/// Inverse of format_time. Throws std::invalid_argument on malformed text.
double parse_time(std::string_view text);

struct ScenarioStats {
  std::string scenario;
  std::size_t runs = 0;
  double cwa_mean = 0.0;
  double cwa_sd = 0.0;
  double cwo_mean = 0.0;
  double cwo_sd = 0.0;
  std::set<std::string> obde;
  std::optional<double> evac_mean_s;  // over complete runs only
  double evac_sd_s = 0.0;
  std::size_t incomplete = 0;
};

/// Means and sample standard deviations (0 when n = 1). Throws
/// std::invalid_argument on empty input.
ScenarioStats aggregate(std::span<const RunSummary> summaries, std::string scenario = {});

nlohmann::ordered_json summary_to_json(const RunSummary& summary);
nlohmann::ordered_json stats_to_json(const ScenarioStats& stats);

std::string stats_csv_header();
std::string stats_csv_row(const ScenarioStats& stats);

}  // namespace egress
