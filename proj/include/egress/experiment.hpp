#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "egress/engine.hpp"
#include "egress/metrics.hpp"
#include "egress/scenario.hpp"

namespace egress {

/// The scenario failed validation; the report lists every violation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error(report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct RunResult {
  RunSummary summary;
  EventLog log;
  std::vector<AgentState> agents;  // final states
};

/// validate -> rasterize -> fields -> speeds -> engine -> summarize. Throws
/// ValidationError when the scenario is invalid or some walkable cell cannot
/// reach a main exit.
RunResult run_once(const Scenario& scenario, std::uint64_t seed, TraceSink trace = {});

/// Seeds base, base+1, ..., base+count-1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

struct BatchRow {
  ScenarioStats stats;
  std::vector<RunSummary> runs;
};

/// Runs every scenario for every seed. All scenarios are validated before
/// the first run.
std::vector<BatchRow> run_batch(std::span<const Scenario> scenarios, std::span<const std::uint64_t> seeds);

std::string batch_csv(std::span<const BatchRow> rows);

struct TrendCheck {
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Direction-of-effect checks over seed-averaged means: familiarity lowers
/// evacuation time (no1b < no1a, no3b < no3a, no4b < no4a), a larger spawn
/// area lowers the CWA rate (no1c < no1a), more main exits lower evacuation
/// time (no3a < no1a) and near-door placement is fastest in the no2 family.
/// Checks whose scenarios are missing from `rows` are skipped.
std::vector<TrendCheck> trend_checks(std::span<const BatchRow> rows);
std::string trend_report(std::span<const TrendCheck> checks);

}  // namespace egress
