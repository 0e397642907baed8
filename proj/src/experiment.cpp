#include "egress/experiment.hpp"

#include <cstdio>
#include <limits>
#include <optional>

#include "egress/floor_field.hpp"
#include "egress/fuzzy_speed.hpp"

namespace egress {

RunResult run_once(const Scenario& scenario, std::uint64_t seed, TraceSink trace) {
  ValidationReport report = validate_scenario(scenario);
  if (!report.ok()) throw ValidationError(std::move(report));

  Grid grid = rasterize(scenario.floor);
  std::vector<FieldMap> fields = main_exit_fields(grid);
  report = reachability_check(grid, fields);
  if (!report.ok()) throw ValidationError(std::move(report));

  std::vector<double> speeds;
  speeds.reserve(scenario.roster.size());
  for (const auto& p : scenario.roster) speeds.push_back(desired_speed(p, scenario.params, scenario.fuzzy));

  Engine engine(scenario, std::move(grid), std::move(fields), speeds, seed);
  if (trace) engine.set_trace(std::move(trace));
  engine.run_to_completion();

  std::vector<std::string> ids;
  ids.reserve(scenario.roster.size());
  for (const auto& p : scenario.roster) ids.push_back(p.id);

  RunResult result;
  result.summary = summarize(engine.log(), ids, scenario.params.tick_s);
  result.summary.seed = seed;
  result.log = engine.log();
  result.agents = engine.agents();
  return result;
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(base + i);
  return out;
}

std::vector<BatchRow> run_batch(std::span<const Scenario> scenarios, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  for (const auto& s : scenarios) {
    ValidationReport report = validate_scenario(s);
    if (!report.ok()) {
      for (auto& v : report.violations) v.entity = s.name + ": " + v.entity;
      throw ValidationError(std::move(report));
    }
  }
  std::vector<BatchRow> rows;
  rows.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    BatchRow row;
    for (std::uint64_t seed : seeds) row.runs.push_back(run_once(s, seed).summary);
    row.stats = aggregate(row.runs, s.name);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string batch_csv(std::span<const BatchRow> rows) {
  std::string out = stats_csv_header();
  for (const auto& r : rows) out += stats_csv_row(r.stats);
  return out;
}

namespace {

const BatchRow* find_row(std::span<const BatchRow> rows, std::string_view name) {
  for (const auto& r : rows) {
    if (r.stats.scenario == name) return &r;
  }
  return nullptr;
}

// Incomplete scenarios count as infinitely slow.
double evac_mean(const BatchRow& row) {
  return row.stats.incomplete == 0 && row.stats.evac_mean_s ? *row.stats.evac_mean_s
                                                             : std::numeric_limits<double>::infinity();
}

}  // namespace

std::vector<TrendCheck> trend_checks(std::span<const BatchRow> rows) {
  std::vector<TrendCheck> out;
  auto less = [&](const char* lhs, const char* rhs, bool cwa, const char* what) {
    const BatchRow* a = find_row(rows, lhs);
    const BatchRow* b = find_row(rows, rhs);
    if (!a || !b) return;
    TrendCheck c;
    c.description = std::string(what) + ": " + lhs + " < " + rhs;
    c.lhs = cwa ? a->stats.cwa_mean : evac_mean(*a);
    c.rhs = cwa ? b->stats.cwa_mean : evac_mean(*b);
    c.holds = c.lhs < c.rhs;
    out.push_back(c);
  };
  less("no1b", "no1a", false, "familiarity lowers evacuation time");
  less("no3b", "no3a", false, "familiarity lowers evacuation time");
  less("no4b", "no4a", false, "familiarity lowers evacuation time");
  less("no1c", "no1a", true, "larger spawn area lowers CWA rate");
  less("no3a", "no1a", false, "more main exits lower evacuation time");

  const BatchRow* near = find_row(rows, "no2c");
  if (near) {
    for (const char* other : {"no2a", "no2b", "no2d"}) {
      const BatchRow* o = find_row(rows, other);
      if (!o) continue;
      TrendCheck c;
      c.description = std::string("near-door placement is fastest: no2c < ") + other;
      c.lhs = evac_mean(*near);
      c.rhs = evac_mean(*o);
      c.holds = c.lhs < c.rhs;
      out.push_back(c);
    }
  }
  return out;
}

std::string trend_report(std::span<const TrendCheck> checks) {
  std::string out;
  char buf[256];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%s %s (%.3f vs %.3f)\n", c.holds ? "HOLDS " : "BROKEN", c.description.c_str(),
                  c.lhs, c.rhs);
    out += buf;
  }
  return out;
}

}  // namespace egress
