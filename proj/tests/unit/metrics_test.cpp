#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "egress/engine.hpp"
#include "egress/metrics.hpp"

using namespace egress;

namespace {

EventRecord ev(std::int64_t tick, std::size_t agent, EventKind kind) { return EventRecord{tick, agent, kind, {}}; }

RunSummary run_with(double cwa, double cwo, std::optional<double> evac) {
  RunSummary r;
  r.cwa_rate_pct = cwa;
  r.cwo_rate_pct = cwo;
  r.complete = evac.has_value();
  r.total_evac_s = evac.value_or(0.0);
  return r;
}

}  // namespace

TEST_CASE("rates count affected agents, not events") {
  EventLog log;
  for (std::size_t i = 0; i < 50; ++i) {
    log.push_back(ev(1, i, EventKind::CWA));
    log.push_back(ev(2, i, EventKind::CWA));
  }
  for (std::size_t i = 0; i < 25; ++i) log.push_back(ev(3, i + 40, EventKind::CWO));
  for (std::size_t i = 0; i < 81; ++i) log.push_back(ev(static_cast<std::int64_t>(10 + i), i, EventKind::EXIT));
  const RunSummary r = summarize(log, 81, 0.1);
  CHECK(r.cwa_rate_pct == doctest::Approx(100.0 * 50 / 81).epsilon(1e-12));
  CHECK(r.cwa_rate_pct == doctest::Approx(61.728).epsilon(1e-4));
  CHECK(r.cwo_rate_pct == doctest::Approx(30.864).epsilon(1e-4));
  CHECK(r.complete);
  CHECK(r.total_evac_s == doctest::Approx(9.0));
  CHECK(r.per_agent[0].cwa_count == 2);
  CHECK(r.per_agent[0].evac_time_s == doctest::Approx(1.0));
}

TEST_CASE("missing exits make a run incomplete") {
  const EventLog log = {ev(5, 0, EventKind::EXIT)};
  const std::string ids[] = {"a", "b"};
  const RunSummary r = summarize(log, ids, 0.1);
  CHECK_FALSE(r.complete);
  CHECK(r.stranded == std::vector<std::string>{"b"});
  CHECK_FALSE(r.per_agent[1].evac_time_s.has_value());
}

TEST_CASE("observed behaviours") {
  const EventLog log = {ev(1, 0, EventKind::ASIDE), ev(1, 1, EventKind::WAIT_FOR_FALLEN),
                        ev(2, 0, EventKind::JUMP_OVER), ev(2, 1, EventKind::CWA), ev(3, 1, EventKind::FALL)};
  const RunSummary r = summarize(log, 2, 0.1);
  CHECK(r.obde == std::set<std::string>{"aside", "jump over", "wait"});
  CHECK(r.per_agent[0].behaviors == std::set<std::string>{"aside", "jump over"});
  CHECK(behavior_label(EventKind::HELP) == "help");
  CHECK(behavior_label(EventKind::WAIT) == "wait");
  CHECK(behavior_label(EventKind::CWA).empty());
  CHECK(behavior_label(EventKind::EXIT).empty());
}

TEST_CASE("an empty roster yields zero rates") {
  const RunSummary r = summarize(EventLog{}, 0, 0.1);
  CHECK(r.cwa_rate_pct == 0.0);
  CHECK(r.complete);
  CHECK(r.total_evac == "0:0:0");
}

TEST_CASE("time formatting") {
  CHECK(format_time(60.941) == "1:0:941");
  CHECK(format_time(0.0) == "0:0:0");
  CHECK(format_time(47.261) == "0:47:261");
  CHECK(format_time(5.0) == "0:5:0");
  CHECK(format_time(125.9999) == "2:5:999");
  CHECK_THROWS_AS(format_time(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(format_time(NAN), std::invalid_argument);
}

TEST_CASE("time parsing inverts formatting to the millisecond") {
  for (double s : {0.0, 0.1, 4.2, 59.999, 60.941, 47.261, 3599.5}) {
    CHECK(parse_time(format_time(s)) == doctest::Approx(std::floor(s * 1000 + 1e-6) / 1000).epsilon(1e-12));
  }
  CHECK_THROWS_AS(parse_time("1:60:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_time("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_time("a:b:c"), std::invalid_argument);
  CHECK_THROWS_AS(parse_time("0:0:1000"), std::invalid_argument);
}

TEST_CASE("aggregate with a single run has zero spread") {
  const RunSummary runs[] = {run_with(40, 10, 30.0)};
  const ScenarioStats s = aggregate(runs, "x");
  CHECK(s.runs == 1);
  CHECK(s.cwa_mean == 40);
  CHECK(s.cwa_sd == 0);
  CHECK(s.evac_sd_s == 0);
  CHECK(s.evac_mean_s == doctest::Approx(30.0));
}

TEST_CASE("aggregate uses the sample standard deviation") {
  const RunSummary runs[] = {run_with(40, 0, 20.0), run_with(60, 0, 40.0)};
  const ScenarioStats s = aggregate(runs);
  CHECK(s.cwa_mean == 50);
  CHECK(s.cwa_sd == doctest::Approx(std::sqrt(200.0)));
  CHECK(s.cwa_sd == doctest::Approx(14.142).epsilon(1e-4));
  CHECK(s.evac_mean_s == doctest::Approx(30.0));
  CHECK(s.evac_sd_s == doctest::Approx(14.142).epsilon(1e-4));
}

TEST_CASE("incomplete runs are counted but excluded from the time mean") {
  const RunSummary runs[] = {run_with(10, 0, 20.0), run_with(20, 0, std::nullopt), run_with(30, 0, 40.0)};
  const ScenarioStats s = aggregate(runs);
  CHECK(s.incomplete == 1);
  CHECK(s.cwa_mean == doctest::Approx(20.0));
  CHECK(s.evac_mean_s == doctest::Approx(30.0));

  const RunSummary none[] = {run_with(10, 0, std::nullopt)};
  CHECK_FALSE(aggregate(none).evac_mean_s.has_value());
  CHECK_THROWS_AS(aggregate(std::span<const RunSummary>{}), std::invalid_argument);
}

TEST_CASE("stats CSV") {
  const RunSummary runs[] = {run_with(40, 10, 20.0), run_with(60, 10, 40.0)};
  ScenarioStats s = aggregate(runs, "no1a");
  s.obde = {"wait", "aside"};
  CHECK(stats_csv_header() ==
        "scenario,runs,cwa_mean_pct,cwa_sd_pct,cwo_mean_pct,cwo_sd_pct,obde,evac_mean_s,evac_sd_s,evac_mean,"
        "incomplete\n");
  CHECK(stats_csv_row(s) == "no1a,2,50.000,14.142,10.000,0.000,aside;wait,30.000,14.142,0:30:0,0\n");
}
