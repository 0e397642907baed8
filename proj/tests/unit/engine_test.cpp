#include <string>
#include <vector>

#include "doctest.h"

#include "egress/engine.hpp"
#include "egress/fuzzy_speed.hpp"
#include "egress/metrics.hpp"
#include "egress/presets.hpp"
#include "support.hpp"

using namespace egress;
using namespace egress::test;

namespace {

// Two walkable rows ending in exit A on the east side.
const std::vector<std::string> kTwoLane = {
    "########",
    "#......A",
    "#......A",
    "########",
};

Scenario on_grid(std::vector<AgentProfile> roster, std::vector<CellPos> cells) {
  return manual_scenario(FloorPlan{}, std::move(roster), std::move(cells));
}

std::vector<double> speeds_of(const Scenario& s) {
  std::vector<double> out;
  for (const auto& a : roster_speeds(s.roster, s.params, s.fuzzy)) out.push_back(a.kmh);
  return out;
}

}  // namespace

TEST_CASE("3.6 km/h advances one cell every five ticks") {
  const Scenario s = manual_scenario(corridor(6.0), {plain_agent("a")}, {{1, 1}});
  Engine e = make_engine(s, {3.6});
  CHECK(e.agents()[0].credit_per_tick == doctest::Approx(0.2).epsilon(1e-12));
  for (int t = 0; t < 4; ++t) e.step();
  CHECK(e.agents()[0].cell == CellPos{1, 1});
  e.step();
  CHECK(e.agents()[0].cell == CellPos{2, 1});
  const RunOutcome out = e.run_to_completion();
  REQUIRE(out.complete);
  REQUIRE(e.agents()[0].exit_tick);
  CHECK(*e.agents()[0].exit_tick == 50);
  const RunSummary summary = summarize(e.log(), 1, s.params.tick_s);
  CHECK(summary.total_evac_s == doctest::Approx(5.0));
  CHECK(summary.total_evac == "0:5:0");
}

TEST_CASE("an empty roster still advances the clock") {
  const Scenario s = manual_scenario(corridor(3.0), {}, {});
  Engine e = make_engine(s, {});
  e.step();
  CHECK(e.tick() == 1);
  CHECK(e.all_exited());
  CHECK(e.log().empty());
}

TEST_CASE("setup errors") {
  SUBCASE("spawn overflow") {
    Scenario s = manual_scenario(corridor(3.0), {plain_agent("a"), plain_agent("b")}, {});
    s.params.placement = Placement::random_in_rect;
    s.params.spawn_rect = Rect{{0.5, 0.5}, 0.5, 0.5};
    CHECK_THROWS_AS(make_engine(s, {5, 5}), EngineSetupError);
  }
  SUBCASE("blocked manual cell") {
    const Scenario s = manual_scenario(corridor(3.0), {plain_agent("a")}, {{0, 0}});
    CHECK_THROWS_WITH_AS(make_engine(s, {5}), "manual cell of agent a is blocked", EngineSetupError);
  }
  SUBCASE("duplicate manual cell") {
    const Scenario s = manual_scenario(corridor(3.0), {plain_agent("a"), plain_agent("b")}, {{1, 1}, {1, 1}});
    CHECK_THROWS_WITH_AS(make_engine(s, {5, 5}), "manual cell of agent b is duplicated", EngineSetupError);
  }
  SUBCASE("speed count") {
    const Scenario s = manual_scenario(corridor(3.0), {plain_agent("a")}, {{1, 1}});
    CHECK_THROWS_AS(make_engine(s, {5, 5}), EngineSetupError);
  }
}

TEST_CASE("random placement uses distinct cells inside the spawn rectangle") {
  Scenario s = cafeteria_scenario();
  const Engine e = make_engine(s, speeds_of(s), 4);
  for (const auto& a : e.agents()) {
    const Point center{(a.cell.col + 0.5) * kCellSize, (a.cell.row + 0.5) * kCellSize};
    CHECK(s.params.spawn_rect.contains(center));
    CHECK(e.grid().at(a.cell).kind == CellKind::walkable);
  }
  CHECK(e.check_invariants());
}

TEST_CASE("familiar agents head for the nearest main exit") {
  const Grid g = grid_from({
      "##########",
      "A........B",
      "##########",
  });
  AgentProfile west = plain_agent("w");
  west.familiar = true;
  AgentProfile east = plain_agent("e");
  east.familiar = true;
  const Scenario s = on_grid({west, east}, {{2, 1}, {7, 1}});
  const Engine e = make_engine(s, g, {5, 5});
  CHECK(e.fields()[static_cast<std::size_t>(e.agents()[0].target)].exit_id() == "A");
  CHECK(e.fields()[static_cast<std::size_t>(e.agents()[1].target)].exit_id() == "B");
}

TEST_CASE("a blocked agent with the aside propensity sidesteps") {
  const Grid g = grid_from(kTwoLane);
  PropensitySet aside;
  aside.aside = true;
  const Scenario s = on_grid({plain_agent("x", aside), plain_agent("b")}, {{3, 1}, {4, 1}});
  Engine e = make_engine(s, g, {5, 0});
  REQUIRE(e.preferred_cell(0) == CellPos{4, 1});
  e.agent(0).credit = 2.0;
  e.resolve_agent_collision(0, {4, 1});
  CHECK(count_events(e.log(), EventKind::CWA, 0) == 1);
  CHECK(count_events(e.log(), EventKind::ASIDE, 0) == 1);
  CHECK(count_events(e.log(), EventKind::WAIT, 0) == 0);
  CHECK(e.agents()[0].cell == CellPos{4, 2});
  CHECK(e.agents()[0].condition == Condition::aside);
  CHECK(e.check_invariants());
}

TEST_CASE("a blocked agent without it waits in place") {
  const Grid g = grid_from(kTwoLane);
  const Scenario s = on_grid({plain_agent("x"), plain_agent("b")}, {{3, 1}, {4, 1}});
  Engine e = make_engine(s, g, {5, 0});
  e.agent(0).credit = 2.0;
  e.resolve_agent_collision(0, {4, 1});
  CHECK(count_events(e.log(), EventKind::CWA, 0) == 1);
  CHECK(count_events(e.log(), EventKind::WAIT, 0) == 1);
  CHECK(e.agents()[0].cell == CellPos{3, 1});
  CHECK(e.agents()[0].condition == Condition::waiting);
  CHECK(e.agents()[0].blocked_ticks == 1);
  CHECK(count_events(e.log(), EventKind::FALL) == 0);
}

TEST_CASE("a certain fall puts the colliding agent down") {
  const Grid g = grid_from(kTwoLane);
  Scenario s = on_grid({plain_agent("x"), plain_agent("b")}, {{3, 1}, {4, 1}});
  s.params.fall_prob = 1.0;
  Engine e = make_engine(s, g, {5, 0});
  e.resolve_agent_collision(0, {4, 1});
  CHECK(count_events(e.log(), EventKind::FALL, 0) == 1);
  CHECK(e.agents()[0].condition == Condition::fallen);
  CHECK(e.agents()[0].fall_ticks == 20);
  CHECK(e.agents()[0].credit == 0.0);
}

TEST_CASE("no collisions are logged without contention") {
  const Scenario s = manual_scenario(corridor(8.0), {plain_agent("a")}, {{1, 1}});
  Engine e = make_engine(s, {6.0});
  CHECK(e.run_to_completion().complete);
  CHECK(count_events(e.log(), EventKind::CWA) == 0);
  CHECK(count_events(e.log(), EventKind::CWO) == 0);
  CHECK(count_events(e.log(), EventKind::EXIT) == 1);
}

TEST_CASE("an obstacle across the heading is bypassed at its nearer end") {
  const Grid g = grid_from({
      "##########",
      "#........#",
      "#..oooo..#",
      "#........#",
      "####A#####",
  });
  const Scenario s = on_grid({plain_agent("x")}, {{4, 1}});
  Engine e = make_engine(s, g, {3.6});
  while (e.agents()[0].cell == CellPos{4, 1}) e.step();
  CHECK(e.agents()[0].cell == CellPos{3, 1});
  CHECK(count_events(e.log(), EventKind::CWO, 0) >= 1);
  CHECK(e.run_to_completion().complete);
}

TEST_CASE("an agent with no route waits and is stranded") {
  const Grid g = grid_from({
      "#######",
      "#.#...A",
      "#######",
  });
  Scenario s = on_grid({plain_agent("x")}, {{1, 1}});
  s.params.max_sim_s = 1.0;
  Engine e = make_engine(s, g, {5});
  CHECK(e.agents()[0].target == -1);
  const RunOutcome out = e.run_to_completion();
  CHECK_FALSE(out.complete);
  CHECK(out.stranded == std::vector<std::string>{"x"});
  CHECK(count_events(e.log(), EventKind::WAIT, 0) == 10);
}

TEST_CASE("reactions to a fallen agent") {
  const Grid g = grid_from(kTwoLane);
  auto setup = [&](PropensitySet p) {
    const Scenario s = on_grid({plain_agent("x", p), plain_agent("f")}, {{3, 1}, {4, 1}});
    Engine e = make_engine(s, g, {5, 5});
    e.knock_down(1, 20);
    e.agent(0).credit = 2.5;
    return e;
  };

  SUBCASE("help halves the remaining fall time once per helper") {
    PropensitySet p;
    p.help = true;
    p.jump_over = true;
    Engine e = setup(p);
    e.fall_and_assist(1);
    CHECK(e.agents()[1].fall_ticks == 10);
    CHECK(count_events(e.log(), EventKind::HELP, 0) == 1);
    CHECK(e.agents()[0].cell == CellPos{3, 1});
    e.fall_and_assist(1);
    CHECK(e.agents()[1].fall_ticks == 10);
  }
  SUBCASE("jumping over costs two steps of credit") {
    PropensitySet p;
    p.jump_over = true;
    p.wait_for_fallen = true;
    Engine e = setup(p);
    e.fall_and_assist(1);
    CHECK(count_events(e.log(), EventKind::JUMP_OVER, 0) == 1);
    CHECK(e.agents()[0].cell == CellPos{5, 1});
    CHECK(e.agents()[0].credit == doctest::Approx(0.5));
  }
  SUBCASE("a short jumper waits for credit") {
    PropensitySet p;
    p.jump_over = true;
    Engine e = setup(p);
    e.agent(0).credit = 1.5;
    e.fall_and_assist(1);
    CHECK(count_events(e.log(), EventKind::JUMP_OVER, 0) == 0);
    CHECK(e.agents()[0].cell == CellPos{3, 1});
  }
  SUBCASE("waiting for the fallen") {
    PropensitySet p;
    p.wait_for_fallen = true;
    Engine e = setup(p);
    e.fall_and_assist(1);
    CHECK(count_events(e.log(), EventKind::WAIT_FOR_FALLEN, 0) == 1);
    CHECK(e.agents()[0].cell == CellPos{3, 1});
  }
  SUBCASE("no propensity detours around the fallen") {
    Engine e = setup({});
    e.fall_and_assist(1);
    CHECK(e.agents()[0].cell == CellPos{4, 2});
    CHECK(count_events(e.log(), EventKind::HELP) == 0);
    CHECK(count_events(e.log(), EventKind::JUMP_OVER) == 0);
  }
}

TEST_CASE("a fallen agent gets up after its fall time") {
  const Scenario s = manual_scenario(corridor(6.0), {plain_agent("a")}, {{1, 1}});
  Engine e = make_engine(s, {3.6});
  e.knock_down(0, 3);
  for (int t = 0; t < 3; ++t) {
    CHECK(e.agents()[0].condition == Condition::fallen);
    e.step();
  }
  CHECK(e.agents()[0].condition != Condition::fallen);
}

TEST_CASE("patience routes around a standing agent without an aside event") {
  const Grid g = grid_from(kTwoLane);
  Scenario s = on_grid({plain_agent("x"), plain_agent("b")}, {{3, 1}, {4, 1}});
  s.params.max_sim_s = 20.0;
  Engine e = make_engine(s, g, {5, 0});
  const RunOutcome out = e.run_to_completion();
  CHECK_FALSE(out.complete);
  CHECK(out.stranded == std::vector<std::string>{"b"});
  CHECK(e.agents()[0].exit_tick.has_value());
  CHECK(count_events(e.log(), EventKind::ASIDE) == 0);
  CHECK(count_events(e.log(), EventKind::WAIT, 0) == 20);
}

TEST_CASE("head-on agents trade places once patience runs out") {
  const Grid g = grid_from({
      "##########",
      "A........B",
      "##########",
  });
  Scenario s = on_grid({plain_agent("x"), plain_agent("y")}, {{4, 1}, {5, 1}});
  s.params.max_sim_s = 30.0;

  Engine e = make_engine(s, g, {3.6, 3.6});
  e.agent(0).target = 1;  // B
  e.agent(1).target = 0;  // A
  CHECK(e.run_to_completion().complete);
  CHECK(e.check_invariants());

  s.params.patience_s = 1000.0;
  Engine stuck = make_engine(s, g, {3.6, 3.6});
  stuck.agent(0).target = 1;
  stuck.agent(1).target = 0;
  CHECK(stuck.run_to_completion().stranded.size() == 2);
}

TEST_CASE("invariants hold on every tick of a cafeteria run") {
  Scenario s = cafeteria_scenario();
  Engine e = make_engine(s, speeds_of(s), 12);
  while (!e.all_exited() && e.tick() < e.max_ticks()) {
    e.step();
    REQUIRE(e.check_invariants());
  }
  CHECK(e.all_exited());
}

TEST_CASE("same seed, same run") {
  Scenario s = preset("no2a");
  Engine a = make_engine(s, speeds_of(s), 99);
  Engine b = make_engine(s, speeds_of(s), 99);
  a.run_to_completion();
  b.run_to_completion();
  CHECK(a.log() == b.log());
  Engine c = make_engine(s, speeds_of(s), 100);
  c.run_to_completion();
  CHECK(a.log() != c.log());
}

TEST_CASE("event CSV") {
  const Scenario s = manual_scenario(corridor(2.0), {plain_agent("a")}, {{2, 1}});
  Engine e = make_engine(s, {18.0});
  e.run_to_completion();
  CHECK(event_log_to_csv(e.log(), e.agents()) == "tick,agent,kind,col,row\n1,a,EXIT,3,1\n");
}
