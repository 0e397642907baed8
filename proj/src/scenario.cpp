#include "egress/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "egress/floor_field.hpp"

namespace egress {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool positive_rect(const Rect& r) { return r.width_m > 0.0 && r.length_m > 0.0; }

// Closed rectangle against the aperture's closed span.
bool rect_touches_aperture(const Rect& r, const Aperture& a, const FloorPlan& plan) {
  const double half = a.width_m / 2.0;
  auto spans = [&](double x0, double x1, double y0, double y1) {
    return r.x_min() <= x1 && x0 <= r.x_max() && r.y_min() <= y1 && y0 <= r.y_max();
  };
  // Orientation follows the edge the aperture sits on; test both spans when
  // unsure, which only makes the check stricter.
  bool horizontal = false;
  bool vertical = false;
  std::vector<Rect> boxes{plan.bounds()};
  for (const auto& region : plan.regions) boxes.push_back(region.bounds());
  for (const auto& box : boxes) {
    if (!lies_on_edge(a, box)) continue;
    if (std::abs(a.center.y - box.y_min()) < 1e-9 || std::abs(a.center.y - box.y_max()) < 1e-9) horizontal = true;
    if (std::abs(a.center.x - box.x_min()) < 1e-9 || std::abs(a.center.x - box.x_max()) < 1e-9) vertical = true;
  }
  if (horizontal && spans(a.center.x - half, a.center.x + half, a.center.y, a.center.y)) return true;
  if (vertical && spans(a.center.x, a.center.x, a.center.y - half, a.center.y + half)) return true;
  return false;
}

void check_aperture(ValidationReport& report, const Aperture& a, const Rect& edge_box, const std::string& where) {
  const std::string entity = "aperture " + a.id;
  if (!(a.width_m > 0.0)) report.add(entity, "width must be positive");
  else if (!lies_on_edge(a, edge_box)) report.add(entity, "does not lie on a wall of " + where);
}

void check_floor(ValidationReport& report, const FloorPlan& plan) {
  if (!(plan.width_m > 0.0) || !(plan.length_m > 0.0)) {
    report.add("floor", "width and length must be positive");
    return;
  }
  const Rect floor = plan.bounds();
  if (plan.main_exits.empty()) report.add("floor", "no main exit");

  std::set<std::string> ids;
  for (const auto& a : plan.apertures()) {
    if (!ids.insert(a.id).second) report.add("aperture " + a.id, "duplicate aperture id");
  }
  std::set<std::string> names;
  for (const auto& region : plan.regions) {
    const std::string entity = "region " + region.name;
    if (!names.insert(region.name).second) report.add(entity, "duplicate region name");
    if (!positive_rect(region.bounds())) report.add(entity, "extents must be positive");
    else if (!floor.contains(region.bounds())) report.add(entity, "lies outside the floor bounds");
    if (region.exits.empty()) report.add(entity, "has no exit aperture");
    for (const auto& a : region.exits) {
      if (a.kind != ApertureKind::room_exit) report.add("aperture " + a.id, "region exits must be room exits");
      check_aperture(report, a, region.bounds(), entity);
    }
  }
  for (std::size_t i = 0; i < plan.regions.size(); ++i) {
    for (std::size_t j = i + 1; j < plan.regions.size(); ++j) {
      if (plan.regions[i].bounds().overlaps(plan.regions[j].bounds()))
        report.add("region " + plan.regions[i].name, "overlaps region " + plan.regions[j].name);
    }
  }
  for (const auto& a : plan.main_exits) {
    if (a.kind != ApertureKind::main_exit) report.add("aperture " + a.id, "floor exits must be main exits");
    check_aperture(report, a, floor, "the floor boundary");
  }

  for (std::size_t i = 0; i < plan.obstacles.size(); ++i) {
    const Rect& o = plan.obstacles[i];
    const std::string entity = "obstacle #" + std::to_string(i);
    if (!positive_rect(o)) {
      report.add(entity, "extents must be positive");
      continue;
    }
    if (!floor.contains(o)) report.add(entity, "lies outside the floor bounds");
    for (const auto& region : plan.regions) {
      const Rect b = region.bounds();
      if (b.overlaps(o) && !b.contains(o)) report.add(entity, "straddles the boundary of region " + region.name);
    }
    for (const auto& a : plan.apertures()) {
      if (rect_touches_aperture(o, a, plan)) report.add(entity, "overlaps aperture " + a.id);
    }
  }
}

void check_roster(ValidationReport& report, const std::vector<AgentProfile>& roster) {
  std::set<std::string> ids;
  auto in_unit = [](double v) { return v >= 0.0 && v <= 100.0; };
  for (const auto& p : roster) {
    const std::string entity = "agent " + p.id;
    if (p.id.empty()) report.add("agent", "empty agent id");
    if (!ids.insert(p.id).second) report.add(entity, "duplicate agent id");
    if (!(p.age >= 18.0)) report.add(entity, "age " + num(p.age) + " is below 18");
    if (!(p.weight_kg > 0.0)) report.add(entity, "weight must be positive");
    if (!in_unit(p.disease)) report.add(entity, "disease intensity outside [0,100]");
    if (!in_unit(p.shock)) report.add(entity, "shock intensity outside [0,100]");
    if (!in_unit(p.collaboration)) report.add(entity, "collaboration intensity outside [0,100]");
  }
}

void check_params(ValidationReport& report, const SimParams& p) {
  if (!(p.tick_s > 0.0)) report.add("params.tick_s", "must be positive");
  if (!(p.emergency_coeff >= 1.0)) report.add("params.emergency_coeff", "must be at least 1");
  if (!(p.female_factor > 0.0 && p.female_factor <= 1.0)) report.add("params.female_factor", "must lie in (0,1]");
  if (!(p.fall_prob >= 0.0 && p.fall_prob <= 1.0)) report.add("params.fall_prob", "must lie in [0,1]");
  if (!(p.fall_duration_s >= 0.0)) report.add("params.fall_duration_s", "must be nonnegative");
  if (!(p.patience_s >= 0.0)) report.add("params.patience_s", "must be nonnegative");
  if (!(p.max_sim_s > 0.0)) report.add("params.max_sim_s", "must be positive");
}

void check_placement(ValidationReport& report, const FloorPlan& plan, const std::vector<AgentProfile>& roster,
                     const SimParams& params) {
  const Grid grid = rasterize(plan);
  for (const auto& exit : grid.exits()) {
    if (grid.door_cells(*grid.exit_index(exit.id)).empty())
      report.add("aperture " + exit.id, "rasterizes to no door cell");
  }
  if (params.placement == Placement::random_in_rect) {
    if (!positive_rect(params.spawn_rect)) {
      report.add("params.spawn_rect", "extents must be positive");
      return;
    }
    if (!plan.bounds().contains(params.spawn_rect)) report.add("params.spawn_rect", "lies outside the floor bounds");
    const std::size_t capacity = grid.walkable_cells_in(params.spawn_rect).size();
    if (capacity < roster.size()) {
      report.add("params.spawn_rect", "spawn capacity exceeded: " + std::to_string(roster.size()) + " agents, " +
                                          std::to_string(capacity) + " walkable cells");
    }
    return;
  }
  if (params.manual_cells.size() != roster.size()) {
    report.add("params.manual_cells", "needs exactly one cell per agent");
    return;
  }
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < params.manual_cells.size(); ++i) {
    const CellPos c = params.manual_cells[i];
    const std::string entity = "agent " + roster[i].id;
    if (!grid.in_bounds(c) || grid.at(c).kind != CellKind::walkable)
      report.add(entity, "manual cell (" + std::to_string(c.col) + "," + std::to_string(c.row) + ") is blocked");
    if (!seen.insert({c.col, c.row}).second) report.add(entity, "manual cell is duplicated");
  }
}

}  // namespace

ValidationReport validate_scenario(const FloorPlan& plan, const std::vector<AgentProfile>& roster,
                                   const SimParams& params) {
  ValidationReport report;
  check_floor(report, plan);
  check_roster(report, roster);
  check_params(report, params);
  // Rasterizing a malformed floor is meaningless.
  if (report.ok()) check_placement(report, plan, roster, params);
  return report;
}

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report = validate_scenario(scenario.floor, scenario.roster, scenario.params);
  for (const auto& p : scenario.roster) {
    for (Property prop : kAllProperties) {
      try {
        (void)property_speed(p, prop, scenario.fuzzy);
      } catch (const std::exception& e) {
        report.add("agent " + p.id, e.what());
      }
    }
  }
  return report;
}

}  // namespace egress
