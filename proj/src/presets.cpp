#include "egress/presets.hpp"

#include <stdexcept>

#include "egress/roster.hpp"

namespace egress {

namespace {

constexpr double kFloorWidth = 36.0;
constexpr double kFloorLength = 15.0;
constexpr double kRoomLength = 12.0;
constexpr std::uint64_t kRosterSeed = 1;

Aperture door(std::string id, double x, double y, double width, ApertureKind kind) {
  return Aperture{std::move(id), Point{x, y}, width, kind};
}

Rect table(double x, double y, double w = 1.5, double l = 1.0) { return Rect{{x, y}, w, l}; }

struct PresetDef {
  const char* name;
  int main_exits;
  int student_doors;
  SpawnArea area;
  bool familiar;
};

const PresetDef kPresets[] = {
    {"no1a", 2, 1, SpawnArea::small, false},      {"no1b", 2, 1, SpawnArea::small, true},
    {"no1c", 2, 1, SpawnArea::large, false},      {"no1d", 2, 2, SpawnArea::small, true},
    {"no2a", 1, 1, SpawnArea::large, false},      {"no2b", 1, 1, SpawnArea::very_small, false},
    {"no2c", 1, 1, SpawnArea::near_door, false},  {"no2d", 1, 2, SpawnArea::small, false},
    {"no3a", 3, 1, SpawnArea::large, false},      {"no3b", 3, 1, SpawnArea::large, true},
    {"no4a", 3, 2, SpawnArea::large, false},      {"no4b", 3, 2, SpawnArea::large, true},
};

Scenario build(std::string name, CafeteriaOptions options, SpawnArea area, bool familiar) {
  Scenario s;
  s.name = std::move(name);
  s.floor = cafeteria_plan(options);
  RosterSpec spec = survey_roster_spec();
  spec.familiar_prob = familiar ? 1.0 : 0.0;
  spec.seed = kRosterSeed;
  s.roster = generate_roster(spec, spec.seed);
  s.roster_spec = spec;
  s.params.spawn_rect = spawn_rect(area);
  return s;
}

}  // namespace

FloorPlan cafeteria_plan(CafeteriaOptions options) {
  if (options.main_exits < 1 || options.main_exits > 3) throw std::invalid_argument("main_exits must be 1, 2 or 3");
  if (options.student_doors < 1 || options.student_doors > 2)
    throw std::invalid_argument("student_doors must be 1 or 2");
  if (options.kitchen_doors < 1 || options.kitchen_doors > 2)
    throw std::invalid_argument("kitchen_doors must be 1 or 2");

  FloorPlan plan;
  plan.width_m = kFloorWidth;
  plan.length_m = kFloorLength;

  Region employees{"employees", {0.0, 0.0}, 10.0, kRoomLength, {}};
  employees.exits.push_back(door("employees-door", 5.0, kRoomLength, 2.5, ApertureKind::room_exit));

  Region students{"students", {10.0, 0.0}, 17.0, kRoomLength, {}};
  if (options.student_doors == 1) {
    students.exits.push_back(door("students-door", 18.5, kRoomLength, 2.5, ApertureKind::room_exit));
  } else {
    students.exits.push_back(door("students-door-west", 14.0, kRoomLength, 2.5, ApertureKind::room_exit));
    students.exits.push_back(door("students-door-east", 23.0, kRoomLength, 2.5, ApertureKind::room_exit));
  }

  Region kitchen{"kitchen", {27.0, 0.0}, 9.0, kRoomLength, {}};
  if (options.kitchen_doors == 2)
    kitchen.exits.push_back(door("kitchen-side", 27.0, 9.0, 2.0, ApertureKind::room_exit));
  kitchen.exits.push_back(door("kitchen-back", 31.5, kRoomLength, 2.0, ApertureKind::room_exit));

  plan.regions = {employees, students, kitchen};

  plan.main_exits.push_back(door("exit-south", 20.5, kFloorLength, 2.5, ApertureKind::main_exit));
  if (options.main_exits >= 2)
    plan.main_exits.push_back(door("exit-west", 5.0, kFloorLength, 2.5, ApertureKind::main_exit));
  if (options.main_exits >= 3)
    plan.main_exits.push_back(door("exit-east", 31.5, kFloorLength, 2.5, ApertureKind::main_exit));

  plan.obstacles = {
      // employees
      table(2.0, 2.0), table(6.0, 2.0), table(2.0, 5.0), table(6.0, 5.0), table(2.0, 8.0), table(6.0, 8.0),
      // students
      table(12.0, 3.0), table(15.5, 3.0), table(19.0, 3.0), table(22.5, 3.0),
      table(12.0, 6.5), table(15.5, 6.5), table(19.0, 6.5), table(22.5, 6.5),
      // kitchen counters
      table(29.0, 2.0, 5.0, 1.0), table(29.0, 5.5, 5.0, 1.0),
  };
  return plan;
}

Rect spawn_rect(SpawnArea area) {
  switch (area) {
    case SpawnArea::small: return Rect{{11.0, 2.0}, 9.0, 7.0};
    case SpawnArea::large: return Rect{{10.0, 0.0}, 17.0, kRoomLength};
    case SpawnArea::all_rooms: return Rect{{0.0, 0.0}, kFloorWidth, kRoomLength};
    case SpawnArea::very_small: return Rect{{12.5, 7.5}, 5.5, 4.5};
    case SpawnArea::near_door: return Rect{{15.0, 9.0}, 12.0, 6.0};
  }
  throw std::invalid_argument("unknown spawn area");
}

Scenario cafeteria_scenario() { return build("cafeteria", {}, SpawnArea::all_rooms, false); }

std::vector<Scenario> experiment_presets() {
  std::vector<Scenario> out;
  for (const auto& d : kPresets) out.push_back(build(d.name, {d.main_exits, d.student_doors, 1}, d.area, d.familiar));
  return out;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : kPresets) v.emplace_back(d.name);
    return v;
  }();
  return names;
}

Scenario preset(std::string_view name) {
  for (const auto& d : kPresets) {
    if (name == d.name) return build(d.name, {d.main_exits, d.student_doors, 1}, d.area, d.familiar);
  }
  throw std::out_of_range("unknown preset '" + std::string(name) + "'");
}

}  // namespace egress
