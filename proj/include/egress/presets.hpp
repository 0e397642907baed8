#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "egress/model.hpp"
#include "egress/scenario.hpp"

namespace egress {

/// Spawn rectangles used by the presets, all in meters on the cafeteria floor.
enum class SpawnArea { small, large, very_small, near_door, all_rooms };

struct CafeteriaOptions {
  int main_exits = 2;     // 1, 2 or 3
  int student_doors = 2;  // 1 or 2
  int kitchen_doors = 2;  // 1 (back door only) or 2
};

/// 36 x 15 m floor: employees, students and kitchen rooms along the top
/// 12 m, a hall strip below them, and main exits in the bottom wall. The
/// default options give 5 room exits and 2 main exits.
FloorPlan cafeteria_plan(CafeteriaOptions options = {});

Rect spawn_rect(SpawnArea area);

/// The default cafeteria with the 81-person survey roster spread over all
/// rooms.
Scenario cafeteria_scenario();

/// The twelve experiment presets, named no1a .. no4b.
std::vector<Scenario> experiment_presets();
const std::vector<std::string>& preset_names();
/// Throws std::out_of_range for an unknown name.
Scenario preset(std::string_view name);

}  // namespace egress
