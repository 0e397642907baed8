#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace egress {

// Continuous floor geometry. All lengths are meters; x runs along the floor
// width, y along its length, origin at the top-left corner.

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct Rect {
  Point origin;
  double width_m = 0.0;
  double length_m = 0.0;

  double x_min() const { return origin.x; }
  double y_min() const { return origin.y; }
  double x_max() const { return origin.x + width_m; }
  double y_max() const { return origin.y + length_m; }

  /// Half-open containment: [x_min, x_max) x [y_min, y_max).
  bool contains(Point p) const {
    return p.x >= x_min() && p.x < x_max() && p.y >= y_min() && p.y < y_max();
  }
  bool contains(const Rect& other) const;
  /// True when the interiors overlap (shared edges do not count).
  bool overlaps(const Rect& other) const;

  bool operator==(const Rect&) const = default;
};

using ObstacleRect = Rect;

enum class ApertureKind { room_exit, main_exit };

struct Aperture {
  std::string id;
  Point center;
  double width_m = 0.0;
  ApertureKind kind = ApertureKind::room_exit;

  bool operator==(const Aperture&) const = default;
};

struct Region {
  std::string name;
  Point origin;
  double width_m = 0.0;
  double length_m = 0.0;
  std::vector<Aperture> exits;

  Rect bounds() const { return Rect{origin, width_m, length_m}; }
  bool operator==(const Region&) const = default;
};

struct FloorPlan {
  double width_m = 0.0;
  double length_m = 0.0;
  std::vector<Region> regions;
  std::vector<Aperture> main_exits;
  std::vector<ObstacleRect> obstacles;

  Rect bounds() const { return Rect{{0.0, 0.0}, width_m, length_m}; }
  /// Room exits in region order followed by main exits.
  std::vector<Aperture> apertures() const;
  bool operator==(const FloorPlan&) const = default;
};

enum class Gender { male, female };

struct PropensitySet {
  bool wait = false;
  bool aside = false;
  bool jump_over = false;
  bool help = false;
  bool wait_for_fallen = false;

  bool operator==(const PropensitySet&) const = default;
};

struct AgentProfile {
  std::string id;
  Gender gender = Gender::male;
  double age = 18.0;
  double weight_kg = 70.0;
  double disease = 0.0;        // intensity on [0,100]
  double shock = 0.0;          // intensity on [0,100]
  double collaboration = 0.0;  // intensity on [0,100]
  bool familiar = false;
  PropensitySet propensities;

  bool operator==(const AgentProfile&) const = default;
};

/// Integer cell coordinates on the rasterized grid.
struct CellPos {
  int col = 0;
  int row = 0;

  bool operator==(const CellPos&) const = default;
};

enum class Placement { random_in_rect, manual };

struct SimParams {
  double tick_s = 0.1;
  double emergency_coeff = 1.25;
  double female_factor = 0.5;
  double fall_prob = 0.05;
  double fall_duration_s = 2.0;
  double patience_s = 2.0;  // blocked time before detouring around a standing agent
  double max_sim_s = 600.0;
  std::uint64_t seed = 1;
  Placement placement = Placement::random_in_rect;
  Rect spawn_rect;
  std::vector<CellPos> manual_cells;  // one per roster entry, manual mode only

  bool operator==(const SimParams&) const = default;
};

struct Violation {
  std::string entity;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string entity, std::string message) {
    violations.push_back({std::move(entity), std::move(message)});
  }
  bool mentions(std::string_view text) const;
  std::string to_string() const;
};

std::string_view to_string(Gender g);
std::string_view to_string(ApertureKind k);
std::string_view to_string(Placement p);

}  // namespace egress
