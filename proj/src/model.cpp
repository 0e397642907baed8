#include "egress/model.hpp"

#include <sstream>

namespace egress {

bool Rect::contains(const Rect& other) const {
  return other.x_min() >= x_min() && other.x_max() <= x_max() && other.y_min() >= y_min() &&
         other.y_max() <= y_max();
}

bool Rect::overlaps(const Rect& other) const {
  return other.x_min() < x_max() && x_min() < other.x_max() && other.y_min() < y_max() &&
         y_min() < other.y_max();
}

std::vector<Aperture> FloorPlan::apertures() const {
  std::vector<Aperture> out;
  for (const auto& region : regions) out.insert(out.end(), region.exits.begin(), region.exits.end());
  out.insert(out.end(), main_exits.begin(), main_exits.end());
  return out;
}

bool ValidationReport::mentions(std::string_view text) const {
  for (const auto& v : violations) {
    if (v.message.find(text) != std::string::npos || v.entity.find(text) != std::string::npos) return true;
  }
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.entity << ": " << v.message << '\n';
  return os.str();
}

std::string_view to_string(Gender g) { return g == Gender::male ? "male" : "female"; }

std::string_view to_string(ApertureKind k) {
  return k == ApertureKind::main_exit ? "main-exit" : "room-exit";
}

std::string_view to_string(Placement p) {
  return p == Placement::manual ? "manual" : "random-in-rect";
}

}  // namespace egress
