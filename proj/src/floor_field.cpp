#include "egress/floor_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <utility>

namespace egress {

namespace {

constexpr double kEps = 1e-9;

enum class Axis { horizontal, vertical };

// Which edge of `box` an aperture sits on, if its whole span fits that edge.
std::optional<Axis> aperture_axis(const Aperture& a, const Rect& box) {
  const double half = a.width_m / 2.0;
  auto near = [](double u, double v) { return std::abs(u - v) < kEps; };
  const bool on_h = (near(a.center.y, box.y_min()) || near(a.center.y, box.y_max())) &&
                    a.center.x - half >= box.x_min() - kEps && a.center.x + half <= box.x_max() + kEps;
  const bool on_v = (near(a.center.x, box.x_min()) || near(a.center.x, box.x_max())) &&
                    a.center.y - half >= box.y_min() - kEps && a.center.y + half <= box.y_max() + kEps;
  if (on_h) return Axis::horizontal;
  if (on_v) return Axis::vertical;
  return std::nullopt;
}

void mark_segment(Grid& grid, Axis axis, double fixed, double from, double to) {
  if (axis == Axis::horizontal) {
    const int row = line_index(fixed, grid.rows());
    for (int c = line_index(from, grid.cols()); c <= line_index(to, grid.cols()); ++c)
      grid.set_kind({c, row}, CellKind::wall);
  } else {
    const int col = line_index(fixed, grid.cols());
    for (int r = line_index(from, grid.rows()); r <= line_index(to, grid.rows()); ++r)
      grid.set_kind({col, r}, CellKind::wall);
  }
}

void mark_box_walls(Grid& grid, const Rect& box) {
  mark_segment(grid, Axis::horizontal, box.y_min(), box.x_min(), box.x_max());
  mark_segment(grid, Axis::horizontal, box.y_max(), box.x_min(), box.x_max());
  mark_segment(grid, Axis::vertical, box.x_min(), box.y_min(), box.y_max());
  mark_segment(grid, Axis::vertical, box.x_max(), box.y_min(), box.y_max());
}

void mark_door(Grid& grid, const Aperture& a, Axis axis, int exit) {
  const double lo = (axis == Axis::horizontal ? a.center.x : a.center.y) - a.width_m / 2.0;
  const double hi = lo + a.width_m;
  const int along_n = axis == Axis::horizontal ? grid.cols() : grid.rows();
  const int across = axis == Axis::horizontal ? line_index(a.center.y, grid.rows())
                                              : line_index(a.center.x, grid.cols());
  for (int i = 0; i < along_n; ++i) {
    const double center = (i + 0.5) * kCellSize;
    if (center < lo - kEps || center >= hi - kEps) continue;
    const CellPos p = axis == Axis::horizontal ? CellPos{i, across} : CellPos{across, i};
    grid.set(p, Cell{CellKind::door, exit});
  }
}

}  // namespace

Grid::Grid(int cols, int rows)
    : cols_(cols), rows_(rows), cells_(static_cast<std::size_t>(std::max(cols, 0)) * static_cast<std::size_t>(std::max(rows, 0))) {
  if (cols <= 0 || rows <= 0) throw std::invalid_argument("grid dimensions must be positive");
}

bool Grid::is_main_exit_door(CellPos p) const {
  const Cell& c = at(p);
  return c.kind == CellKind::door && exits_[static_cast<std::size_t>(c.exit)].kind == ApertureKind::main_exit;
}

int Grid::add_exit(std::string id, ApertureKind kind) {
  exits_.push_back({std::move(id), kind});
  return static_cast<int>(exits_.size()) - 1;
}

std::optional<int> Grid::exit_index(std::string_view id) const {
  for (std::size_t i = 0; i < exits_.size(); ++i) {
    if (exits_[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<CellPos> Grid::door_cells(int exit) const {
  std::vector<CellPos> out;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].kind == CellKind::door && cells_[i].exit == exit) out.push_back(pos(i));
  }
  return out;
}

std::vector<std::string> Grid::main_exit_ids() const {
  std::vector<std::string> out;
  for (const auto& e : exits_) {
    if (e.kind == ApertureKind::main_exit) out.push_back(e.id);
  }
  return out;
}

std::size_t Grid::count(CellKind k) const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [k](const Cell& c) { return c.kind == k; }));
}

std::vector<CellPos> Grid::walkable_cells_in(const Rect& r) const {
  std::vector<CellPos> out;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].kind != CellKind::walkable) continue;
    const CellPos p = pos(i);
    if (r.contains(Point{(p.col + 0.5) * kCellSize, (p.row + 0.5) * kCellSize})) out.push_back(p);
  }
  return out;
}

bool lies_on_edge(const Aperture& aperture, const Rect& box) {
  return aperture_axis(aperture, box).has_value();
}

int line_index(double v, int n) {
  const int i = static_cast<int>(std::floor(v / kCellSize + kEps));
  return std::clamp(i, 0, n - 1);
}

Grid rasterize(const FloorPlan& plan) {
  const int cols = static_cast<int>(std::ceil(plan.width_m / kCellSize - kEps));
  const int rows = static_cast<int>(std::ceil(plan.length_m / kCellSize - kEps));
  Grid grid(cols, rows);

  mark_box_walls(grid, plan.bounds());
  for (const auto& region : plan.regions) mark_box_walls(grid, region.bounds());

  for (const auto& obstacle : plan.obstacles) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const CellPos p{c, r};
        if (grid.at(p).kind != CellKind::walkable) continue;
        if (obstacle.contains(Point{(c + 0.5) * kCellSize, (r + 0.5) * kCellSize}))
          grid.set_kind(p, CellKind::obstacle);
      }
    }
  }

  for (const auto& region : plan.regions) {
    for (const auto& a : region.exits) {
      const int exit = grid.add_exit(a.id, a.kind);
      if (auto axis = aperture_axis(a, region.bounds())) mark_door(grid, a, *axis, exit);
    }
  }
  for (const auto& a : plan.main_exits) {
    const int exit = grid.add_exit(a.id, a.kind);
    if (auto axis = aperture_axis(a, plan.bounds())) mark_door(grid, a, *axis, exit);
  }
  return grid;
}

FieldMap::FieldMap(std::string exit_id, int cols, int rows)
    : exit_id_(std::move(exit_id)),
      cols_(cols),
      rows_(rows),
      dist_(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows), kInf) {}

FieldMap compute_field(const Grid& grid, std::string_view exit_id, FieldMode mode) {
  const auto exit = grid.exit_index(exit_id);
  if (!exit) throw std::invalid_argument("unknown exit id '" + std::string(exit_id) + "'");
  const auto sources = grid.door_cells(*exit);
  if (sources.empty()) throw std::invalid_argument("exit '" + std::string(exit_id) + "' has no door cell");

  auto blocked = [&](CellPos p) {
    if (!grid.in_bounds(p)) return true;
    const CellKind k = grid.at(p).kind;
    if (k == CellKind::wall) return true;
    return mode == FieldMode::blocked_obstacles && k == CellKind::obstacle;
  };

  // Distances are carried as exact (orthogonal, diagonal) step counts and
  // converted with path_length, so equal routes give bit-identical values.
  struct Steps {
    std::int64_t orthogonal = 0;
    std::int64_t diagonal = 0;
  };
  FieldMap field(std::string(exit_id), grid.cols(), grid.rows());
  std::vector<Steps> steps(grid.size());
  std::vector<bool> done(grid.size(), false);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  for (const CellPos& s : sources) {
    field.set(s, 0.0);
    open.push({0.0, grid.index(s)});
  }
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (done[u]) continue;
    done[u] = true;
    const CellPos up = grid.pos(u);
    for (const Direction dir : kDirections) {
      const CellPos vp = up + dir;
      if (!step_allowed(up, dir, blocked)) continue;
      const std::size_t v = grid.index(vp);
      if (done[v]) continue;
      Steps next = steps[u];
      (dir.diagonal() ? next.diagonal : next.orthogonal) += 1;
      const double nd = path_length(next.orthogonal, next.diagonal);
      if (nd < field.at(vp)) {
        field.set(vp, nd);
        steps[v] = next;
        open.push({nd, v});
      }
    }
  }
  return field;
}

std::vector<FieldMap> main_exit_fields(const Grid& grid, FieldMode mode) {
  std::vector<FieldMap> out;
  for (const auto& id : grid.main_exit_ids()) out.push_back(compute_field(grid, id, mode));
  return out;
}

std::string nearest_exit(std::span<const FieldMap> fields, CellPos cell) {
  const FieldMap* best = nullptr;
  for (const auto& f : fields) {
    const double d = f.at(cell);
    if (!(d < kInf)) continue;
    if (best == nullptr || d < best->at(cell) || (d == best->at(cell) && f.exit_id() < best->exit_id()))
      best = &f;
  }
  if (best == nullptr) throw UnreachableError("unreachable: no exit reaches the cell");
  return best->exit_id();
}

ValidationReport reachability_check(const Grid& grid, std::span<const FieldMap> fields) {
  ValidationReport report;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CellPos p = grid.pos(i);
    if (grid.at(p).kind != CellKind::walkable) continue;
    const bool reached = std::any_of(fields.begin(), fields.end(), [&](const FieldMap& f) { return f.reachable(p); });
    if (!reached) {
      report.add("cell (" + std::to_string(p.col) + "," + std::to_string(p.row) + ")",
                 "unreachable from every main exit");
    }
  }
  return report;
}

std::string field_to_csv(const FieldMap& field) {
  std::string out;
  char buf[32];
  for (int r = 0; r < field.rows(); ++r) {
    for (int c = 0; c < field.cols(); ++c) {
      if (c > 0) out += ',';
      const double d = field.at({c, r});
      if (d < kInf) {
        std::snprintf(buf, sizeof buf, "%.6f", d);
        out += buf;
      } else {
        out += "inf";
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace egress
