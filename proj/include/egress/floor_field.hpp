#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egress/model.hpp"

namespace egress {

inline constexpr double kCellSize = 0.5;  // meters
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class CellKind : std::uint8_t { walkable, wall, obstacle, door };

struct Cell {
  CellKind kind = CellKind::walkable;
  int exit = -1;  // index into Grid::exits() for door cells

  bool operator==(const Cell&) const = default;
};

struct ExitInfo {
  std::string id;
  ApertureKind kind = ApertureKind::room_exit;

  bool operator==(const ExitInfo&) const = default;
};

/// Neighbour offsets in scan order: N, NE, E, SE, S, SW, W, NW. Among equal
/// field values an orthogonal step beats a diagonal one, then scan order decides.
/// North is decreasing row (toward y = 0).
struct Direction {
  int dc = 0;
  int dr = 0;

  bool diagonal() const { return dc != 0 && dr != 0; }
  /// Step cost in cell-steps: 1 orthogonal, sqrt(2) diagonal.
  double cost() const { return diagonal() ? std::numbers::sqrt2 : 1.0; }
};

inline constexpr std::array<Direction, 8> kDirections = {
    {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

inline CellPos operator+(CellPos p, Direction d) { return {p.col + d.dc, p.row + d.dr}; }

/// Path length in meters of a route made of `orthogonal` and `diagonal` steps.
inline double path_length(std::int64_t orthogonal, std::int64_t diagonal) {
  return kCellSize * (static_cast<double>(orthogonal) + static_cast<double>(diagonal) * std::numbers::sqrt2);
}

class Grid {
 public:
  Grid() = default;
  Grid(int cols, int rows);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(CellPos p) const { return p.col >= 0 && p.row >= 0 && p.col < cols_ && p.row < rows_; }
  std::size_t index(CellPos p) const {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(p.col);
  }
  CellPos pos(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(cols_)),
            static_cast<int>(index / static_cast<std::size_t>(cols_))};
  }

  const Cell& at(CellPos p) const { return cells_[index(p)]; }
  void set(CellPos p, Cell c) { cells_[index(p)] = c; }
  void set_kind(CellPos p, CellKind k) { cells_[index(p)] = Cell{k, -1}; }

  /// Walkable and door cells can be entered; walls and obstacles cannot.
  bool passable(CellPos p) const {
    if (!in_bounds(p)) return false;
    const CellKind k = at(p).kind;
    return k == CellKind::walkable || k == CellKind::door;
  }
  bool is_door_of(CellPos p, int exit) const {
    const Cell& c = at(p);
    return c.kind == CellKind::door && c.exit == exit;
  }
  bool is_main_exit_door(CellPos p) const;

  int add_exit(std::string id, ApertureKind kind);
  const std::vector<ExitInfo>& exits() const { return exits_; }
  std::optional<int> exit_index(std::string_view id) const;
  std::vector<CellPos> door_cells(int exit) const;
  /// Ids of main exits, in the order they were added.
  std::vector<std::string> main_exit_ids() const;

  std::size_t count(CellKind k) const;
  /// Walkable cells whose centers fall inside `r`.
  std::vector<CellPos> walkable_cells_in(const Rect& r) const;

  bool operator==(const Grid&) const = default;

 private:
  int cols_ = 0;
  int rows_ = 0;
  std::vector<Cell> cells_;
  std::vector<ExitInfo> exits_;
};

/// A diagonal step is refused only when both orthogonal flank cells are
/// blocked; an agent cannot squeeze between two touching blocked cells.
/// `blocked(pos)` decides what counts as blocked for the flanks and target.
template <typename Blocked>
bool step_allowed(CellPos from, Direction d, Blocked&& blocked) {
  if (blocked(from + d)) return false;
  if (!d.diagonal()) return true;
  return !(blocked(CellPos{from.col + d.dc, from.row}) && blocked(CellPos{from.col, from.row + d.dr}));
}

inline bool step_allowed(const Grid& grid, CellPos from, Direction d) {
  return step_allowed(from, d, [&](CellPos p) { return !grid.passable(p); });
}

/// True when the aperture's whole span lies along one edge of `box`.
bool lies_on_edge(const Aperture& aperture, const Rect& box);

/// Cell index of a wall line at coordinate `v`, clamped onto the grid.
int line_index(double v, int n);

/// Classifies every 0.5 m cell: door where an aperture span covers the cell
/// center along its wall, else wall where a floor or region boundary runs,
/// else obstacle where the cell center lies in an obstacle, else walkable.
Grid rasterize(const FloorPlan& plan);

/// Shortest-path distance in meters from every cell to one exit's door cells.
class FieldMap {
 public:
  FieldMap() = default;
  FieldMap(std::string exit_id, int cols, int rows);

  const std::string& exit_id() const { return exit_id_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }

  double at(CellPos p) const { return dist_[index(p)]; }
  bool reachable(CellPos p) const { return at(p) < kInf; }
  const std::vector<double>& values() const { return dist_; }

  void set(CellPos p, double d) { dist_[index(p)] = d; }

 private:
  std::size_t index(CellPos p) const {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(p.col);
  }

  std::string exit_id_;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<double> dist_;
};

enum class FieldMode {
  blocked_obstacles,   // routing field: obstacles and walls carry infinity
  passable_obstacles,  // straight-line heading field: only walls block
};

/// Dijkstra over 8-connected passable cells. Throws std::invalid_argument for
/// an unknown exit id or an exit with no door cell.
FieldMap compute_field(const Grid& grid, std::string_view exit_id,
                       FieldMode mode = FieldMode::blocked_obstacles);

/// One routing field per main exit, in grid exit order.
std::vector<FieldMap> main_exit_fields(const Grid& grid, FieldMode mode = FieldMode::blocked_obstacles);

class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exit minimizing field distance at `cell`; ties go to the lexicographically
/// smallest id. Throws UnreachableError when every distance is infinite.
std::string nearest_exit(std::span<const FieldMap> fields, CellPos cell);

/// Lists every walkable cell that no main-exit field reaches.
ValidationReport reachability_check(const Grid& grid, std::span<const FieldMap> fields);

/// Row-major CSV matrix of field distances, "inf" for unreachable cells.
std::string field_to_csv(const FieldMap& field);

}  // namespace egress
