#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "egress/engine.hpp"
#include "egress/floor_field.hpp"
#include "egress/model.hpp"
#include "egress/scenario.hpp"

namespace egress::test {

/// Grid from ASCII art: '#' wall, 'o' obstacle, 'A'..'Z' door cells of a
/// main exit with that letter as id, anything else walkable.
inline Grid grid_from(const std::vector<std::string>& art) {
  const int rows = static_cast<int>(art.size());
  const int cols = static_cast<int>(art.front().size());
  Grid g(cols, rows);
  std::vector<std::pair<char, int>> exits;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const char ch = art[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (ch == '#') g.set_kind({c, r}, CellKind::wall);
      else if (ch == 'o') g.set_kind({c, r}, CellKind::obstacle);
      else if (ch >= 'A' && ch <= 'Z') {
        int id = -1;
        for (const auto& [letter, index] : exits) {
          if (letter == ch) id = index;
        }
        if (id < 0) {
          id = g.add_exit(std::string(1, ch), ApertureKind::main_exit);
          exits.emplace_back(ch, id);
        }
        g.set({c, r}, Cell{CellKind::door, id});
      }
    }
  }
  return g;
}

/// Bellman-Ford relaxation over exact (orthogonal, diagonal) step counts,
/// written independently of the library's Dijkstra.
inline std::vector<double> brute_force_field(const Grid& g, int exit, bool obstacles_block = true) {
  const int cols = g.cols();
  const int rows = g.rows();
  const std::size_t n = static_cast<std::size_t>(cols * rows);
  auto blocked = [&](int c, int r) {
    if (c < 0 || r < 0 || c >= cols || r >= rows) return true;
    const CellKind k = g.at({c, r}).kind;
    return k == CellKind::wall || (obstacles_block && k == CellKind::obstacle);
  };
  std::vector<double> dist(n, INFINITY);
  std::vector<std::pair<std::int64_t, std::int64_t>> steps(n, {0, 0});
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Cell& cell = g.at({c, r});
      if (cell.kind == CellKind::door && cell.exit == exit) dist[static_cast<std::size_t>(r * cols + c)] = 0.0;
    }
  }
  const int dc[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  const int dr[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (blocked(c, r)) continue;
        const std::size_t u = static_cast<std::size_t>(r * cols + c);
        for (int k = 0; k < 8; ++k) {
          const int nc = c + dc[k];
          const int nr = r + dr[k];
          if (blocked(nc, nr)) continue;
          const bool diag = dc[k] != 0 && dr[k] != 0;
          if (diag && blocked(c + dc[k], r) && blocked(c, r + dr[k])) continue;
          const std::size_t v = static_cast<std::size_t>(nr * cols + nc);
          if (!std::isfinite(dist[v])) continue;
          auto s = steps[v];
          if (diag) ++s.second;
          else ++s.first;
          const double d = 0.5 * (static_cast<double>(s.first) + static_cast<double>(s.second) * std::sqrt(2.0));
          if (d < dist[u]) {
            dist[u] = d;
            steps[u] = s;
            changed = true;
          }
        }
      }
    }
  }
  return dist;
}

inline AgentProfile plain_agent(std::string id, PropensitySet propensities = {}) {
  AgentProfile p;
  p.id = std::move(id);
  p.age = 30;
  p.weight_kg = 70;
  p.propensities = propensities;
  return p;
}

/// A corridor with one walkable row (three cell rows at the default height),
/// `length_m` long, main exit "E" spanning the east wall.
inline FloorPlan corridor(double length_m, double height_m = 1.5) {
  FloorPlan plan;
  plan.width_m = length_m;
  plan.length_m = height_m;
  plan.main_exits.push_back(Aperture{"E", {length_m, height_m / 2.0}, height_m, ApertureKind::main_exit});
  return plan;
}

/// Manually placed agents on the given floor with fall_prob 0.
inline Scenario manual_scenario(FloorPlan plan, std::vector<AgentProfile> roster, std::vector<CellPos> cells) {
  Scenario s;
  s.name = "test";
  s.floor = std::move(plan);
  s.roster = std::move(roster);
  s.params.placement = Placement::manual;
  s.params.manual_cells = std::move(cells);
  s.params.fall_prob = 0.0;
  return s;
}

inline Engine make_engine(const Scenario& s, std::vector<double> speeds, std::uint64_t seed = 1) {
  Grid g = rasterize(s.floor);
  auto fields = main_exit_fields(g);
  return Engine(s, std::move(g), std::move(fields), speeds, seed);
}

inline Engine make_engine(const Scenario& s, const Grid& g, std::vector<double> speeds, std::uint64_t seed = 1) {
  return Engine(s, g, main_exit_fields(g), speeds, seed);
}

inline std::size_t count_events(const EventLog& log, EventKind kind, std::size_t agent) {
  std::size_t n = 0;
  for (const auto& e : log) {
    if (e.kind == kind && e.agent == agent) ++n;
  }
  return n;
}

inline std::size_t count_events(const EventLog& log, EventKind kind) {
  std::size_t n = 0;
  for (const auto& e : log) {
    if (e.kind == kind) ++n;
  }
  return n;
}

}  // namespace egress::test
