#include "egress/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace egress {

namespace {

constexpr double kCreditEps = 1e-9;
constexpr double kCreditCap = 2.0;  // cell-steps an agent may bank while blocked

// Lower field value wins; on equal values the cheaper (orthogonal) step.
template <typename Move>
bool better(double v, Direction d, const std::optional<Move>& best) {
  return !best || v < best->value || (v == best->value && d.cost() < best->dir.cost());
}

Direction direction_between(CellPos from, CellPos to) {
  return Direction{std::clamp(to.col - from.col, -1, 1), std::clamp(to.row - from.row, -1, 1)};
}

}  // namespace

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::moving: return "moving";
    case Condition::waiting: return "waiting";
    case Condition::aside: return "aside";
    case Condition::fallen: return "fallen";
    case Condition::helping: return "helping";
    case Condition::exited: return "exited";
  }
  return "?";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::CWA: return "CWA";
    case EventKind::CWO: return "CWO";
    case EventKind::WAIT: return "WAIT";
    case EventKind::ASIDE: return "ASIDE";
    case EventKind::JUMP_OVER: return "JUMP_OVER";
    case EventKind::HELP: return "HELP";
    case EventKind::WAIT_FOR_FALLEN: return "WAIT_FOR_FALLEN";
    case EventKind::FALL: return "FALL";
    case EventKind::EXIT: return "EXIT";
  }
  return "?";
}

Engine::Engine(const Scenario& scenario, Grid grid, std::vector<FieldMap> fields, std::span<const double> speeds_kmh,
               std::uint64_t seed)
    : params_(scenario.params), grid_(std::move(grid)), fields_(std::move(fields)), rng_(seed) {
  const auto& roster = scenario.roster;
  if (speeds_kmh.size() != roster.size()) throw EngineSetupError("one speed per agent is required");
  if (!(params_.tick_s > 0.0)) throw EngineSetupError("tick_s must be positive");
  max_ticks_ = static_cast<std::int64_t>(std::floor(params_.max_sim_s / params_.tick_s + 1e-9));
  patience_ticks_ = static_cast<int>(std::lround(params_.patience_s / params_.tick_s));

  for (const auto& f : fields_) heading_fields_.push_back(compute_field(grid_, f.exit_id(), FieldMode::passable_obstacles));
  occupancy_.assign(grid_.size(), -1);
  jump_reserve_.assign(roster.size(), 0.0);

  std::vector<CellPos> cells;
  if (params_.placement == Placement::manual) {
    if (params_.manual_cells.size() != roster.size())
      throw EngineSetupError("manual placement needs exactly one cell per agent");
    cells = params_.manual_cells;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const CellPos c = cells[i];
      if (!grid_.in_bounds(c) || grid_.at(c).kind != CellKind::walkable)
        throw EngineSetupError("manual cell of agent " + roster[i].id + " is blocked");
      if (occ(c) >= 0) throw EngineSetupError("manual cell of agent " + roster[i].id + " is duplicated");
      occ(c) = static_cast<int>(i);
    }
  } else {
    std::vector<CellPos> candidates = grid_.walkable_cells_in(params_.spawn_rect);
    if (candidates.size() < roster.size())
      throw EngineSetupError("spawn overflow: " + std::to_string(roster.size()) + " agents for " +
                             std::to_string(candidates.size()) + " cells");
    rng_.shuffle(std::span<CellPos>(candidates));
    cells.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(roster.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) occ(cells[i]) = static_cast<int>(i);
  }

  agents_.reserve(roster.size());
  for (std::size_t i = 0; i < roster.size(); ++i) {
    AgentState a;
    a.id = roster[i].id;
    a.cell = cells[i];
    a.speed_kmh = speeds_kmh[i];
    a.credit_per_tick = speeds_kmh[i] / 3.6 / kCellSize * params_.tick_s;
    a.propensities = roster[i].propensities;

    std::vector<int> reachable;
    for (std::size_t f = 0; f < fields_.size(); ++f) {
      if (fields_[f].reachable(a.cell)) reachable.push_back(static_cast<int>(f));
    }
    if (roster[i].familiar) {
      try {
        const std::string id = nearest_exit(fields_, a.cell);
        for (std::size_t f = 0; f < fields_.size(); ++f) {
          if (fields_[f].exit_id() == id) a.target = static_cast<int>(f);
        }
      } catch (const UnreachableError&) {
        a.target = -1;
      }
    } else if (!reachable.empty()) {
      a.target = reachable[rng_.below(reachable.size())];
    }
    agents_.push_back(std::move(a));
  }
}

Engine init_engine(const Scenario& scenario, const Grid& grid, std::vector<FieldMap> fields,
                   std::span<const double> speeds_kmh, std::uint64_t seed) {
  return Engine(scenario, grid, std::move(fields), speeds_kmh, seed);
}

std::size_t Engine::exited_count() const {
  return static_cast<std::size_t>(
      std::count_if(agents_.begin(), agents_.end(), [](const AgentState& a) { return !a.on_grid(); }));
}

std::optional<std::size_t> Engine::occupant(CellPos p) const {
  if (!grid_.in_bounds(p)) return std::nullopt;
  const int o = occ(p);
  if (o < 0) return std::nullopt;
  return static_cast<std::size_t>(o);
}

const FieldMap* Engine::target_field(std::size_t i) const {
  const int t = agents_[i].target;
  return t < 0 ? nullptr : &fields_[static_cast<std::size_t>(t)];
}

const FieldMap* Engine::heading_field(std::size_t i) const {
  const int t = agents_[i].target;
  return t < 0 ? nullptr : &heading_fields_[static_cast<std::size_t>(t)];
}

double Engine::field_distance(std::size_t i) const {
  const FieldMap* f = target_field(i);
  return f ? f->at(agents_[i].cell) : kInf;
}

std::optional<Engine::Move> Engine::preferred_move(std::size_t i) const {
  const FieldMap* field = target_field(i);
  if (!field) return std::nullopt;
  const CellPos here = agents_[i].cell;
  const double current = field->at(here);
  std::optional<Move> best;
  for (const Direction d : kDirections) {
    if (!step_allowed(grid_, here, d)) continue;
    const CellPos n = here + d;
    const double v = field->at(n);
    if (!(v < current)) continue;
    if (better(v, d, best)) best = Move{n, d, v};
  }
  return best;
}

std::optional<CellPos> Engine::preferred_cell(std::size_t i) const {
  if (auto m = preferred_move(i)) return m->cell;
  return std::nullopt;
}

std::optional<Engine::Move> Engine::best_free_neighbour(std::size_t i, bool allow_equal,
                                                        std::optional<CellPos> exclude) const {
  const FieldMap* field = target_field(i);
  if (!field) return std::nullopt;
  const CellPos here = agents_[i].cell;
  const double current = field->at(here);
  std::optional<Move> best;
  for (const Direction d : kDirections) {
    if (!step_allowed(grid_, here, d)) continue;
    const CellPos n = here + d;
    if (exclude && n == *exclude) continue;
    if (occ(n) >= 0) continue;
    const double v = field->at(n);
    if (!(v < kInf)) continue;
    if (allow_equal ? !(v <= current) : !(v < current)) continue;
    if (better(v, d, best)) best = Move{n, d, v};
  }
  return best;
}

bool Engine::heading_blocked(std::size_t i) const {
  const FieldMap* heading = heading_field(i);
  if (!heading) return false;
  const CellPos here = agents_[i].cell;
  auto wall = [&](CellPos p) { return !grid_.in_bounds(p) || grid_.at(p).kind == CellKind::wall; };
  const double current = heading->at(here);
  std::optional<Move> best;
  for (const Direction d : kDirections) {
    if (!step_allowed(here, d, wall)) continue;
    const CellPos n = here + d;
    const double v = heading->at(n);
    if (!(v < current)) continue;
    if (!best || v < best->value) best = Move{n, d, v};
  }
  return best && grid_.at(best->cell).kind == CellKind::obstacle;
}

void Engine::record(std::size_t i, EventKind kind) {
  AgentState& a = agents_[i];
  ++a.counters[static_cast<std::size_t>(kind)];
  log_.push_back({tick_, i, kind, a.cell});
}

void Engine::exit_agent(std::size_t i) {
  AgentState& a = agents_[i];
  record(i, EventKind::EXIT);
  occ(a.cell) = -1;
  a.condition = Condition::exited;
  a.exit_tick = tick_;
  a.credit = 0.0;
}

void Engine::move_to(std::size_t i, CellPos to, double cost) {
  AgentState& a = agents_[i];
  a.credit = std::max(0.0, a.credit - cost);
  a.blocked_ticks = 0;
  occ(a.cell) = -1;
  a.cell = to;
  occ(to) = static_cast<int>(i);
  if (grid_.is_main_exit_door(to)) exit_agent(i);
}

void Engine::knock_down(std::size_t i, int ticks) {
  AgentState& a = agents_.at(i);
  record(i, EventKind::FALL);
  a.condition = Condition::fallen;
  a.fall_ticks = std::max(ticks, 0);
  a.credit = 0.0;
  a.helpers.clear();
}

bool Engine::detour(std::size_t i) {
  AgentState& a = agents_[i];
  const auto m = best_free_neighbour(i, false, std::nullopt);
  if (!m) {
    record(i, EventKind::WAIT);
    a.condition = Condition::waiting;
    return false;
  }
  if (a.credit + kCreditEps < m->dir.cost()) return false;
  a.condition = Condition::moving;
  move_to(i, m->cell, m->dir.cost());
  return true;
}

void Engine::resolve_obstacle_block(std::size_t i) {
  record(i, EventKind::CWO);
  detour(i);
}

bool Engine::collide(std::size_t i, CellPos blocked) {
  AgentState& a = agents_[i];
  record(i, EventKind::CWA);
  bool moved = false;
  if (a.propensities.aside) {
    const auto m = best_free_neighbour(i, true, blocked);
    if (m && a.credit + kCreditEps >= m->dir.cost()) {
      move_to(i, m->cell, m->dir.cost());
      if (a.on_grid()) {
        record(i, EventKind::ASIDE);
        a.condition = Condition::aside;
      }
      moved = true;
    }
  }
  if (!moved && a.blocked_ticks >= patience_ticks_) {
    const auto m = best_free_neighbour(i, true, blocked);
    if (m && a.credit + kCreditEps >= m->dir.cost()) {
      move_to(i, m->cell, m->dir.cost());
      moved = true;
    } else {
      moved = swap_head_on(i, blocked);
    }
  }
  if (!moved) {
    record(i, EventKind::WAIT);
    a.condition = Condition::waiting;
    ++a.blocked_ticks;
  }
  if (rng_.bernoulli(params_.fall_prob) && a.on_grid())
    knock_down(i, static_cast<int>(std::lround(params_.fall_duration_s / params_.tick_s)));
  return moved;
}

// Two agents that each want the other's cell trade places.
bool Engine::swap_head_on(std::size_t i, CellPos blocked) {
  const int other = occ(blocked);
  if (other < 0) return false;
  const auto j = static_cast<std::size_t>(other);
  if (agents_[j].condition == Condition::fallen) return false;
  const auto theirs = preferred_move(j);
  if (!theirs || !(theirs->cell == agents_[i].cell)) return false;
  const Direction d = direction_between(agents_[i].cell, blocked);
  AgentState& a = agents_[i];
  AgentState& b = agents_[j];
  if (a.credit + kCreditEps < d.cost()) return false;
  const CellPos mine = a.cell;
  a.credit = std::max(0.0, a.credit - d.cost());
  b.credit = std::max(0.0, b.credit - d.cost());
  a.blocked_ticks = 0;
  b.blocked_ticks = 0;
  a.cell = blocked;
  b.cell = mine;
  occ(blocked) = static_cast<int>(i);
  occ(mine) = static_cast<int>(j);
  if (grid_.is_main_exit_door(b.cell)) exit_agent(j);
  if (grid_.is_main_exit_door(a.cell)) exit_agent(i);
  return true;
}

void Engine::resolve_agent_collision(std::size_t agent, CellPos blocked) { collide(agent, blocked); }

bool Engine::react_to_fallen(std::size_t i, std::size_t f) {
  AgentState& a = agents_[i];
  AgentState& fallen = agents_[f];
  const Direction d = direction_between(a.cell, fallen.cell);

  if (a.propensities.help) {
    if (std::find(fallen.helpers.begin(), fallen.helpers.end(), i) == fallen.helpers.end()) {
      fallen.helpers.push_back(i);
      fallen.fall_ticks /= 2;
      record(i, EventKind::HELP);
    }
    a.condition = Condition::helping;
    return false;
  }
  if (a.propensities.jump_over) {
    const CellPos landing = fallen.cell + d;
    const FieldMap* field = target_field(i);
    if (field && step_allowed(grid_, fallen.cell, d) && occ(landing) < 0 && field->at(landing) < field->at(a.cell)) {
      const double cost = 2.0 * d.cost();
      if (a.credit + kCreditEps < cost) {
        jump_reserve_[i] = cost;
        a.condition = Condition::waiting;
        return false;
      }
      record(i, EventKind::JUMP_OVER);
      a.condition = Condition::moving;
      move_to(i, landing, cost);
      return true;
    }
  }
  if (a.propensities.wait_for_fallen) {
    record(i, EventKind::WAIT_FOR_FALLEN);
    a.condition = Condition::waiting;
    return false;
  }
  // The fallen agent's cell is occupied, so best_free_neighbour already
  // treats it as a temporary obstacle.
  return detour(i);
}

void Engine::fall_and_assist(std::size_t f) {
  const CellPos at = agents_.at(f).cell;
  if (agents_[f].condition != Condition::fallen) return;
  for (const Direction d : kDirections) {
    const CellPos n = at + d;
    if (!grid_.in_bounds(n)) continue;
    const int j = occ(n);
    if (j < 0) continue;
    const auto ju = static_cast<std::size_t>(j);
    if (agents_[ju].condition == Condition::fallen) continue;
    const auto pref = preferred_move(ju);
    if (pref && pref->cell == at) react_to_fallen(ju, f);
  }
}

void Engine::take_turn(std::size_t i) {
  AgentState& a = agents_[i];
  if (!a.on_grid()) return;
  if (a.condition == Condition::fallen) {
    if (a.fall_ticks > 0) --a.fall_ticks;
    if (a.fall_ticks > 0) return;
    a.condition = Condition::moving;
    a.helpers.clear();
  }
  if (grid_.is_main_exit_door(a.cell)) {
    exit_agent(i);
    return;
  }
  a.condition = Condition::moving;
  a.credit += a.credit_per_tick;
  jump_reserve_[i] = 0.0;

  while (a.on_grid()) {
    const auto pref = preferred_move(i);
    if (!pref) {
      record(i, EventKind::WAIT);
      a.condition = Condition::waiting;
      break;
    }
    if (a.credit + kCreditEps < pref->dir.cost()) break;
    if (heading_blocked(i)) {
      record(i, EventKind::CWO);
      if (!detour(i)) break;
      continue;
    }
    const int other = occ(pref->cell);
    if (other < 0) {
      move_to(i, pref->cell, pref->dir.cost());
      continue;
    }
    if (agents_[static_cast<std::size_t>(other)].condition == Condition::fallen) {
      if (!react_to_fallen(i, static_cast<std::size_t>(other))) break;
      continue;
    }
    collide(i, pref->cell);
    break;
  }
  if (a.on_grid()) a.credit = std::min(a.credit, std::max(kCreditCap, jump_reserve_[i]));
}

void Engine::step() {
  ++tick_;
  std::vector<std::size_t> order;
  order.reserve(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].on_grid()) order.push_back(i);
  }
  rng_.shuffle(std::span<std::size_t>(order));
  for (std::size_t i : order) take_turn(i);

  if (trace_) {
    for (const auto& a : agents_) {
      if (a.on_grid() || a.exit_tick == tick_) trace_(tick_, a);
    }
  }
}

RunOutcome Engine::run_to_completion() {
  while (!all_exited() && tick_ < max_ticks_) step();
  RunOutcome out;
  out.complete = all_exited();
  for (const auto& a : agents_) {
    if (a.on_grid()) out.stranded.push_back(a.id);
  }
  return out;
}

bool Engine::check_invariants() const {
  std::vector<int> seen(grid_.size(), -1);
  std::size_t on_grid = 0;
  std::size_t exited = 0;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto& a = agents_[i];
    if (a.credit < 0.0) return false;
    if (!a.on_grid()) {
      ++exited;
      continue;
    }
    ++on_grid;
    if (!grid_.in_bounds(a.cell) || !grid_.passable(a.cell)) return false;
    const std::size_t idx = grid_.index(a.cell);
    if (seen[idx] >= 0) return false;
    seen[idx] = static_cast<int>(i);
    if (occupancy_[idx] != static_cast<int>(i)) return false;
  }
  for (std::size_t idx = 0; idx < occupancy_.size(); ++idx) {
    if (occupancy_[idx] != seen[idx]) return false;
  }
  return on_grid + exited == agents_.size();
}

std::string event_log_to_csv(const EventLog& log, std::span<const AgentState> agents) {
  std::string out = "tick,agent,kind,col,row\n";
  char buf[64];
  for (const auto& e : log) {
    out += std::to_string(e.tick);
    out += ',';
    out += e.agent < agents.size() ? agents[e.agent].id : std::to_string(e.agent);
    out += ',';
    out += to_string(e.kind);
    std::snprintf(buf, sizeof buf, ",%d,%d\n", e.cell.col, e.cell.row);
    out += buf;
  }
  return out;
}

}  // namespace egress
