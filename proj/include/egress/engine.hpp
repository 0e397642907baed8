#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egress/floor_field.hpp"
#include "egress/model.hpp"
#include "egress/rng.hpp"
#include "egress/scenario.hpp"

namespace egress {

enum class Condition { moving, waiting, aside, fallen, helping, exited };

enum class EventKind : std::uint8_t { CWA, CWO, WAIT, ASIDE, JUMP_OVER, HELP, WAIT_FOR_FALLEN, FALL, EXIT };
inline constexpr std::size_t kEventKindCount = 9;

std::string_view to_string(Condition c);
std::string_view to_string(EventKind k);

struct EventRecord {
  std::int64_t tick = 0;
  std::size_t agent = 0;  // index into the roster
  EventKind kind = EventKind::WAIT;
  CellPos cell;

  bool operator==(const EventRecord&) const = default;
};

using EventLog = std::vector<EventRecord>;

struct AgentState {
  std::string id;
  CellPos cell;
  double speed_kmh = 0.0;
  double credit_per_tick = 0.0;  // cell-steps gained per tick
  double credit = 0.0;           // unspent cell-steps
  int target = -1;               // index into the engine's main-exit fields
  Condition condition = Condition::moving;
  int fall_ticks = 0;     // remaining ticks on the floor while fallen
  int blocked_ticks = 0;  // consecutive ticks spent waiting behind a standing agent
  std::vector<std::size_t> helpers;  // agents that already helped during this fall
  PropensitySet propensities;
  std::array<std::uint32_t, kEventKindCount> counters{};
  std::optional<std::int64_t> exit_tick;

  std::uint32_t count(EventKind k) const { return counters[static_cast<std::size_t>(k)]; }
  bool on_grid() const { return condition != Condition::exited; }
};

class EngineSetupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Called once per on-grid agent after every tick, and once more on the tick
/// an agent exits.
using TraceSink = std::function<void(std::int64_t tick, const AgentState& agent)>;

struct RunOutcome {
  bool complete = false;
  std::vector<std::string> stranded;  // ids still on the grid at the time cap
};

/// Cellular-automaton evacuation. Agents are updated sequentially in a fresh
/// seeded permutation each tick, so two agents never contend for a cell.
class Engine {
 public:
  /// Places agents (manual cells or distinct random cells inside the spawn
  /// rectangle) and assigns targets: nearest main exit for familiar agents,
  /// a uniformly drawn reachable main exit otherwise. `fields` must hold one
  /// routing field per main exit; `speeds_kmh` one speed per roster entry.
  Engine(const Scenario& scenario, Grid grid, std::vector<FieldMap> fields, std::span<const double> speeds_kmh,
         std::uint64_t seed);

  /// Advances one tick.
  void step();
  RunOutcome run_to_completion();

  /// The agent's preferred cell is held by a standing agent: logs CWA, then
  /// sidesteps (aside propensity) or waits, then may fall. An agent that has
  /// waited for patience_s routes around the blocker like an obstacle.
  void resolve_agent_collision(std::size_t agent, CellPos blocked);
  /// The straight heading is an obstacle: logs CWO and takes the best free
  /// improving neighbour, or waits.
  void resolve_obstacle_block(std::size_t agent);
  /// Every adjacent agent whose preferred move enters the fallen agent's cell
  /// reacts by propensity: help, jump over, wait for the fallen, or detour.
  void fall_and_assist(std::size_t fallen);
  /// Puts an agent on the floor for `ticks` ticks and logs FALL.
  void knock_down(std::size_t agent, int ticks);

  std::int64_t tick() const { return tick_; }
  std::int64_t max_ticks() const { return max_ticks_; }
  const Grid& grid() const { return grid_; }
  const std::vector<FieldMap>& fields() const { return fields_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  AgentState& agent(std::size_t i) { return agents_.at(i); }
  const EventLog& log() const { return log_; }
  const SimParams& params() const { return params_; }
  std::size_t exited_count() const;
  bool all_exited() const { return exited_count() == agents_.size(); }
  /// Occupant of a cell, if any.
  std::optional<std::size_t> occupant(CellPos p) const;
  /// Target field value at the agent's current cell.
  double field_distance(std::size_t agent) const;
  /// Best strictly improving legal neighbour on the target field, ignoring
  /// other agents.
  std::optional<CellPos> preferred_cell(std::size_t agent) const;

  /// Occupancy exclusivity, agent conservation and nonnegative credit.
  bool check_invariants() const;

  void set_trace(TraceSink sink) { trace_ = std::move(sink); }

 private:
  struct Move {
    CellPos cell;
    Direction dir;
    double value = 0.0;
  };

  std::optional<Move> preferred_move(std::size_t i) const;
  std::optional<Move> best_free_neighbour(std::size_t i, bool allow_equal, std::optional<CellPos> exclude) const;
  bool heading_blocked(std::size_t i) const;
  void take_turn(std::size_t i);
  bool collide(std::size_t i, CellPos blocked);
  bool swap_head_on(std::size_t i, CellPos blocked);
  bool detour(std::size_t i);
  bool react_to_fallen(std::size_t i, std::size_t fallen);
  void move_to(std::size_t i, CellPos to, double cost);
  void exit_agent(std::size_t i);
  void record(std::size_t i, EventKind kind);
  const FieldMap* target_field(std::size_t i) const;
  const FieldMap* heading_field(std::size_t i) const;
  int& occ(CellPos p) { return occupancy_[grid_.index(p)]; }
  int occ(CellPos p) const { return occupancy_[grid_.index(p)]; }

  SimParams params_;
  Grid grid_;
  std::vector<FieldMap> fields_;
  std::vector<FieldMap> heading_fields_;
  std::vector<AgentState> agents_;
  std::vector<int> occupancy_;
  std::vector<double> jump_reserve_;
  Rng rng_;
  EventLog log_;
  std::int64_t tick_ = 0;
  std::int64_t max_ticks_ = 0;
  int patience_ticks_ = 0;
  TraceSink trace_;
};

/// Convenience wrapper over the Engine constructor.
Engine init_engine(const Scenario& scenario, const Grid& grid, std::vector<FieldMap> fields,
                   std::span<const double> speeds_kmh, std::uint64_t seed);

/// One line per event: tick,agent_id,kind,col,row.
std::string event_log_to_csv(const EventLog& log, std::span<const AgentState> agents);

}  // namespace egress
