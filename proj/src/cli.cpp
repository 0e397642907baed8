#include "egress/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "egress/experiment.hpp"
#include "egress/floor_field.hpp"
#include "egress/fuzzy_speed.hpp"
#include "egress/metrics.hpp"
#include "egress/presets.hpp"
#include "egress/scenario_io.hpp"

#ifndef EGRESS_DEFAULT_PRESET_DIR
#define EGRESS_DEFAULT_PRESET_DIR "scenarios"
#endif

namespace egress {

namespace fs = std::filesystem;

namespace {

struct CliFailure : std::runtime_error {
  CliFailure(int code, const std::string& message) : std::runtime_error(message), code(code) {}
  int code;
};

/// Writes through a sibling temporary file so readers never see partial output.
void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CliFailure(exit_code::unwritable, "cannot write " + path.string());
    f << content;
    if (!f.flush()) throw CliFailure(exit_code::unwritable, "cannot write " + path.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CliFailure(exit_code::unwritable, "cannot write " + path.string());
  }
}

Json read_document(const fs::path& path) {
  try {
    return load_json(path);
  } catch (const ParseError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw CliFailure(exit_code::unreadable, e.what());
  }
}

Json scenario_document(const std::string& ref) {
  const fs::path path(ref);
  if (fs::is_regular_file(path)) {
    Json doc = read_document(path);
    if (doc.is_object() && !doc.contains("name")) doc["name"] = path.stem().string();
    return doc;
  }
  const fs::path bundled = preset_dir() / (ref + ".json");
  if (ref.find('/') == std::string::npos && fs::is_regular_file(bundled)) {
    Json doc = read_document(bundled);
    if (doc.is_object() && !doc.contains("name")) doc["name"] = ref;
    return doc;
  }
  throw CliFailure(exit_code::unreadable, "cannot read scenario '" + ref + "'");
}

Scenario load_with_overrides(const std::string& ref, const std::vector<std::string>& overrides) {
  Json doc = scenario_document(ref);
  apply_overrides(doc, overrides);
  return scenario_from_json(doc);
}

void require_valid(const Scenario& s) {
  const ValidationReport report = validate_scenario(s);
  if (!report.ok()) throw ValidationError(report);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::uint64_t> pick_seeds(const std::vector<std::uint64_t>& explicit_seeds, std::size_t count,
                                      std::uint64_t base, std::uint64_t fallback) {
  if (!explicit_seeds.empty()) return explicit_seeds;
  if (count > 0) return seed_range(base, count);
  return {fallback};
}

std::string per_agent_csv(const RunSummary& s) {
  std::string out = "id,evac_time_s,cwa,cwo,behaviors\n";
  for (const auto& a : s.per_agent) {
    std::string behaviors;
    for (const auto& b : a.behaviors) behaviors += (behaviors.empty() ? "" : ";") + b;
    out += a.id + "," + (a.evac_time_s ? num(*a.evac_time_s) : std::string()) + "," + std::to_string(a.cwa_count) +
           "," + std::to_string(a.cwo_count) + "," + behaviors + "\n";
  }
  return out;
}

struct RunOptions {
  std::string scenario;
  std::vector<std::uint64_t> seeds;
  std::size_t seed_count = 0;
  std::uint64_t base_seed = 1;
  std::string out_dir = ".";
  bool trace = false;
  std::vector<std::string> overrides;
  std::string format = "json";
};

int cmd_run(const RunOptions& o, std::ostream& out) {
  const Scenario scenario = load_with_overrides(o.scenario, o.overrides);
  require_valid(scenario);
  const fs::path dir(o.out_dir);
  for (std::uint64_t seed : pick_seeds(o.seeds, o.seed_count, o.base_seed, scenario.params.seed)) {
    std::string trace_csv;
    TraceSink sink;
    if (o.trace) {
      trace_csv = "tick,agent,col,row,condition\n";
      sink = [&trace_csv](std::int64_t tick, const AgentState& a) {
        trace_csv += std::to_string(tick) + "," + a.id + "," + std::to_string(a.cell.col) + "," +
                     std::to_string(a.cell.row) + "," + std::string(to_string(a.condition)) + "\n";
      };
    }
    const RunResult r = run_once(scenario, seed, sink);
    const std::string stem = scenario.name + ".seed" + std::to_string(seed);
    if (o.format == "csv") {
      write_file(dir / (stem + ".summary.csv"), per_agent_csv(r.summary));
    } else {
      Json j;
      j["scenario"] = scenario.name;
      j["params"] = params_to_json(scenario.params);
      const Json summary = summary_to_json(r.summary);
      for (const auto& [k, v] : summary.items()) j[k] = v;
      write_file(dir / (stem + ".summary.json"), j.dump(2) + "\n");
    }
    if (o.trace) {
      write_file(dir / (stem + ".trace.csv"), trace_csv);
      write_file(dir / (stem + ".events.csv"), event_log_to_csv(r.log, r.agents));
    }
    out << scenario.name << " seed " << seed << ": evac " << r.summary.total_evac << " (" << num(r.summary.total_evac_s)
        << " s), CWA " << num(r.summary.cwa_rate_pct) << "%, CWO " << num(r.summary.cwo_rate_pct) << "%"
        << (r.summary.complete ? "" : ", INCOMPLETE") << "\n";
  }
  return exit_code::ok;
}

struct BatchOptions {
  std::vector<std::uint64_t> seeds;
  std::size_t seed_count = 30;
  std::uint64_t base_seed = 1;
  std::string out_dir = ".";
  std::string format = "csv";
};

int cmd_batch(const BatchOptions& o, std::ostream& out) {
  std::vector<Scenario> scenarios;
  const fs::path dir = preset_dir();
  for (const auto& name : preset_names()) {
    const fs::path file = dir / (name + ".json");
    Json doc = read_document(file);
    doc["name"] = name;
    Scenario s = scenario_from_json(doc);
    scenarios.push_back(std::move(s));
  }
  const auto seeds = pick_seeds(o.seeds, o.seed_count, o.base_seed, 1);
  const auto rows = run_batch(scenarios, seeds);
  const std::string report = trend_report(trend_checks(rows));
  const fs::path out_dir(o.out_dir);
  if (o.format == "json") {
    Json j = Json::array();
    for (const auto& r : rows) j.push_back(stats_to_json(r.stats));
    write_file(out_dir / "batch.json", j.dump(2) + "\n");
  } else {
    const std::string csv = batch_csv(rows);
    write_file(out_dir / "batch.csv", csv);
    out << csv;
  }
  write_file(out_dir / "trends.txt", report);
  out << report;
  return exit_code::ok;
}

int cmd_speeds(const std::string& ref, const std::vector<std::string>& overrides, const std::string& out_file,
               std::ostream& out) {
  const Scenario s = load_with_overrides(ref, overrides);
  require_valid(s);
  std::string csv = "id,gender,age,weight_kg,speed_kmh\n";
  for (const auto& p : s.roster) {
    csv += p.id + "," + std::string(to_string(p.gender)) + "," + num(p.age) + "," + num(p.weight_kg) + "," +
           num(desired_speed(p, s.params, s.fuzzy)) + "\n";
  }
  if (out_file.empty()) out << csv;
  else write_file(out_file, csv);
  return exit_code::ok;
}

int cmd_validate(const std::string& ref, const std::vector<std::string>& overrides, std::ostream& out) {
  const Scenario s = load_with_overrides(ref, overrides);
  require_valid(s);
  out << s.name << ": ok\n";
  return exit_code::ok;
}

int cmd_field_dump(const std::string& ref, const std::string& exit_id, bool heading, const std::string& out_file,
                   std::ostream& out) {
  const Scenario s = load_with_overrides(ref, {});
  require_valid(s);
  const Grid grid = rasterize(s.floor);
  if (!grid.exit_index(exit_id)) throw CliFailure(exit_code::usage, "unknown exit '" + exit_id + "'");
  const FieldMap field =
      compute_field(grid, exit_id, heading ? FieldMode::passable_obstacles : FieldMode::blocked_obstacles);
  const std::string csv = field_to_csv(field);
  if (out_file.empty()) out << csv;
  else write_file(out_file, csv);
  return exit_code::ok;
}

int cmd_export_presets(const std::string& dir) {
  for (const auto& s : experiment_presets()) write_file(fs::path(dir) / (s.name + ".json"), serialize_scenario(s) + "\n");
  return exit_code::ok;
}

}  // namespace

fs::path preset_dir() {
  if (const char* env = std::getenv("EGRESS_PRESET_DIR"); env && *env) return fs::path(env);
  return fs::path(EGRESS_DEFAULT_PRESET_DIR);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seeded cellular-automaton evacuation simulator with fuzzy desired speeds.", "egress"};
  app.require_subcommand(1);
  app.footer("Environment: EGRESS_PRESET_DIR overrides the bundled preset directory (" +
             std::string(EGRESS_DEFAULT_PRESET_DIR) +
             ").\nExit codes: 0 ok, 2 usage, 3 unreadable or unparseable input, 4 validation failure, 5 unwritable "
             "output.");

  const std::vector<std::string> formats{"json", "csv"};

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario for one or more seeds.");
  run_cmd->add_option("scenario", run.scenario, "Scenario file, or a bundled preset name such as no1a")->required();
  run_cmd->add_option("--seed", run.seeds, "Run seed (repeatable); defaults to params.seed");
  run_cmd->add_option("--seeds", run.seed_count, "Run this many consecutive seeds starting at --base-seed");
  run_cmd->add_option("--base-seed", run.base_seed, "First seed for --seeds")->capture_default_str();
  run_cmd->add_option("--out", run.out_dir, "Output directory")->capture_default_str();
  run_cmd->add_flag("--trace", run.trace, "Also write per-tick agent positions and the event log");
  run_cmd->add_option("--override", run.overrides, "Set a scenario field, e.g. params.fall_prob=0.1 (repeatable)");
  run_cmd->add_option("--format", run.format, "Summary format")->check(CLI::IsMember(formats))->capture_default_str();

  BatchOptions batch;
  auto* batch_cmd = app.add_subcommand("batch", "Run the twelve bundled presets and report seed-averaged statistics.");
  batch_cmd->add_option("--seeds", batch.seed_count, "Seeds per preset")->capture_default_str();
  batch_cmd->add_option("--base-seed", batch.base_seed, "First seed")->capture_default_str();
  batch_cmd->add_option("--seed", batch.seeds, "Explicit seed (repeatable); overrides --seeds");
  batch_cmd->add_option("--out", batch.out_dir, "Output directory for batch.csv and trends.txt")->capture_default_str();
  batch_cmd->add_option("--format", batch.format, "Statistics format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();

  std::string speeds_ref, speeds_out;
  std::vector<std::string> speeds_overrides;
  auto* speeds_cmd = app.add_subcommand("speeds", "Write each agent's desired speed as CSV without simulating.");
  speeds_cmd->add_option("scenario", speeds_ref, "Scenario file or preset name")->required();
  speeds_cmd->add_option("--out", speeds_out, "Output file (default: stdout)");
  speeds_cmd->add_option("--override", speeds_overrides, "Set a scenario field (repeatable)");

  std::string validate_ref;
  std::vector<std::string> validate_overrides;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario and list every violation.");
  validate_cmd->add_option("scenario", validate_ref, "Scenario file or preset name")->required();
  validate_cmd->add_option("--override", validate_overrides, "Set a scenario field (repeatable)");

  std::string dump_ref, dump_exit, dump_out;
  bool dump_heading = false;
  auto* dump_cmd = app.add_subcommand("field-dump", "Write one exit's distance field as a CSV matrix.");
  dump_cmd->add_option("scenario", dump_ref, "Scenario file or preset name")->required();
  dump_cmd->add_option("--exit", dump_exit, "Exit id")->required();
  dump_cmd->add_flag("--heading", dump_heading, "Treat obstacles as passable");
  dump_cmd->add_option("--out", dump_out, "Output file (default: stdout)");

  std::string export_dir = "scenarios";
  auto* export_cmd = app.add_subcommand("export-presets", "");
  export_cmd->group("");
  export_cmd->add_option("--out", export_dir);

  std::vector<const char*> argv{"egress"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_code::ok : exit_code::usage;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*batch_cmd) return cmd_batch(batch, out);
    if (*speeds_cmd) return cmd_speeds(speeds_ref, speeds_overrides, speeds_out, out);
    if (*validate_cmd) return cmd_validate(validate_ref, validate_overrides, out);
    if (*dump_cmd) return cmd_field_dump(dump_ref, dump_exit, dump_heading, dump_out, out);
    if (*export_cmd) return cmd_export_presets(export_dir);
  } catch (const CliFailure& e) {
    err << "error: " << e.what() << "\n";
    return e.code;
  } catch (const ValidationError& e) {
    err << "error: scenario is invalid\n" << e.report().to_string();
    return exit_code::invalid;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::unreadable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::internal;
  }
  return exit_code::usage;
}

}  // namespace egress
