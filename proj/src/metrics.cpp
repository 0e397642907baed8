#include "egress/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace egress {

std::string_view behavior_label(EventKind kind) {
  switch (kind) {
    case EventKind::ASIDE: return "aside";
    case EventKind::WAIT:
    case EventKind::WAIT_FOR_FALLEN: return "wait";
    case EventKind::HELP: return "help";
    case EventKind::JUMP_OVER: return "jump over";
    default: return {};
  }
}

RunSummary summarize(const EventLog& log, std::span<const std::string> agent_ids, double tick_s) {
  RunSummary s;
  s.per_agent.resize(agent_ids.size());
  for (std::size_t i = 0; i < agent_ids.size(); ++i) s.per_agent[i].id = agent_ids[i];

  std::int64_t last_exit = 0;
  for (const auto& e : log) {
    if (e.agent >= s.per_agent.size()) throw std::invalid_argument("event names an agent outside the roster");
    AgentOutcome& o = s.per_agent[e.agent];
    switch (e.kind) {
      case EventKind::CWA: ++o.cwa_count; break;
      case EventKind::CWO: ++o.cwo_count; break;
      case EventKind::EXIT:
        o.evac_time_s = static_cast<double>(e.tick) * tick_s;
        last_exit = std::max(last_exit, e.tick);
        break;
      default: break;
    }
    const auto label = behavior_label(e.kind);
    if (!label.empty()) {
      o.behaviors.insert(std::string(label));
      s.obde.insert(std::string(label));
    }
  }

  std::size_t with_cwa = 0;
  std::size_t with_cwo = 0;
  for (const auto& o : s.per_agent) {
    if (o.cwa_count > 0) ++with_cwa;
    if (o.cwo_count > 0) ++with_cwo;
    if (!o.evac_time_s) s.stranded.push_back(o.id);
  }
  const double n = static_cast<double>(agent_ids.size());
  s.cwa_rate_pct = agent_ids.empty() ? 0.0 : 100.0 * static_cast<double>(with_cwa) / n;
  s.cwo_rate_pct = agent_ids.empty() ? 0.0 : 100.0 * static_cast<double>(with_cwo) / n;
  s.complete = s.stranded.empty();
  s.total_evac_s = static_cast<double>(last_exit) * tick_s;
  s.total_evac = format_time(s.total_evac_s);
  return s;
}

RunSummary summarize(const EventLog& log, std::size_t roster_size, double tick_s) {
  std::vector<std::string> ids;
  ids.reserve(roster_size);
  for (std::size_t i = 0; i < roster_size; ++i) ids.push_back("#" + std::to_string(i));
  return summarize(log, ids, tick_s);
}

std::string format_time(double seconds) {
  if (!std::isfinite(seconds) || seconds < 0.0) throw std::invalid_argument("time must be finite and nonnegative");
  // The epsilon absorbs binary representation error (60.941 * 1000 is
  // 60940.99999...); anything beyond it is truncated.
  const auto total_ms = static_cast<std::int64_t>(std::floor(seconds * 1000.0 + 1e-6));
  const std::int64_t minutes = total_ms / 60000;
  const std::int64_t secs = (total_ms / 1000) % 60;
  const std::int64_t ms = total_ms % 1000;
  return std::to_string(minutes) + ":" + std::to_string(secs) + ":" + std::to_string(ms);
}

double parse_time(std::string_view text) {
  long long parts[3] = {0, 0, 0};
  std::size_t field = 0;
  bool digit = false;
  for (char c : text) {
    if (c == ':') {
      if (!digit || ++field > 2) throw std::invalid_argument("malformed time '" + std::string(text) + "'");
      digit = false;
    } else if (c >= '0' && c <= '9') {
      parts[field] = parts[field] * 10 + (c - '0');
      digit = true;
    } else {
      throw std::invalid_argument("malformed time '" + std::string(text) + "'");
    }
  }
  if (field != 2 || !digit || parts[1] > 59 || parts[2] > 999)
    throw std::invalid_argument("malformed time '" + std::string(text) + "'");
  return static_cast<double>(parts[0] * 60000 + parts[1] * 1000 + parts[2]) / 1000.0;
}

namespace {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

}  // namespace

ScenarioStats aggregate(std::span<const RunSummary> summaries, std::string scenario) {
  if (summaries.empty()) throw std::invalid_argument("aggregate needs at least one summary");
  ScenarioStats st;
  st.scenario = std::move(scenario);
  st.runs = summaries.size();
  std::vector<double> cwa, cwo, evac;
  for (const auto& s : summaries) {
    cwa.push_back(s.cwa_rate_pct);
    cwo.push_back(s.cwo_rate_pct);
    st.obde.insert(s.obde.begin(), s.obde.end());
    if (s.complete) evac.push_back(s.total_evac_s);
    else ++st.incomplete;
  }
  const auto a = mean_sd(cwa);
  const auto o = mean_sd(cwo);
  st.cwa_mean = a.mean;
  st.cwa_sd = a.sd;
  st.cwo_mean = o.mean;
  st.cwo_sd = o.sd;
  if (!evac.empty()) {
    const auto e = mean_sd(evac);
    st.evac_mean_s = e.mean;
    st.evac_sd_s = e.sd;
  }
  return st;
}

nlohmann::ordered_json summary_to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["cwa_rate_pct"] = s.cwa_rate_pct;
  j["cwo_rate_pct"] = s.cwo_rate_pct;
  j["obde"] = s.obde;
  j["total_evac"] = s.total_evac;
  j["total_evac_s"] = s.total_evac_s;
  j["complete"] = s.complete;
  j["stranded"] = s.stranded;
  auto agents = nlohmann::ordered_json::array();
  for (const auto& a : s.per_agent) {
    nlohmann::ordered_json o;
    o["id"] = a.id;
    o["evac_time_s"] = a.evac_time_s ? nlohmann::ordered_json(*a.evac_time_s) : nlohmann::ordered_json(nullptr);
    o["cwa"] = a.cwa_count;
    o["cwo"] = a.cwo_count;
    o["behaviors"] = a.behaviors;
    agents.push_back(std::move(o));
  }
  j["per_agent"] = std::move(agents);
  return j;
}

nlohmann::ordered_json stats_to_json(const ScenarioStats& s) {
  nlohmann::ordered_json j;
  j["scenario"] = s.scenario;
  j["runs"] = s.runs;
  j["cwa_mean_pct"] = s.cwa_mean;
  j["cwa_sd_pct"] = s.cwa_sd;
  j["cwo_mean_pct"] = s.cwo_mean;
  j["cwo_sd_pct"] = s.cwo_sd;
  j["obde"] = s.obde;
  j["evac_mean_s"] = s.evac_mean_s ? nlohmann::ordered_json(*s.evac_mean_s) : nlohmann::ordered_json(nullptr);
  j["evac_sd_s"] = s.evac_sd_s;
  j["incomplete"] = s.incomplete;
  return j;
}

std::string stats_csv_header() {
  return "scenario,runs,cwa_mean_pct,cwa_sd_pct,cwo_mean_pct,cwo_sd_pct,obde,evac_mean_s,evac_sd_s,evac_mean,"
         "incomplete\n";
}

std::string stats_csv_row(const ScenarioStats& s) {
  std::string obde;
  for (const auto& b : s.obde) {
    if (!obde.empty()) obde += ';';
    obde += b;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%zu,%.3f,%.3f,%.3f,%.3f,%s,", s.scenario.c_str(), s.runs, s.cwa_mean, s.cwa_sd,
                s.cwo_mean, s.cwo_sd, obde.c_str());
  std::string row = buf;
  if (s.evac_mean_s) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%s,", *s.evac_mean_s, s.evac_sd_s, format_time(*s.evac_mean_s).c_str());
    row += buf;
  } else {
    row += ",,,";
  }
  row += std::to_string(s.incomplete) + "\n";
  return row;
}

}  // namespace egress
