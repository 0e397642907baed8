#include "egress/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace egress {

namespace {

// Reads fields from one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const Json& field(const std::string& key) {
    seen_.insert(key);
    if (!obj_.contains(key)) fail(path_, "missing key '" + key + "'");
    return obj_.at(key);
  }
  const Json* optional(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }
  std::string child(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key) { return as_number(field(key), child(key)); }
  double number_or(const std::string& key, double fallback) {
    const Json* v = optional(key);
    return v ? as_number(*v, child(key)) : fallback;
  }
  std::string text(const std::string& key) {
    const Json& v = field(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    return v.get<std::string>();
  }
  bool boolean_or(const std::string& key, bool fallback) {
    const Json* v = optional(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(child(key), "expected a boolean");
    return v->get<bool>();
  }
  const Json& array(const std::string& key) {
    const Json& v = field(key);
    if (!v.is_array()) fail(child(key), "expected an array");
    return v;
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) fail(path_, "unknown key '" + item.key() + "'");
    }
  }

  static double as_number(const Json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }

 private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

Point read_point(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) ObjectReader::fail(where, "expected [x, y]");
  return {ObjectReader::as_number(v[0], where), ObjectReader::as_number(v[1], where)};
}

std::pair<double, double> read_pair(const Json& v, const std::string& where) {
  const Point p = read_point(v, where);
  return {p.x, p.y};
}

Json point_json(Point p) { return Json::array({p.x, p.y}); }

Rect read_rect(const Json& v, const std::string& where) {
  ObjectReader r(v, where);
  Rect out{read_point(r.field("origin"), r.child("origin")), r.number("width_m"), r.number("length_m")};
  r.finish();
  return out;
}

Json rect_json(const Rect& r) {
  Json j;
  j["origin"] = point_json(r.origin);
  j["width_m"] = r.width_m;
  j["length_m"] = r.length_m;
  return j;
}

Aperture read_aperture(const Json& v, const std::string& where, ApertureKind kind) {
  ObjectReader r(v, where);
  Aperture a;
  a.id = r.text("id");
  a.center = read_point(r.field("center"), r.child("center"));
  a.width_m = r.number("width_m");
  a.kind = kind;
  r.finish();
  return a;
}

Json aperture_json(const Aperture& a) {
  Json j;
  j["id"] = a.id;
  j["center"] = point_json(a.center);
  j["width_m"] = a.width_m;
  return j;
}

FloorPlan read_floor(const Json& v) {
  ObjectReader r(v, "floor");
  FloorPlan plan;
  plan.width_m = r.number("width_m");
  plan.length_m = r.number("length_m");
  if (const Json* regions = r.optional("regions")) {
    if (!regions->is_array()) ObjectReader::fail("floor.regions", "expected an array");
    for (std::size_t i = 0; i < regions->size(); ++i) {
      const std::string where = "floor.regions[" + std::to_string(i) + "]";
      ObjectReader rr((*regions)[i], where);
      Region region;
      region.name = rr.text("name");
      region.origin = read_point(rr.field("origin"), rr.child("origin"));
      region.width_m = rr.number("width_m");
      region.length_m = rr.number("length_m");
      const Json& exits = rr.array("exits");
      for (std::size_t k = 0; k < exits.size(); ++k)
        region.exits.push_back(read_aperture(exits[k], where + ".exits[" + std::to_string(k) + "]", ApertureKind::room_exit));
      rr.finish();
      plan.regions.push_back(std::move(region));
    }
  }
  const Json& mains = r.array("main_exits");
  for (std::size_t k = 0; k < mains.size(); ++k)
    plan.main_exits.push_back(read_aperture(mains[k], "floor.main_exits[" + std::to_string(k) + "]", ApertureKind::main_exit));
  if (const Json* obstacles = r.optional("obstacles")) {
    if (!obstacles->is_array()) ObjectReader::fail("floor.obstacles", "expected an array");
    for (std::size_t k = 0; k < obstacles->size(); ++k)
      plan.obstacles.push_back(read_rect((*obstacles)[k], "floor.obstacles[" + std::to_string(k) + "]"));
  }
  r.finish();
  return plan;
}

Json floor_json(const FloorPlan& plan) {
  Json j;
  j["width_m"] = plan.width_m;
  j["length_m"] = plan.length_m;
  j["regions"] = Json::array();
  for (const auto& region : plan.regions) {
    Json rj;
    rj["name"] = region.name;
    rj["origin"] = point_json(region.origin);
    rj["width_m"] = region.width_m;
    rj["length_m"] = region.length_m;
    rj["exits"] = Json::array();
    for (const auto& a : region.exits) rj["exits"].push_back(aperture_json(a));
    j["regions"].push_back(std::move(rj));
  }
  j["main_exits"] = Json::array();
  for (const auto& a : plan.main_exits) j["main_exits"].push_back(aperture_json(a));
  j["obstacles"] = Json::array();
  for (const auto& o : plan.obstacles) j["obstacles"].push_back(rect_json(o));
  return j;
}

Gender read_gender(const std::string& s, const std::string& where) {
  if (s == "male") return Gender::male;
  if (s == "female") return Gender::female;
  ObjectReader::fail(where, "gender must be \"male\" or \"female\"");
}

AgentProfile read_profile(const Json& v, const std::string& where) {
  ObjectReader r(v, where);
  AgentProfile p;
  p.id = r.text("id");
  p.gender = read_gender(r.text("gender"), r.child("gender"));
  p.age = r.number("age");
  p.weight_kg = r.number("weight_kg");
  p.disease = r.number("disease");
  p.shock = r.number("shock");
  p.collaboration = r.number("collaboration");
  p.familiar = r.boolean_or("familiar", false);
  if (const Json* props = r.optional("propensities")) {
    ObjectReader pr(*props, r.child("propensities"));
    p.propensities.wait = pr.boolean_or("wait", false);
    p.propensities.aside = pr.boolean_or("aside", false);
    p.propensities.jump_over = pr.boolean_or("jump_over", false);
    p.propensities.help = pr.boolean_or("help", false);
    p.propensities.wait_for_fallen = pr.boolean_or("wait_for_fallen", false);
    pr.finish();
  }
  r.finish();
  return p;
}

LevelWeights read_levels(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != kLevelCount) ObjectReader::fail(where, "expected five level weights");
  LevelWeights out{};
  for (std::size_t i = 0; i < kLevelCount; ++i) out[i] = ObjectReader::as_number(v[i], where);
  return out;
}

Json levels_json(const LevelWeights& w) {
  Json j = Json::array();
  for (double x : w) j.push_back(x);
  return j;
}

GenderCohort read_cohort(const Json& v, const std::string& where) {
  ObjectReader r(v, where);
  GenderCohort c;
  const double count = r.number("count");
  if (count < 0 || count != static_cast<double>(static_cast<std::size_t>(count)))
    ObjectReader::fail(r.child("count"), "expected a nonnegative integer");
  c.count = static_cast<std::size_t>(count);
  const auto [age_lo, age_hi] = read_pair(r.field("age"), r.child("age"));
  const auto [w_lo, w_hi] = read_pair(r.field("weight_kg"), r.child("weight_kg"));
  c.age_min = static_cast<int>(age_lo);
  c.age_max = static_cast<int>(age_hi);
  c.weight_min = static_cast<int>(w_lo);
  c.weight_max = static_cast<int>(w_hi);
  c.disease = read_levels(r.field("disease"), r.child("disease"));
  c.shock = read_levels(r.field("shock"), r.child("shock"));
  c.collaboration = read_levels(r.field("collaboration"), r.child("collaboration"));
  if (const Json* props = r.optional("propensities")) {
    ObjectReader pr(*props, r.child("propensities"));
    c.propensities.wait = pr.number_or("wait", 0.0);
    c.propensities.aside = pr.number_or("aside", 0.0);
    c.propensities.jump_over = pr.number_or("jump_over", 0.0);
    c.propensities.help = pr.number_or("help", 0.0);
    c.propensities.wait_for_fallen = pr.number_or("wait_for_fallen", 0.0);
    pr.finish();
  }
  r.finish();
  return c;
}

Json cohort_json(const GenderCohort& c) {
  Json j;
  j["count"] = c.count;
  j["age"] = Json::array({c.age_min, c.age_max});
  j["weight_kg"] = Json::array({c.weight_min, c.weight_max});
  j["disease"] = levels_json(c.disease);
  j["shock"] = levels_json(c.shock);
  j["collaboration"] = levels_json(c.collaboration);
  j["propensities"] = {{"wait", c.propensities.wait},
                       {"aside", c.propensities.aside},
                       {"jump_over", c.propensities.jump_over},
                       {"help", c.propensities.help},
                       {"wait_for_fallen", c.propensities.wait_for_fallen}};
  return j;
}

RosterSpec read_roster_spec(const Json& v) {
  ObjectReader r(v, "roster_spec");
  RosterSpec spec;
  spec.male = read_cohort(r.field("male"), r.child("male"));
  spec.female = read_cohort(r.field("female"), r.child("female"));
  spec.familiar_prob = r.number_or("familiar_prob", 0.0);
  if (const Json* seed = r.optional("seed")) {
    if (!seed->is_number_unsigned()) ObjectReader::fail(r.child("seed"), "expected an unsigned integer");
    spec.seed = seed->get<std::uint64_t>();
  }
  r.finish();
  return spec;
}

Json roster_spec_json(const RosterSpec& spec) {
  Json j;
  j["male"] = cohort_json(spec.male);
  j["female"] = cohort_json(spec.female);
  j["familiar_prob"] = spec.familiar_prob;
  j["seed"] = spec.seed;
  return j;
}

SimParams read_params(const Json& v) {
  ObjectReader r(v, "params");
  SimParams p;
  p.tick_s = r.number_or("tick_s", p.tick_s);
  p.emergency_coeff = r.number_or("emergency_coeff", p.emergency_coeff);
  p.female_factor = r.number_or("female_factor", p.female_factor);
  p.fall_prob = r.number_or("fall_prob", p.fall_prob);
  p.fall_duration_s = r.number_or("fall_duration_s", p.fall_duration_s);
  p.patience_s = r.number_or("patience_s", p.patience_s);
  p.max_sim_s = r.number_or("max_sim_s", p.max_sim_s);
  if (const Json* seed = r.optional("seed")) {
    if (!seed->is_number_unsigned()) ObjectReader::fail(r.child("seed"), "expected an unsigned integer");
    p.seed = seed->get<std::uint64_t>();
  }
  if (const Json* placement = r.optional("placement")) {
    if (!placement->is_string()) ObjectReader::fail(r.child("placement"), "expected a string");
    const auto s = placement->get<std::string>();
    if (s == "random-in-rect") p.placement = Placement::random_in_rect;
    else if (s == "manual") p.placement = Placement::manual;
    else ObjectReader::fail(r.child("placement"), "expected \"random-in-rect\" or \"manual\"");
  }
  if (const Json* rect = r.optional("spawn_rect")) p.spawn_rect = read_rect(*rect, r.child("spawn_rect"));
  if (const Json* cells = r.optional("manual_cells")) {
    if (!cells->is_array()) ObjectReader::fail(r.child("manual_cells"), "expected an array");
    for (const auto& c : *cells) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
        ObjectReader::fail(r.child("manual_cells"), "expected [col, row] integer pairs");
      p.manual_cells.push_back({c[0].get<int>(), c[1].get<int>()});
    }
  }
  r.finish();
  return p;
}

PropertyModel read_property_model(const Json& v, Property prop, const std::string& where) {
  ObjectReader r(v, where);
  std::vector<double> centers;
  for (const auto& c : r.array("centers")) centers.push_back(ObjectReader::as_number(c, r.child("centers")));
  std::vector<std::string> labels;
  for (const auto& l : r.array("labels")) {
    if (!l.is_string()) ObjectReader::fail(r.child("labels"), "expected strings");
    labels.push_back(l.get<std::string>());
  }
  const auto [lo, hi] = read_pair(r.field("domain"), r.child("domain"));
  std::vector<BracketMap::Slot> slots;
  const Json& brackets = r.array("brackets");
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    ObjectReader br(brackets[i], r.child("brackets[" + std::to_string(i) + "]"));
    BracketMap::Slot slot;
    slot.interval.lower = br.number("from");
    slot.interval.upper = br.number("to");
    slot.bracket.min_kmh = br.number("min_kmh");
    slot.bracket.max_kmh = br.number("max_kmh");
    br.finish();
    slots.push_back(slot);
  }
  r.finish();
  try {
    return PropertyModel{FuzzyPartition(prop, std::move(centers), std::move(labels), Interval{lo, hi, true}),
                         BracketMap(prop, std::move(slots))};
  } catch (const std::invalid_argument& e) {
    ObjectReader::fail(where, e.what());
  }
}

Json property_model_json(const PropertyModel& m) {
  Json j;
  j["centers"] = m.partition.centers();
  j["labels"] = m.partition.labels();
  j["domain"] = Json::array({m.partition.domain().lower, m.partition.domain().upper});
  j["brackets"] = Json::array();
  for (const auto& s : m.brackets.slots()) {
    j["brackets"].push_back({{"from", s.interval.lower},
                             {"to", s.interval.upper},
                             {"min_kmh", s.bracket.min_kmh},
                             {"max_kmh", s.bracket.max_kmh}});
  }
  return j;
}

FuzzyConfig read_fuzzy(const Json& v) {
  ObjectReader r(v, "fuzzy");
  FuzzyConfig config = FuzzyConfig::defaults();
  for (Property prop : kAllProperties) {
    const std::string key(to_string(prop));
    if (const Json* m = r.optional(key)) config.of(prop) = read_property_model(*m, prop, r.child(key));
  }
  r.finish();
  return config;
}

}  // namespace

Json params_to_json(const SimParams& p) {
  Json j;
  j["tick_s"] = p.tick_s;
  j["emergency_coeff"] = p.emergency_coeff;
  j["female_factor"] = p.female_factor;
  j["fall_prob"] = p.fall_prob;
  j["fall_duration_s"] = p.fall_duration_s;
  j["patience_s"] = p.patience_s;
  j["max_sim_s"] = p.max_sim_s;
  j["seed"] = p.seed;
  j["placement"] = std::string(to_string(p.placement));
  j["spawn_rect"] = rect_json(p.spawn_rect);
  j["manual_cells"] = Json::array();
  for (const auto& c : p.manual_cells) j["manual_cells"].push_back(Json::array({c.col, c.row}));
  return j;
}

Json profile_to_json(const AgentProfile& p) {
  Json j;
  j["id"] = p.id;
  j["gender"] = std::string(to_string(p.gender));
  j["age"] = p.age;
  j["weight_kg"] = p.weight_kg;
  j["disease"] = p.disease;
  j["shock"] = p.shock;
  j["collaboration"] = p.collaboration;
  j["familiar"] = p.familiar;
  j["propensities"] = {{"wait", p.propensities.wait},
                       {"aside", p.propensities.aside},
                       {"jump_over", p.propensities.jump_over},
                       {"help", p.propensities.help},
                       {"wait_for_fallen", p.propensities.wait_for_fallen}};
  return j;
}

Scenario scenario_from_json(const Json& doc) {
  ObjectReader r(doc, "scenario");
  Scenario s;
  if (const Json* name = r.optional("name")) {
    if (!name->is_string()) ObjectReader::fail("scenario.name", "expected a string");
    s.name = name->get<std::string>();
  }
  s.floor = read_floor(r.field("floor"));
  const Json* roster = r.optional("roster");
  const Json* spec = r.optional("roster_spec");
  if ((roster != nullptr) == (spec != nullptr))
    ObjectReader::fail("scenario", "exactly one of 'roster' or 'roster_spec' is required");
  if (roster) {
    if (!roster->is_array()) ObjectReader::fail("scenario.roster", "expected an array");
    for (std::size_t i = 0; i < roster->size(); ++i)
      s.roster.push_back(read_profile((*roster)[i], "roster[" + std::to_string(i) + "]"));
  } else {
    s.roster_spec = read_roster_spec(*spec);
    try {
      s.roster = generate_roster(*s.roster_spec, s.roster_spec->seed);
    } catch (const std::invalid_argument& e) {
      ObjectReader::fail("roster_spec", e.what());
    }
  }
  if (const Json* params = r.optional("params")) s.params = read_params(*params);
  if (const Json* fuzzy = r.optional("fuzzy")) s.fuzzy = read_fuzzy(*fuzzy);
  r.finish();
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["floor"] = floor_json(s.floor);
  if (s.roster_spec) {
    j["roster_spec"] = roster_spec_json(*s.roster_spec);
  } else {
    j["roster"] = Json::array();
    for (const auto& p : s.roster) j["roster"].push_back(profile_to_json(p));
  }
  j["params"] = params_to_json(s.params);
  if (!(s.fuzzy == FuzzyConfig::defaults())) {
    Json f;
    for (Property prop : kAllProperties) f[std::string(to_string(prop))] = property_model_json(s.fuzzy.of(prop));
    j["fuzzy"] = std::move(f);
  }
  return j;
}

Scenario parse_scenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

std::string serialize_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(2) + "\n"; }

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON: " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  Scenario s = scenario_from_json(load_json(path));
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

void apply_overrides(Json& doc, std::span<const std::string> overrides) {
  static const std::set<std::string> kParamKeys = {"tick_s",    "emergency_coeff", "female_factor",
                                                   "fall_prob", "fall_duration_s", "patience_s", "max_sim_s",
                                                   "seed",      "placement",       "spawn_rect"};
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("override '" + item + "' is not key=value");
    std::string key = item.substr(0, eq);
    const std::string raw = item.substr(eq + 1);
    if (key.find('.') == std::string::npos && kParamKeys.count(key)) key = "params." + key;

    Json value;
    try {
      value = Json::parse(raw);
    } catch (const Json::parse_error&) {
      value = raw;
    }

    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (part.empty()) throw ParseError("override key '" + key + "' has an empty segment");
      if (!node->is_object()) throw ParseError("override key '" + key + "' does not address an object");
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      node = &(*node)[part];
      if (node->is_null()) *node = Json::object();
      start = dot + 1;
    }
  }
}

}  // namespace egress
