#include "equiblow/report.hpp"

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <utility>

#include "equiblow/chart.hpp"
#include "equiblow/errors.hpp"
#include "equiblow/principalize.hpp"
#include "equiblow/resolve.hpp"
#include "equiblow/simplify.hpp"
#include "equiblow/version.hpp"

namespace equiblow {

namespace {

// ---------------------------------------------------------------------------
// Document fragments. Exponent vectors are positional; every index that
// names a variable, an ideal or a coordinate is written one-based.

Json json_monomial(const Monomial& m) {
  Json a = Json::array();
  for (Exponent e : m.exponents()) a.push_back(e);
  return a;
}

Json json_ideal(const MonomialIdeal& ideal) {
  Json a = Json::array();
  for (const Monomial& g : ideal.generators()) a.push_back(json_monomial(g));
  return a;
}

Json json_ideals(const std::vector<MonomialIdeal>& ideals) {
  Json a = Json::array();
  for (const MonomialIdeal& ideal : ideals) a.push_back(json_ideal(ideal));
  return a;
}

Json one_based(const std::vector<int>& v) {
  Json a = Json::array();
  for (int x : v) a.push_back(x + 1);
  return a;
}

Json json_condition(int level, bool holds, bool enforced,
                    const std::vector<DepthWitness>& witnesses) {
  Json w = Json::array();
  for (const DepthWitness& dw : witnesses)
    w.push_back(Json{{"chart", dw.leaf}, {"ideals", one_based(dw.lambda)}});
  return Json{{"level", level},
              {"holds", holds},
              {"enforced", enforced},
              {"witnesses", w}};
}

Json json_centers(const std::vector<Center>& centers) {
  Json a = Json::array();
  for (const Center& c : centers)
    a.push_back(Json{{"chart", c.chart_id}, {"vars", one_based(c.vars)}});
  return a;
}

Json json_rounds(const std::vector<SelectionRound>& rounds) {
  Json a = Json::array();
  for (const SelectionRound& r : rounds)
    a.push_back(Json{{"round", r.index},
                     {"defect", r.defect},
                     {"bad_leaves", r.bad_leaves},
                     {"fallback", r.fallback},
                     {"separated", r.separated},
                     {"orbit", r.orbit_tag},
                     {"centers", json_centers(r.centers)}});
  return a;
}

Json json_per_chart_ideals(const std::map<int, MonomialIdeal>& per_chart) {
  Json a = Json::array();
  for (const auto& [chart, ideal] : per_chart)
    a.push_back(Json{{"chart", chart}, {"generators", json_ideal(ideal)}});
  return a;
}

Json json_transforms(const LeafCollection& transforms) {
  Json a = Json::array();
  for (const auto& [chart, ideals] : transforms)
    a.push_back(Json{{"chart", chart}, {"ideals", json_ideals(ideals)}});
  return a;
}

Json json_tower(const BlowupTower& tower) {
  Json charts = Json::array();
  for (const Chart& c : tower.charts()) {
    Json jc = Json::object();
    jc["id"] = c.id;
    jc["parent"] = c.parent ? Json(*c.parent) : Json(nullptr);
    jc["center"] = one_based(c.center);
    jc["branch"] = c.branch ? Json(*c.branch + 1) : Json(nullptr);
    Json subst = Json::array();
    for (const Monomial& m : c.substitution) subst.push_back(json_monomial(m));
    jc["substitution"] = subst;
    Json exc = Json::array();
    for (bool b : c.exceptional) exc.push_back(b);
    jc["exceptional"] = exc;
    charts.push_back(std::move(jc));
  }
  Json steps = Json::array();
  for (std::size_t s = 0; s < tower.steps().size(); ++s) {
    const BlowupStep& st = tower.steps()[s];
    const Center& c = st.centers.front();  // the engine schedules one per step
    steps.push_back(Json{{"index", static_cast<int>(s)},
                         {"chart", c.chart_id},
                         {"center", one_based(c.vars)},
                         {"orbit", st.orbit_tag}});
  }
  return Json{{"arity", tower.arity()},
              {"charts", charts},
              {"steps", steps},
              {"leaves", tower.leaves()}};
}

Json json_group(const GroupAction& group) {
  Json elements = Json::array();
  for (const GroupElement& g : group.elements())
    elements.push_back(Json{{"vars", one_based(g.var_perm)}});
  return Json{{"order", static_cast<int>(group.elements().size())},
              {"elements", elements}};
}

// The symmetry certificate: per element, where variables, members and charts
// go. `sigmas` is used in simplify mode, coordinate permutations (taken from
// the elements themselves) in resolve-map mode.
Json json_equivariance(const GroupAction& group, const BlowupTower& tower,
                       const std::vector<std::vector<int>>* sigmas,
                       bool with_coords) {
  Json a = Json::array();
  const std::vector<GroupElement>& elements = group.elements();
  for (std::size_t k = 0; k < elements.size(); ++k) {
    Json e = Json::object();
    e["vars"] = one_based(elements[k].var_perm);
    if (sigmas) e["ideals"] = one_based((*sigmas)[k]);
    if (with_coords) e["coords"] = one_based(*elements[k].coord_perm);
    const std::map<int, int> phi = transport_tower(elements[k], tower);
    Json pairs = Json::array();
    for (const auto& [from, to] : phi) pairs.push_back(Json::array({from, to}));
    e["charts"] = pairs;
    a.push_back(std::move(e));
  }
  return a;
}

Json json_simplify_leaves(const BlowupTower& tower,
                          const std::vector<MonomialIdeal>& ideals) {
  Json a = Json::array();
  for (int leaf : tower.leaves()) {
    Json pullbacks = Json::array();
    Json principal = Json::array();
    Json nc = Json::array();
    for (const MonomialIdeal& ideal : ideals) {
      const MonomialIdeal tt = tower.total_transform(leaf, ideal);
      pullbacks.push_back(json_ideal(tt));
      const auto [factor, residual] = gcd_and_residual(tt);
      principal.push_back(residual.is_unit());
      Json support = Json::array();
      for (int v = 0; v < tower.arity(); ++v)
        if (factor[v] > 0) support.push_back(v + 1);
      nc.push_back(std::move(support));
    }
    a.push_back(Json{{"chart", leaf},
                     {"pullbacks", pullbacks},
                     {"principal", principal},
                     {"nc", nc}});
  }
  return a;
}

Json json_resolved_leaf(const ResolvedLeaf& leaf) {
  Json pulled = Json::array();
  for (const Monomial& m : leaf.pulled) pulled.push_back(json_monomial(m));
  Json reduced = Json::array();
  for (const Monomial& m : leaf.reduced) reduced.push_back(json_monomial(m));
  return Json{{"chart", leaf.chart},
              {"coordinates", pulled},
              {"factor", json_monomial(leaf.factor)},
              {"reduced", reduced},
              {"regular", leaf.regular}};
}

ResolvedLeaf recompute_resolved_leaf(const BlowupTower& tower,
                                     const std::vector<Monomial>& coordinates,
                                     int chart) {
  std::vector<Monomial> pulled;
  for (const Monomial& f : coordinates)
    pulled.push_back(tower.pull_monomial(chart, f));
  Monomial factor = pulled.front();
  for (const Monomial& p : pulled) factor = gcd(factor, p);
  std::vector<Monomial> reduced;
  for (const Monomial& p : pulled) reduced.push_back(quotient(p, factor));
  const bool regular = std::any_of(reduced.begin(), reduced.end(),
                                   [](const Monomial& r) { return r.is_unit(); });
  return ResolvedLeaf{chart, std::move(pulled), std::move(factor),
                      std::move(reduced), regular};
}

Json json_stage(const StageRecord& rec) {
  if (rec.skipped) return Json{{"level", rec.level}, {"skipped", true}};
  Json s = Json::object();
  s["level"] = rec.level;
  s["skipped"] = false;
  s["entry"] = json_condition(rec.entry.level, rec.entry.holds,
                              rec.entry.enforced, rec.entry.witnesses);
  s["carriers"] = rec.carriers;
  s["stage_ideal"] = json_per_chart_ideals(rec.stage_j);
  s["rounds"] = json_rounds(rec.rounds);
  Json steps = Json::array();
  for (int t = rec.steps_begin; t < rec.steps_end; ++t) steps.push_back(t);
  s["steps"] = steps;
  s["transforms"] = json_transforms(rec.transforms);
  s["exit"] = json_condition(rec.exit.level, rec.exit.holds, rec.exit.enforced,
                             rec.exit.witnesses);
  s["stalk_formula"] = rec.stalk.holds;
  return s;
}

void append_defect_trace(Json& trace, const std::vector<SelectionRound>& rounds) {
  for (const SelectionRound& r : rounds)
    trace.push_back(Json{{"orbit", r.orbit_tag},
                         {"defect", r.defect},
                         {"bad_leaves", r.bad_leaves},
                         {"fallback", r.fallback},
                         {"separated", r.separated}});
}

Json json_timing(const BlowupTower& tower) {
  // Work counters, not wall-clock: identical runs must be identical bytes.
  return Json{{"blowups", static_cast<int>(tower.steps().size())},
              {"charts", static_cast<int>(tower.charts().size())},
              {"leaves", static_cast<int>(tower.leaves().size())}};
}

// ---------------------------------------------------------------------------
// Parsing.

long long parse_exponent(const Json& e, const std::string& path, std::size_t pos) {
  if (!e.is_number_integer())
    throw ParseError(path, "bad_exponent", "exponents must be integers");
  if (e.is_number_unsigned() &&
      e.get<unsigned long long>() >
          static_cast<unsigned long long>(exponent_cap()))
    throw ParseError(path, "exponent_too_large",
                     "exponent at position " + std::to_string(pos + 1) +
                         " exceeds the cap " + std::to_string(exponent_cap()));
  const long long v = e.get<long long>();
  if (v < 0)
    throw ParseError(path, "negative_exponent",
                     "exponent " + std::to_string(v) + " at position " +
                         std::to_string(pos + 1));
  return v;
}

Monomial parse_monomial(const Json& j, int arity, const std::string& path) {
  if (!j.is_array())
    throw ParseError(path, "bad_generator", "expected an exponent vector");
  if (static_cast<int>(j.size()) != arity)
    throw ParseError(path, "bad_arity",
                     "exponent vector of length " + std::to_string(j.size()) +
                         ", expected " + std::to_string(arity));
  std::vector<Exponent> exps;
  for (std::size_t k = 0; k < j.size(); ++k)
    exps.push_back(parse_exponent(j[k], path, k));
  try {
    return Monomial(std::move(exps));
  } catch (const ExponentOverflowError& e) {
    throw ParseError(path, "exponent_too_large", e.what());
  }
}

// A permutation written as a list of n one-based images; returned 0-based.
std::vector<int> parse_perm(const Json& j, int n, const std::string& path) {
  if (!j.is_array())
    throw ParseError(path, "bad_permutation",
                     "expected a list of one-based images");
  if (static_cast<int>(j.size()) != n)
    throw ParseError(path, "wrong_length",
                     "image list of length " + std::to_string(j.size()) +
                         ", expected " + std::to_string(n));
  std::vector<int> out;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const Json& v : j) {
    if (!v.is_number_integer())
      throw ParseError(path, "bad_permutation", "images must be integers");
    const long long x = v.get<long long>();
    if (x < 1 || x > n)
      throw ParseError(path, "bad_permutation",
                       "image " + std::to_string(x) + " is out of range 1.." +
                           std::to_string(n));
    if (seen[static_cast<std::size_t>(x - 1)])
      throw ParseError(path, "bad_permutation",
                       "image " + std::to_string(x) + " appears twice");
    seen[static_cast<std::size_t>(x - 1)] = true;
    out.push_back(static_cast<int>(x - 1));
  }
  return out;
}

}  // namespace

ProblemFile parse_problem(const std::string& bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw ParseError("", "malformed_json", e.what());
  }
  if (!doc.is_object())
    throw ParseError("", "not_an_object", "problem file must be a JSON object");

  ProblemFile p;
  p.raw = bytes;

  if (!doc.contains("mode"))
    throw ParseError("mode", "missing_field", "problem needs a mode");
  if (!doc["mode"].is_string())
    throw ParseError("mode", "bad_mode", "mode must be a string");
  p.mode = doc["mode"].get<std::string>();
  if (p.mode != "simplify" && p.mode != "resolve-map")
    throw ParseError("mode", "bad_mode",
                     "unknown mode \"" + p.mode +
                         "\" (use \"simplify\" or \"resolve-map\")");

  if (!doc.contains("variables"))
    throw ParseError("variables", "missing_field", "problem needs variable names");
  const Json& vars = doc["variables"];
  if (!vars.is_array() || vars.empty())
    throw ParseError("variables", "bad_variables",
                     "variables must be a non-empty list of names");
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const std::string path = "variables[" + std::to_string(k) + "]";
    if (!vars[k].is_string() || vars[k].get<std::string>().empty())
      throw ParseError(path, "bad_variables",
                       "variable names must be non-empty strings");
    const std::string name = vars[k].get<std::string>();
    if (std::find(p.variables.begin(), p.variables.end(), name) !=
        p.variables.end())
      throw ParseError(path, "duplicate_variable",
                       "variable \"" + name + "\" appears twice");
    p.variables.push_back(name);
  }
  const int arity = static_cast<int>(p.variables.size());

  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "mode" && key != "variables" && key != "ideals" &&
        key != "map" && key != "group" && key != "max_steps")
      throw ParseError(key, "unknown_field", "unknown field \"" + key + "\"");
  }

  const bool simplify = p.mode == "simplify";
  if (simplify) {
    if (doc.contains("map"))
      throw ParseError("map", "unexpected_field",
                       "map coordinates do not belong in a simplify problem");
    if (!doc.contains("ideals"))
      throw ParseError("ideals", "missing_field",
                       "simplify needs a collection of ideals");
    const Json& ideals = doc["ideals"];
    if (!ideals.is_array() || ideals.empty())
      throw ParseError("ideals", "bad_collection",
                       "ideals must be a non-empty list");
    for (std::size_t i = 0; i < ideals.size(); ++i) {
      const std::string ipath = "ideals[" + std::to_string(i) + "]";
      if (!ideals[i].is_array() || ideals[i].empty())
        throw ParseError(ipath, "empty_ideal",
                         "an ideal needs at least one generator");
      std::vector<Monomial> gens;
      for (std::size_t j = 0; j < ideals[i].size(); ++j)
        gens.push_back(parse_monomial(
            ideals[i][j], arity, ipath + "[" + std::to_string(j) + "]"));
      p.ideals.push_back(MonomialIdeal(std::move(gens)));
    }
  } else {
    if (doc.contains("ideals"))
      throw ParseError("ideals", "unexpected_field",
                       "an ideal collection does not belong in a resolve-map "
                       "problem");
    if (!doc.contains("map"))
      throw ParseError("map", "missing_field",
                       "resolve-map needs coordinate monomials");
    const Json& map = doc["map"];
    if (!map.is_array() || map.empty())
      throw ParseError("map", "bad_map",
                       "map must be a non-empty list of monomials");
    for (std::size_t k = 0; k < map.size(); ++k)
      p.map_coordinates.push_back(
          parse_monomial(map[k], arity, "map[" + std::to_string(k) + "]"));
  }

  if (doc.contains("group")) {
    const Json& group = doc["group"];
    if (!group.is_array())
      throw ParseError("group", "bad_group",
                       "group must be a list of generators");
    for (std::size_t k = 0; k < group.size(); ++k) {
      const std::string gpath = "group[" + std::to_string(k) + "]";
      const Json& gen = group[k];
      if (!gen.is_object())
        throw ParseError(gpath, "bad_group", "a generator must be an object");
      for (const auto& [key, value] : gen.items()) {
        (void)value;
        if (key != "vars" && key != "ideals" && key != "coords")
          throw ParseError(gpath + "." + key, "unknown_field",
                           "unknown field \"" + key + "\"");
      }
      if (!gen.contains("vars"))
        throw ParseError(gpath + ".vars", "missing_field",
                         "a generator needs its variable images");
      GroupElement element;
      element.var_perm = parse_perm(gen["vars"], arity, gpath + ".vars");
      if (gen.contains("ideals")) {
        if (!simplify)
          throw ParseError(gpath + ".ideals", "unexpected_field",
                           "ideal permutations only apply to simplify problems");
        element.ideal_perm =
            parse_perm(gen["ideals"], static_cast<int>(p.ideals.size()),
                       gpath + ".ideals");
      }
      if (gen.contains("coords")) {
        if (simplify)
          throw ParseError(gpath + ".coords", "unexpected_field",
                           "coordinate permutations only apply to resolve-map "
                           "problems");
        element.coord_perm = parse_perm(
            gen["coords"], static_cast<int>(p.map_coordinates.size()),
            gpath + ".coords");
      }
      p.generators.push_back(std::move(element));
    }
  }

  if (doc.contains("max_steps")) {
    const Json& ms = doc["max_steps"];
    if (!ms.is_number_integer() || ms.get<long long>() < 0)
      throw ParseError("max_steps", "bad_max_steps",
                       "max_steps must be a non-negative integer");
    p.max_steps = static_cast<int>(ms.get<long long>());
  }

  return p;
}

Json emit_problem(const ProblemFile& problem) {
  Json doc = Json::object();
  doc["mode"] = problem.mode;
  doc["variables"] = problem.variables;
  if (problem.mode == "simplify") {
    doc["ideals"] = json_ideals(problem.ideals);
  } else {
    Json map = Json::array();
    for (const Monomial& f : problem.map_coordinates)
      map.push_back(json_monomial(f));
    doc["map"] = map;
  }
  if (!problem.generators.empty()) {
    Json group = Json::array();
    for (const GroupElement& g : problem.generators) {
      Json gen = Json::object();
      gen["vars"] = one_based(g.var_perm);
      if (g.ideal_perm) gen["ideals"] = one_based(*g.ideal_perm);
      if (g.coord_perm) gen["coords"] = one_based(*g.coord_perm);
      group.push_back(std::move(gen));
    }
    doc["group"] = group;
  }
  if (problem.max_steps) doc["max_steps"] = *problem.max_steps;
  return doc;
}

std::string input_hash(const std::string& raw_bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : raw_bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

int effective_max_steps(std::optional<int> override_steps,
                        std::optional<int> env_steps,
                        const ProblemFile& problem) {
  int chosen = 50;
  if (override_steps)
    chosen = *override_steps;
  else if (env_steps)
    chosen = *env_steps;
  else if (problem.max_steps)
    chosen = *problem.max_steps;
  if (chosen < 0) throw PreconditionError("step budget cannot be negative");
  return chosen;
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Running.

namespace {

Json run_simplify(const ProblemFile& problem, int max_steps,
                  std::string* tower_dot) {
  SimplifyResult r = simplify_collection(problem.ideals, problem.generators,
                                         max_steps, problem.variables);
  if (tower_dot) *tower_dot = r.tower.to_dot();

  Json doc = Json::object();
  doc["engine"] = kEngine;
  doc["mode"] = "simplify";
  doc["input_hash"] = input_hash(problem.raw);
  doc["variables"] = problem.variables;
  doc["max_steps"] = max_steps;
  doc["status"] = "ok";
  doc["ideals"] = json_ideals(r.ideals);
  doc["group"] = json_group(r.group);
  doc["tower"] = json_tower(r.tower);
  Json stages = Json::array();
  for (const StageRecord& rec : r.stages) stages.push_back(json_stage(rec));
  doc["stages"] = stages;
  doc["leaves"] = json_simplify_leaves(r.tower, r.ideals);
  doc["equivariance"] = json_equivariance(r.group, r.tower, &r.sigmas, false);
  Json trace = Json::array();
  for (const StageRecord& rec : r.stages)
    if (!rec.skipped) append_defect_trace(trace, rec.rounds);
  doc["defect_trace"] = trace;
  doc["timing"] = json_timing(r.tower);
  return doc;
}

Json run_resolve(const ProblemFile& problem, int max_steps,
                 std::string* tower_dot) {
  RationalMapSpec spec{problem.map_coordinates, problem.generators,
                       problem.variables};
  ResolvedMap r = resolve_map(spec, max_steps);
  if (tower_dot) *tower_dot = r.tower.to_dot();

  Json doc = Json::object();
  doc["engine"] = kEngine;
  doc["mode"] = "resolve-map";
  doc["input_hash"] = input_hash(problem.raw);
  doc["variables"] = problem.variables;
  doc["max_steps"] = max_steps;
  doc["status"] = "ok";
  Json map = Json::array();
  for (const Monomial& f : problem.map_coordinates)
    map.push_back(json_monomial(f));
  doc["map"] = map;
  doc["base_ideal"] = json_ideal(r.base);
  doc["group"] = json_group(r.group);
  doc["tower"] = json_tower(r.tower);
  Json leaves = Json::array();
  for (const ResolvedLeaf& leaf : r.leaves)
    leaves.push_back(json_resolved_leaf(leaf));
  doc["leaves"] = leaves;
  doc["equivariance"] = json_equivariance(r.group, r.tower, nullptr, true);
  Json trace = Json::array();
  append_defect_trace(trace, r.principalization.rounds);
  doc["defect_trace"] = trace;
  doc["timing"] = json_timing(r.tower);
  return doc;
}

}  // namespace

Json run(const ProblemFile& problem, int max_steps, std::string* tower_dot) {
  if (problem.mode == "simplify")
    return run_simplify(problem, max_steps, tower_dot);
  if (problem.mode == "resolve-map")
    return run_resolve(problem, max_steps, tower_dot);
  throw PreconditionError("unknown mode \"" + problem.mode + "\"");
}

// ---------------------------------------------------------------------------
// Verification: replay the recorded steps, recompute everything semantic,
// and diff. Provenance (engine string, selection rationale) is copied
// through untouched so reports from other engine versions verify on content.

namespace {

std::string compact(const Json& j) {
  std::string s = j.dump();
  if (s.size() > 80) s = s.substr(0, 77) + "...";
  return s;
}

void add_witness(VerifyResult& res, const std::string& witness) {
  res.ok = false;
  res.witnesses.push_back(witness);
}

void diff_json(const Json& got, const Json& want, const std::string& path,
               VerifyResult& res) {
  if (got == want) return;
  if (got.is_object() && want.is_object()) {
    std::vector<std::string> keys;
    for (auto it = want.begin(); it != want.end(); ++it) keys.push_back(it.key());
    for (auto it = got.begin(); it != got.end(); ++it)
      if (!want.contains(it.key())) keys.push_back(it.key());
    for (const std::string& key : keys) {
      const std::string sub = path.empty() ? key : path + "." + key;
      if (!got.contains(key)) {
        add_witness(res, sub + ": missing");
        continue;
      }
      if (!want.contains(key)) {
        add_witness(res, sub + ": unexpected field");
        continue;
      }
      diff_json(got[key], want[key], sub, res);
    }
    return;
  }
  if (got.is_array() && want.is_array()) {
    if (got.size() != want.size()) {
      add_witness(res, path + ": expected " + std::to_string(want.size()) +
                           " entries, found " + std::to_string(got.size()));
      return;
    }
    for (std::size_t i = 0; i < got.size(); ++i)
      diff_json(got[i], want[i], path + "[" + std::to_string(i) + "]", res);
    return;
  }
  add_witness(res,
              path + ": expected " + compact(want) + ", found " + compact(got));
}

// Copy a provenance field from the report into the expected document (so the
// diff stays quiet about it), complaining only when its shape is off.
void copy_provenance(const Json& report, Json& expected, const std::string& key,
                     bool (Json::*shape)() const, const char* description,
                     VerifyResult& res) {
  if (report.contains(key) && (report[key].*shape)()) {
    expected[key] = report[key];
  } else {
    add_witness(res, key + ": missing or not " + description);
    if (report.contains(key)) expected[key] = report[key];
  }
}

// Replay `count` recorded steps starting at `from` onto the tower. Returns
// false (with a witness) when the record is malformed or refuses to replay.
bool replay_steps(BlowupTower& tower, const Json& steps, std::size_t from,
                  std::size_t count, VerifyResult& res) {
  for (std::size_t s = from; s < from + count; ++s) {
    const std::string where = "tower.steps[" + std::to_string(s) + "]";
    if (s >= steps.size()) {
      add_witness(res, where + ": missing (stages list more steps than the "
                               "step table holds)");
      return false;
    }
    const Json& st = steps[s];
    if (!st.is_object() || !st.contains("chart") ||
        !st["chart"].is_number_integer() || !st.contains("center") ||
        !st["center"].is_array()) {
      add_witness(res, where + ": malformed step record");
      return false;
    }
    std::vector<int> center;
    for (const Json& v : st["center"]) {
      if (!v.is_number_integer()) {
        add_witness(res, where + ".center: variable indices must be integers");
        return false;
      }
      center.push_back(static_cast<int>(v.get<long long>()) - 1);
    }
    std::string orbit;
    if (st.contains("orbit") && st["orbit"].is_string())
      orbit = st["orbit"].get<std::string>();
    else
      add_witness(res, where + ".orbit: missing or not a string");
    try {
      tower.blow_up(static_cast<int>(st["chart"].get<long long>()),
                    std::move(center), std::move(orbit));
    } catch (const Error& e) {
      add_witness(res, where + ": cannot replay (" + std::string(e.what()) + ")");
      return false;
    }
  }
  return true;
}

bool all_values_principal(const LeafCollection& values) {
  for (const auto& [leaf, vals] : values) {
    (void)leaf;
    for (const MonomialIdeal& v : vals)
      if (!is_locally_principal(v)) return false;
  }
  return true;
}

void verify_simplify(const ProblemFile& problem, const Json& report,
                     VerifyResult& res) {
  const int arity = static_cast<int>(problem.variables.size());

  // Same canonicalization as a run: claims checked against the input order,
  // then dropped; the collection sorted; induced permutations recomputed.
  check_collection_invariant(GroupAction::closure(problem.generators, arity),
                             problem.ideals);
  std::vector<GroupElement> stripped = problem.generators;
  for (GroupElement& g : stripped) {
    g.ideal_perm.reset();
    g.coord_perm.reset();
  }
  const GroupAction action = GroupAction::closure(stripped, arity);
  std::vector<MonomialIdeal> ideals = problem.ideals;
  std::sort(ideals.begin(), ideals.end(), ideal_before);
  const std::vector<std::vector<int>> sigmas =
      check_collection_invariant(action, ideals);
  const int n = static_cast<int>(ideals.size());

  if (!report.contains("tower") || !report["tower"].is_object() ||
      !report["tower"].contains("steps") ||
      !report["tower"]["steps"].is_array()) {
    add_witness(res, "tower.steps: missing or not a list");
    return;
  }
  const Json& jsteps = report["tower"]["steps"];
  if (!report.contains("stages") || !report["stages"].is_array() ||
      static_cast<int>(report["stages"].size()) != n) {
    add_witness(res, "stages: expected one record per level, " +
                         std::to_string(n) + " in total");
    return;
  }
  const Json& jstages = report["stages"];

  BlowupTower tower = BlowupTower::new_root(arity, problem.variables);
  LeafCollection values;
  values.emplace(0, ideals);
  Json expected_stages = Json::array();
  std::size_t cursor = 0;
  bool shortcut = false;

  for (int k = 0, i = n + 1; i >= 2; --i, ++k) {
    const std::string spath = "stages[" + std::to_string(k) + "]";
    const Json& jst = jstages[static_cast<std::size_t>(k)];
    if (!jst.is_object()) {
      add_witness(res, spath + ": not an object");
      return;
    }
    const bool recorded_skip = jst.value("skipped", false);
    if (i > 2 && all_values_principal(values)) {
      if (!recorded_skip) {
        add_witness(res, spath + ".skipped: expected true; every value is "
                                 "already locally principal at this level");
        return;
      }
      expected_stages.push_back(Json{{"level", i}, {"skipped", true}});
      shortcut = true;
      continue;
    }
    if (recorded_skip) {
      add_witness(res, spath + ".skipped: this stage cannot be skipped");
      return;
    }

    Json xs = Json::object();
    xs["level"] = i;
    xs["skipped"] = false;
    const DepthCheck entry = check_depth_condition(values, i);
    xs["entry"] = json_condition(i, entry.holds, !shortcut, entry.witnesses);
    std::vector<int> carriers;
    for (const auto& [leaf, vals] : values) {
      carriers.push_back(leaf);
      (void)vals;
    }
    xs["carriers"] = carriers;
    std::map<int, MonomialIdeal> stage_j = stage_ideal(values, i);
    xs["stage_ideal"] = json_per_chart_ideals(stage_j);
    if (jst.contains("rounds") && jst["rounds"].is_array()) {
      xs["rounds"] = jst["rounds"];
    } else {
      add_witness(res, spath + ".rounds: missing or not a list");
      xs["rounds"] = Json::array();
    }
    std::size_t count = 0;
    if (jst.contains("steps") && jst["steps"].is_array()) {
      count = jst["steps"].size();
    } else {
      add_witness(res, spath + ".steps: missing or not a list");
    }
    Json xsteps = Json::array();
    for (std::size_t t = 0; t < count; ++t)
      xsteps.push_back(static_cast<int>(cursor + t));
    xs["steps"] = xsteps;
    if (!replay_steps(tower, jsteps, cursor, count, res)) return;
    cursor += count;

    LeafCollection transforms;
    try {
      transforms = weak_transforms(tower, values, stage_j);
    } catch (const Error& e) {
      add_witness(res, spath + ": " + std::string(e.what()));
      return;
    }
    xs["transforms"] = json_transforms(transforms);
    const DepthCheck exit = check_depth_condition(transforms, i - 1);
    xs["exit"] = json_condition(i - 1, exit.holds, true, exit.witnesses);
    xs["stalk_formula"] = verify_stalk_formula(tower, ideals, transforms).holds;
    values = std::move(transforms);
    expected_stages.push_back(std::move(xs));
  }
  if (cursor != jsteps.size())
    add_witness(res, "tower.steps: " + std::to_string(jsteps.size()) +
                         " recorded but the stages account for " +
                         std::to_string(cursor));

  Json expected = Json::object();
  copy_provenance(report, expected, "engine", &Json::is_string, "a string", res);
  expected["mode"] = "simplify";
  expected["input_hash"] = input_hash(problem.raw);
  expected["variables"] = problem.variables;
  copy_provenance(report, expected, "max_steps", &Json::is_number_integer,
                  "an integer", res);
  expected["status"] = "ok";
  expected["ideals"] = json_ideals(ideals);
  expected["group"] = json_group(action);
  expected["tower"] = json_tower(tower);
  expected["stages"] = expected_stages;
  expected["leaves"] = json_simplify_leaves(tower, ideals);
  try {
    expected["equivariance"] = json_equivariance(action, tower, &sigmas, false);
  } catch (const Error& e) {
    add_witness(res, "equivariance: " + std::string(e.what()));
    if (report.contains("equivariance"))
      expected["equivariance"] = report["equivariance"];
  }
  copy_provenance(report, expected, "defect_trace", &Json::is_array, "a list",
                  res);
  expected["timing"] = json_timing(tower);

  diff_json(report, expected, "", res);
}

void verify_resolve(const ProblemFile& problem, const Json& report,
                    VerifyResult& res) {
  const int arity = static_cast<int>(problem.variables.size());
  const GroupAction group = map_symmetry_closure(RationalMapSpec{
      problem.map_coordinates, problem.generators, problem.variables});
  for (const GroupElement& g : group.elements()) {
    if (!g.coord_perm) {
      add_witness(res, "group: an element has no coordinate permutation");
      return;
    }
    for (std::size_t k = 0; k < problem.map_coordinates.size(); ++k)
      if (act(g, problem.map_coordinates[k]) !=
          problem.map_coordinates[static_cast<std::size_t>((*g.coord_perm)[k])]) {
        add_witness(res, "group: the map is not symmetric as claimed");
        return;
      }
  }
  const MonomialIdeal base = MonomialIdeal(problem.map_coordinates);

  if (!report.contains("tower") || !report["tower"].is_object() ||
      !report["tower"].contains("steps") ||
      !report["tower"]["steps"].is_array()) {
    add_witness(res, "tower.steps: missing or not a list");
    return;
  }
  const Json& jsteps = report["tower"]["steps"];
  BlowupTower tower = BlowupTower::new_root(arity, problem.variables);
  if (!replay_steps(tower, jsteps, 0, jsteps.size(), res)) return;

  Json expected = Json::object();
  copy_provenance(report, expected, "engine", &Json::is_string, "a string", res);
  expected["mode"] = "resolve-map";
  expected["input_hash"] = input_hash(problem.raw);
  expected["variables"] = problem.variables;
  copy_provenance(report, expected, "max_steps", &Json::is_number_integer,
                  "an integer", res);
  expected["status"] = "ok";
  Json map = Json::array();
  for (const Monomial& f : problem.map_coordinates)
    map.push_back(json_monomial(f));
  expected["map"] = map;
  expected["base_ideal"] = json_ideal(base);
  expected["group"] = json_group(group);
  expected["tower"] = json_tower(tower);
  Json leaves = Json::array();
  for (int chart : tower.leaves())
    leaves.push_back(json_resolved_leaf(
        recompute_resolved_leaf(tower, problem.map_coordinates, chart)));
  expected["leaves"] = leaves;
  try {
    expected["equivariance"] = json_equivariance(group, tower, nullptr, true);
  } catch (const Error& e) {
    add_witness(res, "equivariance: " + std::string(e.what()));
    if (report.contains("equivariance"))
      expected["equivariance"] = report["equivariance"];
  }
  copy_provenance(report, expected, "defect_trace", &Json::is_array, "a list",
                  res);
  expected["timing"] = json_timing(tower);

  diff_json(report, expected, "", res);
}

}  // namespace

VerifyResult verify_report(const ProblemFile& problem, const Json& report) {
  VerifyResult res;
  if (!report.is_object()) {
    add_witness(res, "report: not a JSON object");
    return res;
  }

  // The hash gate comes first: checking a report against the wrong problem
  // file proves nothing either way.
  const std::string expected_hash = input_hash(problem.raw);
  const std::string recorded_hash =
      report.contains("input_hash") && report["input_hash"].is_string()
          ? report["input_hash"].get<std::string>()
          : std::string();
  if (recorded_hash != expected_hash)
    throw StaleReportError("report input hash \"" + recorded_hash +
                           "\" does not match the problem file (" +
                           expected_hash + ")");

  if (report.value("mode", std::string()) != problem.mode) {
    add_witness(res, "mode: report was produced for mode \"" +
                         report.value("mode", std::string()) +
                         "\", the problem says \"" + problem.mode + "\"");
    return res;
  }

  try {
    if (problem.mode == "simplify")
      verify_simplify(problem, report, res);
    else
      verify_resolve(problem, report, res);
  } catch (const Json::exception& e) {
    add_witness(res, "report: malformed structure (" + std::string(e.what()) + ")");
  } catch (const Error& e) {
    add_witness(res, "verification aborted: " + std::string(e.what()));
  }
  return res;
}

}  // namespace equiblow
