// Acceptance gate: one self-contained check per shipped guarantee, one
// [PASS]/[FAIL] line each, nonzero exit when anything fails. Counterexamples
// found by the random suites are archived under the artifact directory so a
// red run always leaves something to debug with.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../helpers.hpp"
#include "equiblow/principalize.hpp"
#include "equiblow/report.hpp"
#include "equiblow/resolve.hpp"
#include "equiblow/simplify.hpp"

using namespace equiblow;
using testutil::SplitMix64;

namespace {

int failures = 0;
std::filesystem::path out_dir;

void line(int criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": "
            << detail << "\n";
  if (!ok) ++failures;
}

void archive(const std::string& file, const std::string& text) {
  std::ofstream out(out_dir / file, std::ios::app);
  out << text;
}

std::string show(const MonomialIdeal& ideal) {
  std::ostringstream s;
  s << "[";
  for (std::size_t g = 0; g < ideal.generators().size(); ++g) {
    if (g) s << ", ";
    s << "[";
    const Monomial& m = ideal.generators()[g];
    for (int v = 0; v < m.arity(); ++v) {
      if (v) s << " ";
      s << m[v];
    }
    s << "]";
  }
  s << "]";
  return s.str();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

GroupElement elem(std::vector<int> vars) {
  GroupElement g;
  g.var_perm = std::move(vars);
  return g;
}

Monomial rmono(SplitMix64& rng, int arity, Exponent per_var) {
  std::vector<Exponent> e(static_cast<std::size_t>(arity));
  for (auto& x : e)
    x = static_cast<Exponent>(rng.below(static_cast<std::uint64_t>(per_var) + 1));
  return Monomial(std::move(e));
}

// --- criterion 1: generator-level algebra vs. the exponent-box oracle -----

void criterion1() {
  SplitMix64 rng(0x5eedacce01ull);
  const auto start = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int arity = 1 + static_cast<int>(rng.below(3));
    const MonomialIdeal a = testutil::random_ideal(rng, arity, 4, 4);
    const MonomialIdeal b = testutil::random_ideal(rng, arity, 4, 4);
    const bool ok = testutil::sum_box_oracle(a, b, sum(a, b), 8) &&
                    testutil::intersect_box_oracle(a, b, intersect(a, b), 8) &&
                    testutil::colon_box_oracle(a, b, colon(a, b), 8);
    if (!ok) {
      ++mismatches;
      archive("criterion1_mismatches.txt",
              "trial " + std::to_string(trial) + ": a=" + show(a) +
                  " b=" + show(b) + "\n");
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream detail;
  detail << "sum/intersect/colon match the box oracle on 1000 random pairs, "
         << mismatches << " mismatches, " << secs << " s";
  line(1, mismatches == 0 && secs < 60.0, detail.str());
}

// --- criterion 2: principalizer soundness under the step guard ------------

void criterion2() {
  SplitMix64 rng(0x5eedacce02ull);
  int guard_trips = 0;
  int unprincipal = 0;
  int pair_regressions = 0;
  int fallback_emergences = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int arity = 1 + static_cast<int>(rng.below(3));
    const int count = 1 + static_cast<int>(rng.below(4));
    std::vector<Monomial> gens;
    for (int g = 0; g < count; ++g) {
      Monomial m = rmono(rng, arity, 5);
      while (m.degree() > 5) m = rmono(rng, arity, 5);
      gens.push_back(std::move(m));
    }
    const MonomialIdeal ideal{std::move(gens)};
    try {
      PrincipalizedIdeal p =
          principalize(ideal, GroupAction::trivial(arity), 50);
      for (int leaf : p.tower.leaves())
        if (!is_locally_principal(p.tower.total_transform(leaf, ideal))) {
          ++unprincipal;
          archive("criterion2_unprincipal.txt",
                  "trial " + std::to_string(trial) + ": " + show(ideal) +
                      " leaf " + std::to_string(leaf) + "\n");
        }
      // The pair defect may only rise when the previous round was a
      // fallback: there the table is blind (all pair values 0) and the
      // blowup legitimately makes real pair defects visible. A rise from a
      // positive defect would mean max-defect selection failed to improve
      // its own measure, which is a bug.
      for (std::size_t r = 1; r < p.result.rounds.size(); ++r)
        if (p.result.rounds[r].defect > p.result.rounds[r - 1].defect) {
          ++(p.result.rounds[r - 1].fallback ? fallback_emergences
                                             : pair_regressions);
          archive("criterion2_defect_increase.txt",
                  "trial " + std::to_string(trial) + ": " + show(ideal) +
                      " round " + std::to_string(r) + " defect " +
                      std::to_string(p.result.rounds[r - 1].defect) + " -> " +
                      std::to_string(p.result.rounds[r].defect) +
                      (p.result.rounds[r - 1].fallback ? " (after fallback)"
                                                       : "") +
                      "\n");
        }
    } catch (const TerminationGuardError& e) {
      ++guard_trips;
      std::ostringstream note;
      note << "trial " << trial << ": " << show(ideal) << "\n  " << e.what()
           << "\n  defect trace:";
      for (int d : e.trace()) note << " " << d;
      note << "\n";
      archive("criterion2_guard_trips.txt", note.str());
    }
  }
  std::ostringstream detail;
  detail << "200 random ideals principalized within 50 steps: " << guard_trips
         << " guard trips, " << unprincipal << " non-principal leaves, "
         << pair_regressions << " pair-defect regressions";
  if (fallback_emergences > 0)
    detail << " (note: " << fallback_emergences
           << " post-fallback defect emergences, archived, benign)";
  line(2, guard_trips == 0 && unprincipal == 0 && pair_regressions == 0,
       detail.str());
}

// --- criteria 3 + 4: stage invariants on one random collection suite ------

std::vector<std::vector<MonomialIdeal>> random_collections() {
  SplitMix64 rng(0x5eedacce03ull);
  std::vector<std::vector<MonomialIdeal>> suite;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(3));
    std::vector<MonomialIdeal> collection;
    for (int i = 0; i < n; ++i) {
      const int count = 1 + static_cast<int>(rng.below(3));
      std::vector<Monomial> gens;
      for (int g = 0; g < count; ++g) gens.push_back(rmono(rng, 3, 2));
      collection.push_back(MonomialIdeal(std::move(gens)));
    }
    suite.push_back(std::move(collection));
  }
  return suite;
}

void criteria3and4(const std::vector<std::vector<MonomialIdeal>>& suite) {
  int exit_violations = 0;
  int unprincipal = 0;
  int stalk_violations = 0;
  int aborted = 0;
  for (std::size_t trial = 0; trial < suite.size(); ++trial) {
    try {
      const SimplifyResult r =
          simplify_collection(suite[trial], {}, 50, {"x", "y", "z"});
      for (const StageRecord& stage : r.stages) {
      if (stage.skipped) continue;
      // Independent re-check of the stage exit: the depth condition one
      // level down must hold on the stage's own weak transforms.
        if (!stage.exit.holds ||
            !check_depth_condition(stage.transforms, stage.level - 1).holds) {
          ++exit_violations;
          archive("criterion3_exit_violations.txt",
                  "trial " + std::to_string(trial) + " stage level " +
                      std::to_string(stage.level) + "\n");
        }
        if (!stage.stalk.holds) ++stalk_violations;
      }
      for (int leaf : r.tower.leaves())
        for (const MonomialIdeal& original : r.ideals)
          if (!is_locally_principal(r.tower.total_transform(leaf, original)))
            ++unprincipal;
      if (!verify_stalk_formula(r.tower, r.ideals, r.final_values).holds)
        ++stalk_violations;
    } catch (const TerminationGuardError& e) {
      ++aborted;
      archive("criterion3_aborted.txt", "trial " + std::to_string(trial) +
                                            ": " + std::string(e.what()) + "\n");
    }
  }
  std::ostringstream d3;
  d3 << suite.size() << " random collections simplified: " << aborted
     << " aborted, " << exit_violations << " stage-exit violations, "
     << unprincipal << " non-principal original pullbacks";
  line(3, aborted == 0 && exit_violations == 0 && unprincipal == 0, d3.str());
  std::ostringstream d4;
  d4 << "stalk-formula audit true on every stage and on the final towers, "
     << stalk_violations << " violations";
  line(4, aborted == 0 && stalk_violations == 0, d4.str());
}

// --- criterion 5: equivariance on the fixed symmetric suite ---------------

int check_simplify_equivariance(const std::vector<MonomialIdeal>& collection,
                                const std::vector<GroupElement>& gens,
                                std::vector<std::string> names) {
  int bad = 0;
  SimplifyResult r = simplify_collection(collection, gens, 50, std::move(names));
  for (std::size_t k = 0; k < r.group.elements().size(); ++k) {
    const GroupElement& g = r.group.elements()[k];
    std::map<int, int> phi;
    try {
      phi = transport_tower(g, r.tower);
    } catch (const Error&) {
      ++bad;
      continue;
    }
    const std::vector<int>& sigma = r.sigmas[k];
    for (int leaf : r.tower.leaves()) {
      for (std::size_t i = 0; i < r.ideals.size(); ++i) {
        const std::size_t j = static_cast<std::size_t>(sigma[i]);
        if (act_on_ideal(g, r.final_values.at(leaf)[i]) !=
            r.final_values.at(phi.at(leaf))[j])
          ++bad;
        if (act_on_ideal(g, r.tower.total_transform(leaf, r.ideals[i])) !=
            r.tower.total_transform(phi.at(leaf), r.ideals[j]))
          ++bad;
      }
    }
  }
  return bad;
}

int check_resolve_equivariance(const RationalMapSpec& map) {
  int bad = 0;
  ResolvedMap r = resolve_map(map, 50);
  for (const GroupElement& g : r.group.elements()) {
    try {
      transport_tower(g, r.tower);
    } catch (const Error&) {
      ++bad;
    }
  }
  if (!verify_resolution(r).ok) ++bad;
  return bad;
}

// Render the tower section of a report run on a problem assembled in memory.
std::string tower_section(const std::string& mode,
                          std::vector<std::string> variables,
                          std::vector<MonomialIdeal> ideals,
                          std::vector<GroupElement> generators) {
  ProblemFile p;
  p.mode = mode;
  p.variables = std::move(variables);
  p.ideals = std::move(ideals);
  p.generators = std::move(generators);
  p.raw = render(emit_problem(p));
  Json doc = run(p, 50);
  return doc["tower"].dump();
}

void criterion5() {
  using testutil::ideal;
  int bad = 0;

  const std::vector<MonomialIdeal> pair = {ideal({{2, 0}, {0, 1}}),
                                           ideal({{1, 0}, {0, 2}})};
  const std::vector<MonomialIdeal> axes = {
      ideal({{1, 0, 0}}), ideal({{0, 1, 0}}), ideal({{0, 0, 1}})};
  bad += check_simplify_equivariance(pair, {elem({1, 0})}, {"x", "y"});
  bad += check_simplify_equivariance(axes, {elem({1, 0, 2}), elem({1, 2, 0})},
                                     {"x", "y", "z"});
  bad += check_simplify_equivariance(axes, {elem({1, 2, 0})}, {"x", "y", "z"});

  RationalMapSpec lin;
  lin.coordinates = {Monomial({1, 0}), Monomial({0, 1})};
  lin.generators = {elem({1, 0})};
  lin.generators[0].coord_perm = std::vector<int>{1, 0};
  bad += check_resolve_equivariance(lin);
  RationalMapSpec conic;
  conic.coordinates = {Monomial({2, 0}), Monomial({1, 1}), Monomial({0, 2})};
  conic.generators = {elem({1, 0})};
  conic.generators[0].coord_perm = std::vector<int>{2, 1, 0};
  bad += check_resolve_equivariance(conic);

  // Feeding the collection in another order must leave the tower section of
  // the report untouched, byte for byte.
  int reordered = 0;
  if (tower_section("simplify", {"x", "y"}, pair, {elem({1, 0})}) !=
      tower_section("simplify", {"x", "y"}, {pair[1], pair[0]},
                    {elem({1, 0})}))
    ++reordered;
  if (tower_section("simplify", {"x", "y", "z"}, axes,
                    {elem({1, 0, 2}), elem({1, 2, 0})}) !=
      tower_section("simplify", {"x", "y", "z"}, {axes[2], axes[0], axes[1]},
                    {elem({1, 0, 2}), elem({1, 2, 0})}))
    ++reordered;

  std::ostringstream detail;
  detail << "fixed symmetric suite: " << bad
         << " transport/equivariance defects, " << reordered
         << " input-order-sensitive towers";
  line(5, bad == 0 && reordered == 0, detail.str());
}

// --- criterion 6: the worked pair, byte for byte and fact by fact ---------

void criterion6() {
  using testutil::ideal;
  const std::filesystem::path data = EQUIBLOW_TEST_DATA_DIR;
  ProblemFile p = parse_problem(slurp(data / "worked_pair.json"));
  const std::string got = render(run(p, effective_max_steps({}, {}, p)));
  const std::string want = slurp(data / "worked_pair_report.golden.json");
  const bool golden = !want.empty() && got == want;

  GroupElement swap = elem({1, 0});
  swap.ideal_perm = std::vector<int>{1, 0};
  SimplifyResult r = simplify_collection(
      {ideal({{2, 0}, {0, 1}}), ideal({{1, 0}, {0, 2}})}, {swap}, 50,
      {"x", "y"});
  const MonomialIdeal xy = ideal({{1, 0}, {0, 1}});
  bool facts = r.stages.size() == 2 && r.tower.leaves().size() == 4;
  if (facts) {
    const StageRecord& s3 = r.stages[0];
    const StageRecord& s2 = r.stages[1];
    facts = s3.level == 3 && s3.stage_j.at(0) == xy &&
            s3.steps_end - s3.steps_begin == 1 &&
            s3.transforms.at(1)[0] == xy && s3.transforms.at(1)[1].is_unit() &&
            s3.transforms.at(2)[0].is_unit() && s3.transforms.at(2)[1] == xy &&
            s2.level == 2 && s2.stage_j.at(1) == xy && s2.stage_j.at(2) == xy &&
            s2.steps_end - s2.steps_begin == 2 &&
            r.tower.total_transform(3, r.ideals[0]) == ideal({{2, 0}}) &&
            r.tower.total_transform(4, r.ideals[0]) == ideal({{1, 2}}) &&
            r.tower.total_transform(5, r.ideals[1]) == ideal({{2, 1}}) &&
            r.tower.total_transform(6, r.ideals[1]) == ideal({{0, 2}});
  }

  std::ostringstream detail;
  detail << "worked-pair report " << (golden ? "matches" : "differs from")
         << " the golden bytes; hand-derived tower facts "
         << (facts ? "hold" : "violated");
  line(6, golden && facts, detail.str());
}

// --- criterion 7: map resolution regressions -------------------------------

void criterion7() {
  int bad = 0;

  RationalMapSpec lin;
  lin.coordinates = {Monomial({1, 0}), Monomial({0, 1})};
  lin.generators = {elem({1, 0})};
  lin.generators[0].coord_perm = std::vector<int>{1, 0};
  ResolvedMap a = resolve_map(lin, 50);
  if (a.tower.steps().size() != 1) ++bad;
  if (!(a.leaves.size() == 2 &&
        a.leaves[0].reduced == std::vector<Monomial>{Monomial::unit(2),
                                                     Monomial({0, 1})} &&
        a.leaves[1].reduced ==
            std::vector<Monomial>{Monomial({1, 0}), Monomial::unit(2)}))
    ++bad;

  RationalMapSpec conic;
  conic.coordinates = {Monomial({2, 0}), Monomial({1, 1}), Monomial({0, 2})};
  conic.generators = {elem({1, 0})};
  conic.generators[0].coord_perm = std::vector<int>{2, 1, 0};
  ResolvedMap b = resolve_map(conic, 50);
  if (b.tower.steps().size() != 1) ++bad;

  RationalMapSpec graph;
  graph.coordinates = {Monomial::unit(1), Monomial({1})};
  ResolvedMap c = resolve_map(graph, 50);
  if (!c.tower.steps().empty()) ++bad;

  for (const ResolvedMap* r : {&a, &b, &c})
    if (!verify_resolution(*r).ok) ++bad;

  std::ostringstream detail;
  detail << "[x:y] in 1 blowup to [1:y]/[x:1], the conic map in 1, [1:x] in 0;"
         << " all re-verified, " << bad << " defects";
  line(7, bad == 0, detail.str());
}

// --- criterion 8: every report verifies, every re-run is byte-identical ---

void criterion8(const std::vector<std::vector<MonomialIdeal>>& suite) {
  std::vector<ProblemFile> problems;

  const std::filesystem::path fixed =
      std::filesystem::path(EQUIBLOW_TEST_DATA_DIR).parent_path().parent_path() /
      "problems";
  for (const char* name :
       {"worked_pair.json", "map_line.json", "map_conic.json",
        "triple_s3.json"})
    problems.push_back(parse_problem(slurp(fixed / name)));

  for (std::size_t trial = 0; trial < suite.size() && trial < 25; ++trial) {
    ProblemFile p;
    p.mode = "simplify";
    p.variables = {"x", "y", "z"};
    p.ideals = suite[trial];
    p.raw = render(emit_problem(p));
    problems.push_back(std::move(p));
  }

  int unverified = 0;
  int unstable = 0;
  for (const ProblemFile& p : problems) {
    const int steps = effective_max_steps({}, {}, p);
    const Json doc = run(p, steps);
    if (render(doc) != render(run(p, steps))) ++unstable;
    try {
      VerifyResult v = verify_report(p, doc);
      if (!v.ok) {
        ++unverified;
        for (const std::string& w : v.witnesses)
          archive("criterion8_witnesses.txt", w + "\n");
      }
    } catch (const Error& e) {
      ++unverified;
      archive("criterion8_witnesses.txt", std::string(e.what()) + "\n");
    }
  }

  std::ostringstream detail;
  detail << problems.size() << " suite reports: " << unverified
         << " failed verification, " << unstable << " unstable re-runs";
  line(8, unverified == 0 && unstable == 0, detail.str());
}

}  // namespace

int main() {
  out_dir = EQUIBLOW_TEST_OUT_DIR;
  std::filesystem::create_directories(out_dir);
  for (const char* stale :
       {"criterion1_mismatches.txt", "criterion2_guard_trips.txt",
        "criterion2_unprincipal.txt", "criterion2_defect_increase.txt",
        "criterion3_aborted.txt", "criterion3_exit_violations.txt",
        "criterion8_witnesses.txt"})
    std::filesystem::remove(out_dir / stale);

  criterion1();
  criterion2();
  const std::vector<std::vector<MonomialIdeal>> suite = random_collections();
  criteria3and4(suite);
  criterion5();
  criterion6();
  criterion7();
  criterion8(suite);

  if (failures == 0) {
    std::cout << "acceptance: all 8 criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << failures
            << " criterion(s) failed; artifacts in " << out_dir.string()
            << "\n";
  return 1;
}
