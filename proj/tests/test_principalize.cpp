#include <map>
#include <vector>

#include "doctest.h"
#include "equiblow/principalize.hpp"
#include "helpers.hpp"

using namespace equiblow;
using testutil::ideal;
using testutil::mono;

namespace {

GroupElement elem(std::vector<int> vars) {
  GroupElement g;
  g.var_perm = std::move(vars);
  return g;
}

bool all_principal(const std::map<int, MonomialIdeal>& values) {
  for (const auto& [chart, v] : values)
    if (!is_locally_principal(v)) return false;
  return true;
}

}  // namespace

TEST_CASE("pair invariants of (x, yz)") {
  PairInvariantTable t = pair_invariants(ideal({{1, 0, 0}, {0, 1, 1}}));
  CHECK(t.factored == Monomial::unit(3));
  CHECK(t.residual == ideal({{1, 0, 0}, {0, 1, 1}}));
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].i == 0);
  CHECK(t.rows[0].j == 1);
  CHECK(t.rows[0].nu == 1);
  CHECK(t.rows[1].i == 0);
  CHECK(t.rows[1].j == 2);
  CHECK(t.rows[1].nu == 1);
  CHECK(t.rows[2].i == 1);
  CHECK(t.rows[2].j == 2);
  CHECK(t.rows[2].nu == 0);
  CHECK(t.defect == 1);
}

TEST_CASE("pair invariants factor the gcd out first") {
  // (x^2 y^3, x^4 y) = x^2 y * (y^2, x^2); the residual carries the defect.
  PairInvariantTable t = pair_invariants(ideal({{2, 3}, {4, 1}}));
  CHECK(t.factored == mono({2, 1}));
  CHECK(t.residual == ideal({{2, 0}, {0, 2}}));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].nu == 2);
  CHECK(t.defect == 2);

  // A principal ideal has unit residual and zero defect.
  PairInvariantTable p = pair_invariants(ideal({{2, 1}, {3, 1}}));
  CHECK(p.residual.is_unit());
  CHECK(p.defect == 0);

  // One variable: no pairs to measure.
  CHECK(pair_invariants(ideal({{3}})).rows.empty());
}

TEST_CASE("zero defect does not mean principal") {
  // Every pair of (x, y, z) has nu = 0, yet the ideal is far from principal.
  PairInvariantTable t =
      pair_invariants(ideal({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK(t.defect == 0);
  CHECK(!is_locally_principal(t.residual));
}

TEST_CASE("fallback center is the smallest set meeting every generator") {
  CHECK(fallback_center(ideal({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) ==
        std::vector<int>{0, 1, 2});
  // (xy, z): {x, z} already meets both generators and beats {y, z} lexically.
  CHECK(fallback_center(ideal({{1, 1, 0}, {0, 0, 1}})) ==
        std::vector<int>{0, 2});
  CHECK_THROWS_AS(fallback_center(MonomialIdeal::unit(2)), PreconditionError);
}

TEST_CASE("select_step refuses a finished family") {
  BlowupTower t = BlowupTower::new_root(2, {});
  std::map<int, MonomialIdeal> values;
  values.emplace(0, ideal({{2, 1}}));
  CHECK_THROWS_AS(
      select_step(t, values, GroupAction::trivial(2), 1, "b"),
      NothingToDoError);
}

TEST_CASE("select_step picks the worst pair") {
  BlowupTower t = BlowupTower::new_root(2, {});
  std::map<int, MonomialIdeal> values;
  values.emplace(0, ideal({{1, 0}, {0, 1}}));
  SelectionRound round = select_step(t, values, GroupAction::trivial(2), 1, "b");
  CHECK(round.index == 1);
  CHECK(round.defect == 1);
  CHECK(round.bad_leaves == 1);
  CHECK(!round.fallback);
  CHECK(!round.separated);
  CHECK(round.orbit_tag == "b1");
  REQUIRE(round.centers.size() == 1);
  CHECK(round.centers[0] == Center{0, {0, 1}});
}

TEST_CASE("select_step falls back on pair-blind ideals") {
  BlowupTower t = BlowupTower::new_root(3, {});
  std::map<int, MonomialIdeal> values;
  values.emplace(0, ideal({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  SelectionRound round = select_step(t, values, GroupAction::trivial(3), 1, "b");
  CHECK(round.defect == 0);
  CHECK(round.fallback);
  REQUIRE(round.centers.size() == 1);
  CHECK(round.centers[0] == Center{0, {0, 1, 2}});
}

TEST_CASE("principalize (x, y): one blowup, two clean charts") {
  PrincipalizedIdeal out =
      principalize(ideal({{1, 0}, {0, 1}}), GroupAction::trivial(2), 50);
  CHECK(out.result.steps_used == 1);
  REQUIRE(out.result.rounds.size() == 1);
  CHECK(out.result.rounds[0].orbit_tag == "b1");
  CHECK(out.tower.leaves() == std::vector<int>{1, 2});
  CHECK(out.result.leaf_values.at(1) == ideal({{1, 0}}));
  CHECK(out.result.leaf_values.at(2) == ideal({{0, 1}}));
}

TEST_CASE("principalize (x^2, xy, y^2): a single blowup flattens the cone") {
  PrincipalizedIdeal out = principalize(ideal({{2, 0}, {1, 1}, {0, 2}}),
                                        GroupAction::trivial(2), 50);
  CHECK(out.result.steps_used == 1);
  CHECK(out.result.leaf_values.at(1) == ideal({{2, 0}}));
  CHECK(out.result.leaf_values.at(2) == ideal({{0, 2}}));
}

TEST_CASE("principalize (x, yz) under the y<->z swap: separation fires first") {
  GroupAction g = GroupAction::closure({elem({0, 2, 1})}, 3);
  PrincipalizedIdeal out = principalize(ideal({{1, 0, 0}, {0, 1, 1}}), g, 50);

  CHECK(out.result.steps_used == 5);
  CHECK(out.tower.leaves().size() == 7);
  CHECK(all_principal(out.result.leaf_values));

  REQUIRE(out.result.rounds.size() == 3);
  const SelectionRound& first = out.result.rounds[0];
  CHECK(first.separated);
  CHECK(!first.fallback);
  CHECK(first.defect == 1);
  // The two candidate pairs {x,y} and {x,z} overlap on the root chart, so
  // the batch is their union: one codimension-3 center.
  REQUIRE(first.centers.size() == 1);
  CHECK(first.centers[0] == Center{0, {0, 1, 2}});
  CHECK(out.result.rounds[1].centers.size() == 2);
  CHECK(out.result.rounds[2].centers.size() == 2);

  // Orbit steps are scheduled consecutively, ascending by chart.
  REQUIRE(out.tower.steps().size() == 5);
  CHECK(out.tower.steps()[1].orbit_tag == "b2");
  CHECK(out.tower.steps()[2].orbit_tag == "b2");
  CHECK(out.tower.steps()[1].centers[0].chart_id <
        out.tower.steps()[2].centers[0].chart_id);

  // The result is symmetric: the swap transports the finished tower.
  for (const GroupElement& e : g.elements()) {
    std::map<int, int> phi = transport_tower(e, out.tower);
    for (const auto& [leaf, value] : out.result.leaf_values)
      CHECK(act_on_ideal(e, value) == out.result.leaf_values.at(phi.at(leaf)));
  }
}

TEST_CASE("principalize the S3-symmetric edge ideal (xy, yz, zx)") {
  GroupAction s3 = GroupAction::closure({elem({1, 0, 2}), elem({1, 2, 0})}, 3);
  PrincipalizedIdeal out =
      principalize(ideal({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}), s3, 50);
  CHECK(out.result.steps_used == 4);
  CHECK(out.tower.leaves().size() == 6);
  CHECK(all_principal(out.result.leaf_values));
  REQUIRE(out.result.rounds.size() == 2);
  CHECK(out.result.rounds[0].separated);
  CHECK(out.result.rounds[0].centers[0] == Center{0, {0, 1, 2}});
  // Second round: one codimension-2 center per depth-1 chart, one orbit.
  REQUIRE(out.result.rounds[1].centers.size() == 3);
  CHECK(out.result.rounds[1].centers[0] == Center{1, {1, 2}});
  CHECK(out.result.rounds[1].centers[1] == Center{2, {0, 2}});
  CHECK(out.result.rounds[1].centers[2] == Center{3, {0, 1}});
  for (const GroupElement& e : s3.elements())
    CHECK_NOTHROW(transport_tower(e, out.tower));
}

TEST_CASE("defect does not increase along the recorded rounds") {
  for (const MonomialIdeal& start :
       {ideal({{1, 0, 0}, {0, 1, 1}}), ideal({{2, 3, 0}, {4, 1, 0}, {0, 0, 2}}),
        ideal({{3, 0}, {0, 3}}), ideal({{1, 1, 1}, {2, 0, 0}, {0, 2, 0}})}) {
    PrincipalizedIdeal out =
        principalize(start, GroupAction::trivial(start.arity()), 50);
    for (std::size_t r = 1; r < out.result.rounds.size(); ++r)
      CHECK(out.result.rounds[r].defect <= out.result.rounds[r - 1].defect);
  }
}

TEST_CASE("the budget is checked before a batch runs") {
  GroupAction g = GroupAction::closure({elem({0, 2, 1})}, 3);
  MonomialIdeal start = ideal({{1, 0, 0}, {0, 1, 1}});

  CHECK_THROWS_AS(principalize(start, g, 0), TerminationGuardError);

  // Budget 1 admits the separation step but not the two-center orbit after
  // it; the tower must be left orbit-closed at the one-step state.
  BlowupTower tower = BlowupTower::new_root(3, {});
  std::map<int, MonomialIdeal> values;
  values.emplace(0, start);
  try {
    principalize_family(tower, values, g, 1);
    FAIL("expected TerminationGuardError");
  } catch (const TerminationGuardError& e) {
    CHECK(!std::string(e.what()).empty());
    CHECK(!e.trace().empty());
  }
  CHECK(tower.steps().size() == 1);
  for (const GroupElement& el : g.elements())
    CHECK_NOTHROW(transport_tower(el, tower));
}

TEST_CASE("principalize_family rejects mismatched leaf values") {
  BlowupTower tower = BlowupTower::new_root(2, {});
  std::map<int, MonomialIdeal> missing;  // no entry for leaf 0
  CHECK_THROWS_AS(
      principalize_family(tower, missing, GroupAction::trivial(2), 10),
      PreconditionError);

  std::map<int, MonomialIdeal> stray;
  stray.emplace(0, ideal({{1, 0}}));
  stray.emplace(7, ideal({{1, 0}}));
  CHECK_THROWS_AS(
      principalize_family(tower, stray, GroupAction::trivial(2), 10),
      PreconditionError);
}

TEST_CASE("an already-principal ideal needs no steps") {
  PrincipalizedIdeal out =
      principalize(ideal({{2, 1}, {3, 1}}), GroupAction::trivial(2), 0);
  CHECK(out.result.steps_used == 0);
  CHECK(out.result.rounds.empty());
  CHECK(out.tower.leaves() == std::vector<int>{0});
}
