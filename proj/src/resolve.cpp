#include "equiblow/resolve.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>

#include "equiblow/errors.hpp"

namespace equiblow {

namespace {

std::string one_based(const std::vector<int>& perm) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i) out << ' ';
    out << perm[i] + 1;
  }
  out << ']';
  return out.str();
}

void validate_spec(const RationalMapSpec& map) {
  if (map.coordinates.empty())
    throw PreconditionError("a rational map needs at least one coordinate");
  const int arity = map.coordinates.front().arity();
  for (const Monomial& f : map.coordinates)
    if (f.arity() != arity)
      throw ArityError("map coordinates mix different variable counts");
  const int m = static_cast<int>(map.coordinates.size());
  for (const GroupElement& g : map.generators) {
    if (!g.coord_perm)
      throw PreconditionError(
          "map symmetry generators must say how they permute the coordinates");
    if (static_cast<int>(g.coord_perm->size()) != m)
      throw PreconditionError("coordinate permutation " +
                              one_based(*g.coord_perm) +
                              " does not match the coordinate count");
  }
}

}  // namespace

MonomialIdeal base_ideal(const RationalMapSpec& map) {
  validate_spec(map);
  return MonomialIdeal(map.coordinates);
}

GroupAction map_symmetry_closure(const RationalMapSpec& map) {
  validate_spec(map);
  const int arity = map.coordinates.front().arity();
  std::vector<GroupElement> generators = map.generators;
  if (generators.empty()) {
    GroupElement id;
    id.var_perm.resize(static_cast<std::size_t>(arity));
    for (int i = 0; i < arity; ++i) id.var_perm[static_cast<std::size_t>(i)] = i;
    std::vector<int> fix(map.coordinates.size());
    for (std::size_t k = 0; k < fix.size(); ++k) fix[k] = static_cast<int>(k);
    id.coord_perm = std::move(fix);
    generators.push_back(std::move(id));
  }
  return GroupAction::closure(std::move(generators), arity);
}

ResolvedMap resolve_map(const RationalMapSpec& map, int max_steps) {
  const GroupAction group = map_symmetry_closure(map);  // validates the map spec

  // The claimed coordinate permutations must be the truth, on every element
  // of the closure, before they are used for anything.
  for (const GroupElement& g : group.elements()) {
    if (!g.coord_perm)
      throw PreconditionError(
          "group closure lost a coordinate permutation");  // unreachable
    for (int k = 0; k < static_cast<int>(map.coordinates.size()); ++k) {
      const Monomial image = act(g, map.coordinates[k]);
      const Monomial& expected = map.coordinates[(*g.coord_perm)[k]];
      if (image != expected)
        throw NotInvariantError(
            "variable permutation " + one_based(g.var_perm) +
            " does not carry coordinate " + std::to_string(k + 1) +
            " to coordinate " + std::to_string((*g.coord_perm)[k] + 1));
    }
  }

  MonomialIdeal base = MonomialIdeal(map.coordinates);
  PrincipalizedIdeal pr =
      principalize(base, group, max_steps, map.variable_names, "m-");

  std::vector<ResolvedLeaf> leaves;
  for (int chart : pr.tower.leaves()) {
    std::vector<Monomial> pulled;
    for (const Monomial& f : map.coordinates)
      pulled.push_back(pr.tower.pull_monomial(chart, f));
    Monomial factor = pulled.front();
    for (const Monomial& p : pulled) factor = gcd(factor, p);
    std::vector<Monomial> reduced;
    for (const Monomial& p : pulled) reduced.push_back(quotient(p, factor));
    const bool regular = std::any_of(reduced.begin(), reduced.end(),
                                     [](const Monomial& r) { return r.is_unit(); });

    // Regularity must coincide with local principality of the pulled-back
    // base ideal — that equivalence is the whole point of the construction —
    // and the principalization just made the latter true everywhere.
    const bool principal =
        is_locally_principal(pr.tower.total_transform(chart, base));
    if (regular != principal || !regular)
      throw PreconditionError("chart " + std::to_string(chart) +
                              ": reduced map is not regular although the "
                              "pulled-back base ideal is locally principal");
    leaves.push_back(ResolvedLeaf{chart, std::move(pulled), std::move(factor),
                                  std::move(reduced), regular});
  }

  return ResolvedMap{map,
                     std::move(base),
                     group,
                     std::move(pr.tower),
                     std::move(pr.result),
                     std::move(leaves)};
}

ResolutionCheck verify_resolution(const ResolvedMap& resolved) {
  ResolutionCheck check;
  auto flag = [&check](const std::string& witness) {
    check.ok = false;
    check.witnesses.push_back(witness);
  };

  try {
    validate_spec(resolved.map);
  } catch (const Error& e) {
    flag(std::string("map spec: ") + e.what());
    return check;
  }

  if (resolved.base != MonomialIdeal(resolved.map.coordinates))
    flag("base ideal is not spanned by the map coordinates");

  const std::vector<int> tower_leaves = resolved.tower.leaves();
  std::vector<int> listed;
  for (const ResolvedLeaf& leaf : resolved.leaves) listed.push_back(leaf.chart);
  if (listed != tower_leaves) {
    flag("leaf list does not match the tower's leaves");
    return check;  // per-leaf checks below would misfire
  }

  for (const ResolvedLeaf& leaf : resolved.leaves) {
    const std::string where = "chart " + std::to_string(leaf.chart);
    if (leaf.pulled.size() != resolved.map.coordinates.size() ||
        leaf.reduced.size() != resolved.map.coordinates.size()) {
      flag(where + ": coordinate count mismatch");
      continue;
    }
    Monomial factor = Monomial::unit(resolved.tower.arity());
    for (std::size_t k = 0; k < leaf.pulled.size(); ++k) {
      const Monomial expected =
          resolved.tower.pull_monomial(leaf.chart, resolved.map.coordinates[k]);
      if (leaf.pulled[k] != expected)
        flag(where + ": pulled coordinate " + std::to_string(k + 1) +
             " is not the pullback");
      factor = k == 0 ? leaf.pulled[k] : gcd(factor, leaf.pulled[k]);
    }
    if (leaf.factor != factor)
      flag(where + ": factor is not the gcd of the pulled coordinates");
    for (std::size_t k = 0; k < leaf.reduced.size(); ++k)
      if (mul(leaf.factor, leaf.reduced[k]) != leaf.pulled[k])
        flag(where + ": reduced coordinate " + std::to_string(k + 1) +
             " times the factor is not the pullback");
    Monomial residue = leaf.reduced.front();
    for (const Monomial& r : leaf.reduced) residue = gcd(residue, r);
    if (!residue.is_unit())
      flag(where + ": reduced coordinates still share a factor");
    const bool some_unit =
        std::any_of(leaf.reduced.begin(), leaf.reduced.end(),
                    [](const Monomial& r) { return r.is_unit(); });
    if (leaf.regular != some_unit)
      flag(where + ": regular flag contradicts the reduced coordinates");
    const bool principal = is_locally_principal(
        resolved.tower.total_transform(leaf.chart, resolved.base));
    if (leaf.regular != principal)
      flag(where + ": regularity disagrees with local principality of the "
                   "pulled-back base ideal");
  }

  // Symmetry: each group element must permute the leaves, and on matched
  // leaves the reduced coordinates must be each other's images.
  for (const GroupElement& g : resolved.group.elements()) {
    const std::string who = "element " + one_based(g.var_perm);
    if (!g.coord_perm) {
      flag(who + ": no coordinate permutation");
      continue;
    }
    std::map<int, int> phi;
    try {
      phi = transport_tower(g, resolved.tower);
    } catch (const Error& e) {
      flag(who + ": " + e.what());
      continue;
    }
    for (std::size_t li = 0; li < resolved.leaves.size(); ++li) {
      const ResolvedLeaf& leaf = resolved.leaves[li];
      const int image_chart = phi.at(leaf.chart);
      const auto image_it =
          std::find_if(resolved.leaves.begin(), resolved.leaves.end(),
                       [image_chart](const ResolvedLeaf& l) {
                         return l.chart == image_chart;
                       });
      if (image_it == resolved.leaves.end()) {
        flag(who + ": chart " + std::to_string(leaf.chart) +
             " is carried outside the leaf list");
        continue;
      }
      if (act(g, leaf.factor) != image_it->factor)
        flag(who + ": factor on chart " + std::to_string(leaf.chart) +
             " is not carried to chart " + std::to_string(image_chart));
      for (std::size_t k = 0; k < leaf.reduced.size(); ++k) {
        const std::size_t ik = static_cast<std::size_t>((*g.coord_perm)[k]);
        if (act(g, leaf.reduced[k]) != image_it->reduced[ik])
          flag(who + ": reduced coordinate " + std::to_string(k + 1) +
               " on chart " + std::to_string(leaf.chart) +
               " is not carried to coordinate " + std::to_string(ik + 1) +
               " on chart " + std::to_string(image_chart));
      }
    }
  }

  return check;
}

}  // namespace equiblow
