#include "equiblow/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <string>

#include "equiblow/errors.hpp"

namespace equiblow {

namespace {

bool is_permutation_of_range(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int image : perm) {
    if (image < 0 || image >= static_cast<int>(perm.size()) || seen[image]) return false;
    seen[image] = true;
  }
  return true;
}

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

std::vector<int> compose_perms(const std::vector<int>& g, const std::vector<int>& h) {
  // (g after h)(i) = g(h(i))
  std::vector<int> out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = g[h[i]];
  return out;
}

std::string describe_perm(const std::vector<int>& perm) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i) os << " ";
    os << perm[i] + 1;
  }
  os << "]";
  return os.str();
}

std::optional<std::vector<int>> compose_optional(const std::optional<std::vector<int>>& g,
                                                 const std::optional<std::vector<int>>& h) {
  if (g && h) return compose_perms(*g, *h);
  return std::nullopt;
}

}  // namespace

bool GroupElement::is_identity() const {
  for (std::size_t i = 0; i < var_perm.size(); ++i)
    if (var_perm[i] != static_cast<int>(i)) return false;
  if (ideal_perm)
    for (std::size_t i = 0; i < ideal_perm->size(); ++i)
      if ((*ideal_perm)[i] != static_cast<int>(i)) return false;
  if (coord_perm)
    for (std::size_t i = 0; i < coord_perm->size(); ++i)
      if ((*coord_perm)[i] != static_cast<int>(i)) return false;
  return true;
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  GroupElement out;
  out.var_perm = compose_perms(g.var_perm, h.var_perm);
  out.ideal_perm = compose_optional(g.ideal_perm, h.ideal_perm);
  out.coord_perm = compose_optional(g.coord_perm, h.coord_perm);
  return out;
}

GroupElement inverse(const GroupElement& g) {
  auto invert = [](const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    return inv;
  };
  GroupElement out;
  out.var_perm = invert(g.var_perm);
  if (g.ideal_perm) out.ideal_perm = invert(*g.ideal_perm);
  if (g.coord_perm) out.coord_perm = invert(*g.coord_perm);
  return out;
}

GroupAction GroupAction::closure(std::vector<GroupElement> generators, int arity) {
  if (arity < 1) throw PreconditionError("group action needs at least one variable");

  bool want_ideal = false, want_coord = false;
  std::size_t ideal_size = 0, coord_size = 0;
  for (std::size_t gi = 0; gi < generators.size(); ++gi) {
    const GroupElement& gen = generators[gi];
    if (static_cast<int>(gen.var_perm.size()) != arity)
      throw ArityError("group generator permutes " + std::to_string(gen.var_perm.size()) +
                       " variables, expected " + std::to_string(arity));
    if (!is_permutation_of_range(gen.var_perm))
      throw PreconditionError("group generator " + describe_perm(gen.var_perm) +
                              " is not a permutation");
    if (gen.ideal_perm && !is_permutation_of_range(*gen.ideal_perm))
      throw PreconditionError("ideal permutation " + describe_perm(*gen.ideal_perm) +
                              " is not a permutation");
    if (gen.coord_perm && !is_permutation_of_range(*gen.coord_perm))
      throw PreconditionError("coordinate permutation " + describe_perm(*gen.coord_perm) +
                              " is not a permutation");
    if (gi == 0) {
      want_ideal = gen.ideal_perm.has_value();
      want_coord = gen.coord_perm.has_value();
      if (gen.ideal_perm) ideal_size = gen.ideal_perm->size();
      if (gen.coord_perm) coord_size = gen.coord_perm->size();
    } else {
      if (gen.ideal_perm.has_value() != want_ideal)
        throw PreconditionError("either every group generator carries an ideal permutation "
                                "or none does");
      if (gen.coord_perm.has_value() != want_coord)
        throw PreconditionError("either every group generator carries a coordinate "
                                "permutation or none does");
      if (gen.ideal_perm && gen.ideal_perm->size() != ideal_size)
        throw PreconditionError("ideal permutations of the group generators differ in length");
      if (gen.coord_perm && gen.coord_perm->size() != coord_size)
        throw PreconditionError("coordinate permutations of the group generators differ "
                                "in length");
    }
  }

  GroupElement id;
  id.var_perm = identity_perm(arity);
  if (want_ideal) id.ideal_perm = identity_perm(static_cast<int>(ideal_size));
  if (want_coord) id.coord_perm = identity_perm(static_cast<int>(coord_size));

  // Breadth-first closure under right multiplication by the generators.
  // The group is finite, so this reaches inverses as well. Elements are
  // keyed by their variable permutation; a repeat with different induced
  // data means the input does not describe an action at all.
  std::map<std::vector<int>, GroupElement> seen;
  std::deque<GroupElement> queue;
  seen.emplace(id.var_perm, id);
  queue.push_back(id);
  while (!queue.empty()) {
    GroupElement current = queue.front();
    queue.pop_front();
    for (const GroupElement& gen : generators) {
      GroupElement next = compose(gen, current);
      auto it = seen.find(next.var_perm);
      if (it == seen.end()) {
        seen.emplace(next.var_perm, next);
        queue.push_back(next);
      } else {
        if (it->second.ideal_perm != next.ideal_perm)
          throw InconsistentActionError(
              "variable permutation " + describe_perm(next.var_perm) +
              " is induced with two different ideal permutations");
        if (it->second.coord_perm != next.coord_perm)
          throw InconsistentActionError(
              "variable permutation " + describe_perm(next.var_perm) +
              " is induced with two different coordinate permutations");
      }
    }
  }

  GroupAction action;
  action.arity_ = arity;
  action.elements_.reserve(seen.size());
  for (auto& [key, element] : seen) action.elements_.push_back(std::move(element));
  return action;
}

GroupAction GroupAction::trivial(int arity) { return closure({}, arity); }

Monomial act(const GroupElement& g, const Monomial& m) {
  if (static_cast<int>(g.var_perm.size()) != m.arity())
    throw ArityError("permutation of " + std::to_string(g.var_perm.size()) +
                     " variables applied to a monomial in " + std::to_string(m.arity()));
  std::vector<Exponent> image(m.arity(), 0);
  for (int i = 0; i < m.arity(); ++i) image[g.var_perm[i]] = m[i];
  return Monomial(std::move(image));
}

MonomialIdeal act_on_ideal(const GroupElement& g, const MonomialIdeal& ideal) {
  std::vector<Monomial> gens;
  gens.reserve(ideal.generators().size());
  for (const Monomial& m : ideal.generators()) gens.push_back(act(g, m));
  return MonomialIdeal(std::move(gens));
}

std::vector<int> act_on_index_set(const GroupElement& g, const std::vector<int>& vars) {
  std::vector<int> image;
  image.reserve(vars.size());
  for (int v : vars) image.push_back(g.var_perm[v]);
  std::sort(image.begin(), image.end());
  return image;
}

std::vector<std::vector<int>> check_collection_invariant(
    const GroupAction& group, const std::vector<MonomialIdeal>& collection) {
  const int n = static_cast<int>(collection.size());
  std::vector<std::vector<int>> sigmas;
  sigmas.reserve(group.elements().size());

  for (const GroupElement& g : group.elements()) {
    // Match each image back into the collection. Equal ideals are matched in
    // order of appearance, which fixes the permutation uniquely even when
    // the collection has repeats.
    std::vector<int> sigma(n, -1);
    std::vector<bool> used(n, false);
    for (int k = 0; k < n; ++k) {
      MonomialIdeal image = act_on_ideal(g, collection[k]);
      int target = -1;
      for (int j = 0; j < n; ++j) {
        if (!used[j] && collection[j] == image) {
          target = j;
          break;
        }
      }
      if (target < 0)
        throw NotInvariantError("variable permutation " + describe_perm(g.var_perm) +
                                " carries ideal " + std::to_string(k + 1) +
                                " outside the collection");
      sigma[k] = target;
      used[target] = true;
    }

    if (g.ideal_perm) {
      if (static_cast<int>(g.ideal_perm->size()) != n)
        throw NotInvariantError("ideal permutation " + describe_perm(*g.ideal_perm) +
                                " does not match the collection size " + std::to_string(n));
      for (int k = 0; k < n; ++k) {
        // The declared permutation may differ from the computed one on
        // repeated ideals; it only has to be correct as a map of values.
        if (!(collection[(*g.ideal_perm)[k]] == collection[sigma[k]]))
          throw NotInvariantError("declared ideal permutation " +
                                  describe_perm(*g.ideal_perm) +
                                  " disagrees with the action of " +
                                  describe_perm(g.var_perm) + " on ideal " +
                                  std::to_string(k + 1));
      }
    }
    sigmas.push_back(std::move(sigma));
  }

  // The assignments must compose the way the group does.
  std::map<std::vector<int>, std::size_t> index_of;
  for (std::size_t i = 0; i < group.elements().size(); ++i)
    index_of[group.elements()[i].var_perm] = i;
  for (std::size_t a = 0; a < group.elements().size(); ++a) {
    for (std::size_t b = 0; b < group.elements().size(); ++b) {
      GroupElement product = compose(group.elements()[a], group.elements()[b]);
      std::size_t p = index_of.at(product.var_perm);
      for (int k = 0; k < n; ++k) {
        if (sigmas[p][k] != sigmas[a][sigmas[b][k]])
          throw NotInvariantError("ideal matching fails to compose along " +
                                  describe_perm(group.elements()[a].var_perm) + " * " +
                                  describe_perm(group.elements()[b].var_perm));
      }
    }
  }

  return sigmas;
}

std::map<int, int> transport_tower(const GroupElement& g, const BlowupTower& tower) {
  if (static_cast<int>(g.var_perm.size()) != tower.arity())
    throw ArityError("permutation of " + std::to_string(g.var_perm.size()) +
                     " variables applied to a tower over " + std::to_string(tower.arity()));

  std::map<int, int> phi;
  for (const Chart& chart : tower.charts()) {
    if (!chart.parent) {
      phi[chart.id] = chart.id;  // the root is always fixed
      continue;
    }
    // Charts are created after their parents, so the parent image is known.
    int parent_image = phi.at(*chart.parent);
    std::vector<int> center_image = act_on_index_set(g, chart.center);
    int branch_image = g.var_perm[*chart.branch];

    const Chart& counterpart_parent = tower.chart(parent_image);
    int found = -1;
    for (int child_id : counterpart_parent.children) {
      const Chart& child = tower.chart(child_id);
      if (child.center == center_image && *child.branch == branch_image) {
        found = child_id;
        break;
      }
    }
    if (found < 0) {
      // Name the step whose center orbit is not closed under g.
      std::string step_note;
      for (std::size_t s = 0; s < tower.steps().size(); ++s)
        for (const Center& c : tower.steps()[s].centers)
          if (c.chart_id == *chart.parent && c.vars == chart.center)
            step_note = " (step " + std::to_string(s) + " has no partner)";
      throw EquivarianceBrokenError(
          "chart " + std::to_string(chart.id) + " has no counterpart: chart " +
          std::to_string(parent_image) + " was never blown up along " +
          describe_perm(center_image) + step_note + "; tower is not symmetric under " +
          describe_perm(g.var_perm));
    }
    phi[chart.id] = found;
  }

  // The bijection is only correct if the coordinate changes commute with
  // the permutation, chart by chart.
  for (const Chart& chart : tower.charts()) {
    const Chart& image = tower.chart(phi.at(chart.id));
    for (int r = 0; r < tower.arity(); ++r) {
      if (!(act(g, chart.from_root[r]) == image.from_root[g.var_perm[r]]))
        throw EquivarianceBrokenError(
            "substitutions on chart " + std::to_string(chart.id) +
            " do not commute with " + describe_perm(g.var_perm));
    }
  }

  return phi;
}

}  // namespace equiblow
