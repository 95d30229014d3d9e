#include "equiblow/simplify.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

#include "equiblow/errors.hpp"

namespace equiblow {

namespace {

// All ascending k-subsets of {0, ..., n-1}, lexicographically. Sizes here
// are tiny (collections of a handful of ideals), so the classic odometer is
// plenty.
std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return out;
}

std::string describe_subfamily(const std::vector<int>& lambda) {
  std::ostringstream out;
  out << '{';
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (k) out << ',';
    out << lambda[k] + 1;  // messages are one-based, like every other index we print
  }
  out << '}';
  return out.str();
}

}  // namespace

DepthCheck check_depth_condition(const LeafCollection& values, int i) {
  if (i < 1) throw PreconditionError("depth condition level must be at least 1");
  DepthCheck out;
  for (const auto& [leaf, ideals] : values) {
    const int n = static_cast<int>(ideals.size());
    for (const auto& lambda : subsets_of_size(n, i)) {
      // The sum of monomial ideals is the unit ideal exactly when one of the
      // summands is: a unit generator of the sum must come from somewhere.
      bool unit = false;
      for (int j : lambda) {
        if (ideals[j].is_unit()) {
          unit = true;
          break;
        }
      }
      if (!unit) {
        out.holds = false;
        out.witnesses.push_back(DepthWitness{leaf, lambda});
      }
    }
  }
  return out;
}

std::map<int, MonomialIdeal> stage_ideal(const LeafCollection& values, int i) {
  if (i < 2) throw PreconditionError("stage level must be at least 2");
  std::map<int, MonomialIdeal> out;
  for (const auto& [leaf, ideals] : values) {
    if (ideals.empty())
      throw PreconditionError("stage ideal of an empty collection");
    const int n = static_cast<int>(ideals.size());
    const int arity = ideals.front().arity();
    MonomialIdeal acc = MonomialIdeal::unit(arity);
    for (const auto& omega : subsets_of_size(n, i - 1)) {
      std::vector<Monomial> gens;
      for (int j : omega)
        for (const Monomial& g : ideals[j].generators()) gens.push_back(g);
      acc = intersect(acc, MonomialIdeal(std::move(gens)));
    }
    out.emplace(leaf, std::move(acc));
  }
  return out;
}

LeafCollection weak_transforms(const BlowupTower& tower,
                               const LeafCollection& values,
                               const std::map<int, MonomialIdeal>& stage_j) {
  if (values.empty())
    throw PreconditionError("weak transforms need at least one carrier chart");
  std::vector<int> carriers;
  for (const auto& [leaf, ideals] : values) {
    carriers.push_back(leaf);
    if (stage_j.find(leaf) == stage_j.end())
      throw PreconditionError("stage ideal missing on carrier chart " +
                              std::to_string(leaf));
    (void)ideals;
  }
  if (stage_j.size() != values.size())
    throw PreconditionError("stage ideal charts do not match the carriers");

  LeafCollection out;
  for (int leaf : tower.leaves()) {
    const int carrier = tower.nearest_carrier(leaf, carriers);
    MonomialIdeal pulled_j = tower.transport_ideal(carrier, leaf, stage_j.at(carrier));
    if (!is_locally_principal(pulled_j))
      throw PreconditionError("stage ideal is not locally principal on chart " +
                              std::to_string(leaf) +
                              "; blow up further before taking transforms");
    std::vector<MonomialIdeal> transformed;
    for (const MonomialIdeal& ideal : values.at(carrier))
      transformed.push_back(
          colon(tower.transport_ideal(carrier, leaf, ideal), pulled_j));
    out.emplace(leaf, std::move(transformed));
  }
  return out;
}

StalkCheck verify_stalk_formula(const BlowupTower& tower,
                                const std::vector<MonomialIdeal>& originals,
                                const LeafCollection& transforms) {
  StalkCheck out;
  for (const auto& [leaf, ideals] : transforms) {
    if (ideals.size() != originals.size())
      throw PreconditionError(
          "transform collection does not match the original collection size");
    for (int j = 0; j < static_cast<int>(ideals.size()); ++j) {
      const bool transform_principal = is_locally_principal(ideals[j]);
      const bool pullback_principal =
          is_locally_principal(tower.total_transform(leaf, originals[j]));
      if (transform_principal != pullback_principal) {
        out.holds = false;
        out.witnesses.push_back(
            StalkWitness{leaf, j, transform_principal, pullback_principal});
      }
    }
  }
  return out;
}

SimplifyResult simplify_collection(const std::vector<MonomialIdeal>& collection,
                                   const std::vector<GroupElement>& generators,
                                   int max_steps,
                                   std::vector<std::string> variable_names) {
  if (collection.empty())
    throw PreconditionError("cannot simplify an empty collection");
  const int arity = collection.front().arity();
  for (const MonomialIdeal& ideal : collection)
    if (ideal.arity() != arity)
      throw ArityError("collection mixes ideals of different arities");

  // Claimed ideal permutations refer to the collection as the caller wrote
  // it, so they are checked before anything is reordered...
  check_collection_invariant(GroupAction::closure(generators, arity), collection);

  // ... and then dropped: from here on only the variable action matters, and
  // the induced permutations are recomputed against the canonical order.
  std::vector<GroupElement> stripped = generators;
  for (GroupElement& g : stripped) {
    g.ideal_perm.reset();
    g.coord_perm.reset();
  }
  const GroupAction action = GroupAction::closure(stripped, arity);

  std::vector<MonomialIdeal> ideals = collection;
  std::sort(ideals.begin(), ideals.end(), ideal_before);
  std::vector<std::vector<int>> sigmas = check_collection_invariant(action, ideals);

  const int n = static_cast<int>(ideals.size());
  BlowupTower tower = BlowupTower::new_root(arity, std::move(variable_names));

  LeafCollection values;
  values.emplace(0, ideals);
  std::vector<StageRecord> stages;
  bool shortcut = false;  // an inductive stage was skipped

  for (int i = n + 1; i >= 2; --i) {
    if (i > 2) {
      // Once every current value is locally principal the remaining inductive
      // stages have nothing left to separate; only the final stage still runs.
      bool all_principal = true;
      for (const auto& [leaf, vals] : values) {
        for (const MonomialIdeal& v : vals)
          if (!is_locally_principal(v)) {
            all_principal = false;
            break;
          }
        if (!all_principal) break;
      }
      if (all_principal) {
        StageRecord rec;
        rec.level = i;
        rec.skipped = true;
        stages.push_back(std::move(rec));
        shortcut = true;
        continue;
      }
    }

    StageRecord rec;
    rec.level = i;

    const DepthCheck entry = check_depth_condition(values, i);
    rec.entry.level = i;
    rec.entry.holds = entry.holds;
    // On the shortcut path the final stage's entry condition is not owed to
    // us by the skipped stages; it is recorded as found, nothing more.
    rec.entry.enforced = !shortcut;
    rec.entry.witnesses = entry.witnesses;
    if (!entry.holds && rec.entry.enforced) {
      const DepthWitness& w = entry.witnesses.front();
      throw PreconditionError("stage " + std::to_string(i) +
                              " entry condition failed on chart " +
                              std::to_string(w.leaf) + ", subfamily " +
                              describe_subfamily(w.lambda));
    }

    for (const auto& [leaf, vals] : values) {
      rec.carriers.push_back(leaf);
      (void)vals;
    }
    rec.stage_j = stage_ideal(values, i);
    rec.steps_begin = static_cast<int>(tower.steps().size());
    PrincipalizeResult pr = principalize_family(
        tower, rec.stage_j, action, max_steps, "s" + std::to_string(i) + "-");
    rec.rounds = std::move(pr.rounds);
    rec.steps_end = static_cast<int>(tower.steps().size());

    rec.transforms = weak_transforms(tower, values, rec.stage_j);

    const DepthCheck exit = check_depth_condition(rec.transforms, i - 1);
    rec.exit.level = i - 1;
    rec.exit.holds = exit.holds;
    rec.exit.enforced = true;
    rec.exit.witnesses = exit.witnesses;
    if (!exit.holds) {
      // The conductors make this condition automatic; reaching here means the
      // engine itself is wrong, so refuse to hand the tower back.
      const DepthWitness& w = exit.witnesses.front();
      throw PreconditionError("stage " + std::to_string(i) +
                              " exit condition failed on chart " +
                              std::to_string(w.leaf) + ", subfamily " +
                              describe_subfamily(w.lambda));
    }

    rec.stalk = verify_stalk_formula(tower, ideals, rec.transforms);
    if (!rec.stalk.holds) {
      const StalkWitness& w = rec.stalk.witnesses.front();
      throw PreconditionError(
          "stalk comparison failed on chart " + std::to_string(w.leaf) +
          " for ideal " + std::to_string(w.ideal + 1));
    }

    values = rec.transforms;
    stages.push_back(std::move(rec));
  }

  // Headline postcondition, checked directly: every original ideal pulls
  // back to a locally principal ideal on every leaf.
  for (int leaf : tower.leaves())
    for (int j = 0; j < n; ++j)
      if (!is_locally_principal(tower.total_transform(leaf, ideals[j])))
        throw PreconditionError("pullback of ideal " + std::to_string(j + 1) +
                                " is not locally principal on chart " +
                                std::to_string(leaf));

  // Certify the symmetry of the finished tower before anyone reports on it.
  for (const GroupElement& g : action.elements()) (void)transport_tower(g, tower);

  return SimplifyResult{std::move(tower),  std::move(ideals),
                        action,            std::move(sigmas),
                        std::move(stages), std::move(values)};
}

}  // namespace equiblow
