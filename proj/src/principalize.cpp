#include "equiblow/principalize.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "equiblow/errors.hpp"

namespace equiblow {

namespace {

std::string describe_vars(const std::vector<int>& vars) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (k) os << ",";
    os << vars[k] + 1;
  }
  os << "}";
  return os.str();
}

std::string describe_center(const Center& c) {
  return "chart " + std::to_string(c.chart_id) + " at " + describe_vars(c.vars);
}

using Transport = std::map<int, int>;

/// One transport map per group element, in element order.
std::vector<Transport> all_transports(const GroupAction& group, const BlowupTower& tower) {
  std::vector<Transport> out;
  out.reserve(group.elements().size());
  for (const GroupElement& g : group.elements()) out.push_back(transport_tower(g, tower));
  return out;
}

void check_family_invariant(const std::map<int, MonomialIdeal>& values,
                            const GroupAction& group,
                            const std::vector<Transport>& transports) {
  for (std::size_t gi = 0; gi < group.elements().size(); ++gi) {
    const GroupElement& g = group.elements()[gi];
    for (const auto& [leaf, value] : values) {
      int image_leaf = transports[gi].at(leaf);
      auto it = values.find(image_leaf);
      if (it == values.end() || it->second != act_on_ideal(g, value))
        throw NotInvariantError("the family of leaf ideals is not symmetric: the value "
                                "on chart " + std::to_string(leaf) +
                                " does not transport onto chart " +
                                std::to_string(image_leaf));
    }
  }
}

/// The full group orbit of one candidate center, as a sorted set.
std::vector<Center> orbit_of(const Center& seed, const GroupAction& group,
                             const std::vector<Transport>& transports) {
  std::set<Center> members;
  for (std::size_t gi = 0; gi < group.elements().size(); ++gi) {
    const GroupElement& g = group.elements()[gi];
    members.insert(Center{transports[gi].at(seed.chart_id), act_on_index_set(g, seed.vars)});
  }
  return std::vector<Center>(members.begin(), members.end());
}

/// Canonical comparison key for an orbit: the sorted list of variable sets
/// first (what is being blown up), the member list itself second (where).
using OrbitKey = std::pair<std::vector<std::vector<int>>, std::vector<Center>>;

OrbitKey orbit_key(const std::vector<Center>& orbit) {
  std::vector<std::vector<int>> shapes;
  shapes.reserve(orbit.size());
  for (const Center& c : orbit) shapes.push_back(c.vars);
  std::sort(shapes.begin(), shapes.end());
  return {std::move(shapes), orbit};
}

bool orbit_before(const std::vector<Center>& a, const std::vector<Center>& b) {
  return orbit_key(a) < orbit_key(b);
}

/// If the orbit meets some chart more than once, the members cannot be blown
/// up one after another (each blowup destroys the chart the others live on).
/// Merge per chart into the union of the variable sets; the merged batch is
/// again a single orbit, one center per chart.
std::vector<Center> separate_overlaps(const std::vector<Center>& orbit, bool& separated) {
  std::map<int, std::set<int>> merged;
  for (const Center& c : orbit) merged[c.chart_id].insert(c.vars.begin(), c.vars.end());
  separated = merged.size() < orbit.size();
  if (!separated) return orbit;
  std::vector<Center> batch;
  batch.reserve(merged.size());
  for (const auto& [chart_id, vars] : merged)
    batch.push_back(Center{chart_id, std::vector<int>(vars.begin(), vars.end())});
  return batch;
}

std::string format_round(const SelectionRound& round) {
  std::ostringstream os;
  os << "round " << round.index << ": defect " << round.defect << ", " << round.bad_leaves
     << " leaf" << (round.bad_leaves == 1 ? "" : "ves") << " to fix";
  if (round.fallback) os << " (zero-defect fallback)";
  if (round.separated) os << " (overlapping orbit merged per chart)";
  os << "; blew up";
  for (const Center& c : round.centers) os << " " << describe_center(c);
  return os.str();
}

}  // namespace

PairInvariantTable pair_invariants(const MonomialIdeal& ideal) {
  auto [factored, residual] = gcd_and_residual(ideal);
  PairInvariantTable table{std::move(factored), std::move(residual), {}, 0};
  const int n = ideal.arity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Exponent nu = -1;
      for (const Monomial& g : table.residual.generators()) {
        Exponent s = g[i] + g[j];
        if (nu < 0 || s < nu) nu = s;
      }
      table.rows.push_back({i, j, nu});
      if (nu > table.defect) table.defect = nu;
    }
  }
  return table;
}

std::vector<int> fallback_center(const MonomialIdeal& residual) {
  if (residual.is_unit())
    throw PreconditionError("fallback center requested for a principal ideal");
  const int n = residual.arity();
  auto admissible = [&](const std::vector<int>& vars) {
    for (const Monomial& g : residual.generators()) {
      Exponent touch = 0;
      for (int v : vars) touch += g[v];
      if (touch == 0) return false;
    }
    return true;
  };
  // Subsets by size, lexicographic within a size.
  for (int size = 2; size <= n; ++size) {
    std::vector<int> vars(size);
    for (int i = 0; i < size; ++i) vars[i] = i;
    while (true) {
      if (admissible(vars)) return vars;
      // next combination
      int pos = size - 1;
      while (pos >= 0 && vars[pos] == n - size + pos) --pos;
      if (pos < 0) break;
      ++vars[pos];
      for (int i = pos + 1; i < size; ++i) vars[i] = vars[i - 1] + 1;
    }
  }
  // Unreachable for a non-unit residual: its full support is admissible and
  // has at least two variables (a residual supported on one variable would
  // collapse to a single generator and be principal).
  throw PreconditionError("no admissible blowup center exists for the residual");
}

SelectionRound select_step(const BlowupTower& tower,
                           const std::map<int, MonomialIdeal>& leaf_values,
                           const GroupAction& group, int round_index,
                           const std::string& tag_prefix) {
  std::vector<Transport> transports = all_transports(group, tower);
  check_family_invariant(leaf_values, group, transports);

  SelectionRound round;
  round.index = round_index;
  round.orbit_tag = tag_prefix + std::to_string(round_index);

  // Bad leaves and the global defect.
  std::map<int, PairInvariantTable> tables;
  for (const auto& [leaf, value] : leaf_values) {
    PairInvariantTable table = pair_invariants(value);
    if (table.residual.is_unit()) continue;
    if (table.defect > round.defect) round.defect = table.defect;
    tables.emplace(leaf, std::move(table));
  }
  round.bad_leaves = static_cast<int>(tables.size());
  if (tables.empty())
    throw NothingToDoError("every leaf value is already locally principal");

  std::vector<Center> candidates;
  if (round.defect > 0) {
    for (const auto& [leaf, table] : tables)
      for (const PairInvariantRow& row : table.rows)
        if (row.nu == round.defect) candidates.push_back(Center{leaf, {row.i, row.j}});
  } else {
    round.fallback = true;
    for (const auto& [leaf, table] : tables)
      candidates.push_back(Center{leaf, fallback_center(table.residual)});
  }

  // Each candidate generates an orbit; blow up the canonically smallest one.
  std::vector<std::vector<Center>> orbits;
  for (const Center& c : candidates) {
    std::vector<Center> orbit = orbit_of(c, group, transports);
    if (std::find(orbits.begin(), orbits.end(), orbit) == orbits.end())
      orbits.push_back(std::move(orbit));
  }
  const std::vector<Center>& chosen =
      *std::min_element(orbits.begin(), orbits.end(), orbit_before);

  round.centers = separate_overlaps(chosen, round.separated);
  return round;
}

PrincipalizeResult principalize_family(BlowupTower& tower,
                                       std::map<int, MonomialIdeal> leaf_values,
                                       const GroupAction& group, int max_steps,
                                       const std::string& tag_prefix) {
  if (max_steps < 0) throw PreconditionError("the step budget cannot be negative");

  {
    std::vector<int> leaves = tower.leaves();
    if (leaf_values.size() != leaves.size() ||
        !std::all_of(leaves.begin(), leaves.end(),
                     [&](int id) { return leaf_values.count(id) > 0; }))
      throw PreconditionError("leaf values must cover the tower's leaves exactly");
  }
  for (const auto& [leaf, value] : leaf_values)
    if (value.arity() != tower.arity())
      throw ArityError("leaf value on chart " + std::to_string(leaf) + " has arity " +
                       std::to_string(value.arity()) + ", tower has " +
                       std::to_string(tower.arity()));

  PrincipalizeResult result;
  std::ostringstream trace;
  for (int round_index = 1;; ++round_index) {
    bool all_principal = true;
    for (const auto& [leaf, value] : leaf_values)
      if (!is_locally_principal(value)) {
        all_principal = false;
        break;
      }
    if (all_principal) break;

    SelectionRound round =
        select_step(tower, leaf_values, group, round_index, tag_prefix);

    if (result.steps_used + static_cast<int>(round.centers.size()) > max_steps) {
      trace << format_round(round) << " -- not executed\n";
      trace << "step budget of " << max_steps << " exhausted after " << result.steps_used
            << " steps with " << round.bad_leaves << " leaves still not principal";
      throw TerminationGuardError("principalization did not finish within " +
                                      std::to_string(max_steps) + " blowup steps",
                                  trace.str());
    }

    for (const Center& c : round.centers) {
      MonomialIdeal value = leaf_values.at(c.chart_id);
      leaf_values.erase(c.chart_id);
      for (int child_id : tower.blow_up(c.chart_id, c.vars, round.orbit_tag)) {
        const Chart& child = tower.chart(child_id);
        std::vector<Monomial> pulled;
        pulled.reserve(value.generators().size());
        for (const Monomial& g : value.generators())
          pulled.push_back(apply_substitution(child.substitution, g));
        leaf_values.emplace(child_id, minimalize(std::move(pulled)));
      }
      ++result.steps_used;
    }
    trace << format_round(round) << "\n";
    result.rounds.push_back(std::move(round));
  }

  result.leaf_values = std::move(leaf_values);
  return result;
}

PrincipalizedIdeal principalize(const MonomialIdeal& ideal, const GroupAction& group,
                                int max_steps, std::vector<std::string> variable_names,
                                const std::string& tag_prefix) {
  check_collection_invariant(group, {ideal});  // the value itself must be symmetric
  BlowupTower tower = BlowupTower::new_root(ideal.arity(), std::move(variable_names));
  std::map<int, MonomialIdeal> values;
  values.emplace(tower.charts().front().id, ideal);
  PrincipalizeResult result =
      principalize_family(tower, std::move(values), group, max_steps, tag_prefix);
  return PrincipalizedIdeal{std::move(tower), std::move(result)};
}

}  // namespace equiblow
