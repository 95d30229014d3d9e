#ifndef EQUIBLOW_PRINCIPALIZE_HPP
#define EQUIBLOW_PRINCIPALIZE_HPP

#include <map>
#include <string>
#include <vector>

#include "equiblow/chart.hpp"
#include "equiblow/group.hpp"
#include "equiblow/monomial.hpp"

namespace equiblow {

/// How far an ideal is from being locally principal, measured pairwise.
/// The monomial factor is pulled out first; on the residual, nu(i, j) is the
/// smallest combined exponent any generator has in variables i and j. The
/// defect is the largest nu. A residual of (1) has defect 0, but a zero
/// defect does not imply the residual is trivial.
struct PairInvariantRow {
  int i;
  int j;
  Exponent nu;
};

struct PairInvariantTable {
  Monomial factored;                  // the common monomial factor
  MonomialIdeal residual;             // ideal / factored
  std::vector<PairInvariantRow> rows; // all pairs i < j, in lexicographic order
  Exponent defect;                    // max nu over rows, 0 if arity < 2
};

PairInvariantTable pair_invariants(const MonomialIdeal& ideal);

/// Smallest variable set (at least two variables; ordered by size, then
/// lexicographically) that every generator of the residual touches. Used
/// when the defect is zero but the residual is still not principal.
/// Requires a non-unit residual (its full support always qualifies).
std::vector<int> fallback_center(const MonomialIdeal& residual);

/// One equivariant selection round: which centers were blown up and why.
struct SelectionRound {
  int index = 0;            // 1-based within one principalization run
  Exponent defect = 0;      // global defect over the bad leaves at selection
  int bad_leaves = 0;       // leaves whose value was not yet principal
  bool fallback = false;    // defect was zero, minimal admissible sets used
  bool separated = false;   // orbit overlapped itself on a chart and was merged
  std::vector<Center> centers;  // the batch, ascending by chart
  std::string orbit_tag;
};

struct PrincipalizeResult {
  std::map<int, MonomialIdeal> leaf_values;  // final leaf -> (principal) value
  std::vector<SelectionRound> rounds;
  int steps_used = 0;
};

/// Pick the next batch of centers for a family of leaf values. The batch is
/// a single group orbit of centers — merged per chart if the orbit meets a
/// chart more than once — so blowing it up preserves the symmetry. Throws
/// NothingToDoError when every value is already principal.
///
/// Selection: take the bad leaves, compute the global defect D. If D > 0
/// the candidates are all (leaf, pair) with nu(pair) = D; otherwise each bad
/// leaf contributes its minimal admissible set. Among candidate orbits the
/// one with the smallest sorted list of variable sets wins (ties: smallest
/// sorted (chart, set) list).
SelectionRound select_step(const BlowupTower& tower,
                           const std::map<int, MonomialIdeal>& leaf_values,
                           const GroupAction& group, int round_index,
                           const std::string& tag_prefix);

/// Blow up below the given leaves until the value on every leaf is locally
/// principal, one select_step batch at a time. leaf_values must cover the
/// tower's leaves exactly and must be compatible with the group (the value
/// on a transported leaf is the permuted value). Children inherit the
/// substituted value of their parent. Throws TerminationGuardError, with the
/// full round-by-round trace in the message, if the step budget would be
/// exceeded; the tower is left at the last orbit-closed state.
PrincipalizeResult principalize_family(BlowupTower& tower,
                                       std::map<int, MonomialIdeal> leaf_values,
                                       const GroupAction& group, int max_steps,
                                       const std::string& tag_prefix = "b");

/// Principalize a single invariant ideal from a fresh tower.
struct PrincipalizedIdeal {
  BlowupTower tower;
  PrincipalizeResult result;
};

PrincipalizedIdeal principalize(const MonomialIdeal& ideal, const GroupAction& group,
                                int max_steps,
                                std::vector<std::string> variable_names = {},
                                const std::string& tag_prefix = "b");

}  // namespace equiblow

#endif  // EQUIBLOW_PRINCIPALIZE_HPP
