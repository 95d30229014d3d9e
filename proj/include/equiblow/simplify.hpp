#ifndef EQUIBLOW_SIMPLIFY_HPP
#define EQUIBLOW_SIMPLIFY_HPP

#include <map>
#include <string>
#include <vector>

#include "equiblow/chart.hpp"
#include "equiblow/group.hpp"
#include "equiblow/monomial.hpp"
#include "equiblow/principalize.hpp"

namespace equiblow {

// A collection carried along a tower: for each leaf chart, the current value
// of every member ideal, in collection order. All vectors have the same
// length (the collection size n); the map keys are leaf chart ids.
using LeafCollection = std::map<int, std::vector<MonomialIdeal>>;

// One failing instance of the depth condition: on this leaf, the subfamily
// indexed by `lambda` does not sum to the unit ideal.
struct DepthWitness {
  int leaf = 0;
  std::vector<int> lambda;  // 0-based indices into the collection, ascending
};

struct DepthCheck {
  bool holds = true;
  std::vector<DepthWitness> witnesses;
};

// Depth condition at level i: on every leaf, every size-i subfamily sums to
// the unit ideal. For monomial ideals this happens exactly when some member
// of the subfamily is itself the unit ideal on that leaf, which is what makes
// the witnesses easy to read. Level 1 is the pipeline's terminal state (every
// ideal is the unit ideal everywhere); levels above the collection size hold
// vacuously.
DepthCheck check_depth_condition(const LeafCollection& values, int i);

// The stage ideal at level i, leaf by leaf: the intersection, over all
// subfamilies of size i-1, of the subfamily sums. At i = 2 this degenerates
// to the plain intersection of all members.
std::map<int, MonomialIdeal> stage_ideal(const LeafCollection& values, int i);

// Conductor transforms after a stage's blowups. `values` holds the stage
// entry collection on the stage's entry leaves (the carriers) and `stage_j`
// the stage ideal on the same charts; both must share the same key set. For
// every current leaf of the tower, pulls the carrier's data down and replaces
// each member I by the colon ideal (pullback of I) : (pullback of J).
//
// Requires the pullback of J to be locally principal on every current leaf —
// that is what the stage's blowups were for — and throws PreconditionError
// where it is not.
LeafCollection weak_transforms(const BlowupTower& tower,
                               const LeafCollection& values,
                               const std::map<int, MonomialIdeal>& stage_j);

// One failing instance of the stalk comparison on a leaf: the transform of
// member `ideal` is locally principal but its original's pullback is not, or
// vice versa.
struct StalkWitness {
  int leaf = 0;
  int ideal = 0;
  bool transform_principal = false;
  bool pullback_principal = false;
};

struct StalkCheck {
  bool holds = true;
  std::vector<StalkWitness> witnesses;
};

// Audit run after every stage: on each leaf carrying `transforms`, member j's
// transform must be locally principal exactly when the pullback of the
// original ideal `originals[j]` (taken from the root through the whole tower)
// is. This ties the bookkeeping ideals back to the input collection.
StalkCheck verify_stalk_formula(const BlowupTower& tower,
                                const std::vector<MonomialIdeal>& originals,
                                const LeafCollection& transforms);

// Result of one depth condition evaluation, kept with enough context to
// reproduce it: which level was tested and whether the driver insisted on it.
// The entry condition of the final stage is reported but not enforced when
// earlier stages were skipped — see simplify_collection.
struct ConditionRecord {
  int level = 0;
  bool holds = true;
  bool enforced = true;
  std::vector<DepthWitness> witnesses;
};

// Everything that happened during one stage of the pipeline.
struct StageRecord {
  int level = 0;      // the i of this stage
  bool skipped = false;  // true when the all-principal shortcut fired

  // The fields below are only meaningful when skipped is false.
  ConditionRecord entry;                  // depth condition at `level`
  std::vector<int> carriers;              // entry leaves, ascending
  std::map<int, MonomialIdeal> stage_j;   // stage ideal per carrier
  std::vector<SelectionRound> rounds;     // selection trace of this stage
  int steps_begin = 0;                    // [begin, end) into tower.steps()
  int steps_end = 0;
  LeafCollection transforms;              // conductor transforms per new leaf
  ConditionRecord exit;                   // depth condition at `level` - 1
  StalkCheck stalk;                       // per-stage audit
};

struct SimplifyResult {
  BlowupTower tower;
  std::vector<MonomialIdeal> ideals;     // canonical (sorted) input order
  GroupAction group;                     // closure of the variable action
  std::vector<std::vector<int>> sigmas;  // induced ideal permutations,
                                         // aligned with group.elements()
  std::vector<StageRecord> stages;       // levels n+1 down to 2, in run order
  LeafCollection final_values;           // last stage's transforms
};

// Equivariant simplification of an unordered collection of monomial ideals.
//
// After validating any claimed ideal permutations against the input order,
// the claims are dropped, the collection is sorted into its canonical order
// (so that permuting the input yields an identical run) and the induced
// permutations are recomputed. The pipeline then walks levels i = n+1, ...,
// 2. Each stage asserts the depth condition at level i, principalizes the
// stage ideal equivariantly (orbit tags "s<i>-<round>"), replaces the
// collection by its conductor transforms, asserts the depth condition at
// level i-1 on the new leaves, and checks the stalk comparison against the
// original ideals.
//
// When every current value on every leaf is already locally principal, the
// remaining inductive stages are recorded as skipped and only the final
// stage (i = 2) runs. On that shortcut path the final stage's entry
// condition can legitimately fail — the stage ideal, an intersection of
// principal ideals, is then already principal, so nothing is blown up — and
// it is recorded without being enforced.
//
// `max_steps` is a per-stage blowup budget handed to each principalization
// call. Errors: NotInvariantError (collection not closed under the action,
// or a claimed permutation is wrong), TerminationGuardError (budget
// exhausted), plus the usual arity checks.
SimplifyResult simplify_collection(const std::vector<MonomialIdeal>& collection,
                                   const std::vector<GroupElement>& generators,
                                   int max_steps,
                                   std::vector<std::string> variable_names = {});

}  // namespace equiblow

#endif  // EQUIBLOW_SIMPLIFY_HPP
