#ifndef EQUIBLOW_RESOLVE_HPP
#define EQUIBLOW_RESOLVE_HPP

#include <string>
#include <vector>

#include "equiblow/chart.hpp"
#include "equiblow/group.hpp"
#include "equiblow/monomial.hpp"
#include "equiblow/principalize.hpp"

namespace equiblow {

// A rational map to projective space with monomial coordinates
// [f_0 : ... : f_m], plus a finite symmetry. Every generator must carry a
// coord_perm saying where each coordinate lands: act(g, f_k) has to equal
// the coordinate coord_perm[k], or the map spec is rejected.
struct RationalMapSpec {
  std::vector<Monomial> coordinates;        // at least one, uniform arity
  std::vector<GroupElement> generators;
  std::vector<std::string> variable_names;  // optional
};

// The ideal spanned by the coordinate monomials. The map is undefined
// exactly where all coordinates vanish, so making this ideal locally
// principal — after which the common factor can be divided out — is what
// removes the indeterminacy.
MonomialIdeal base_ideal(const RationalMapSpec& map);

// Close the declared symmetries into the full group. An empty generator
// list means no symmetry is imposed: the result is the trivial group, with
// the identity coordinate permutation filled in so downstream code can rely
// on coord_perm being present on every element.
GroupAction map_symmetry_closure(const RationalMapSpec& map);

struct ResolvedLeaf {
  int chart = 0;
  std::vector<Monomial> pulled;   // coordinate pullbacks on this chart
  Monomial factor;                // their common factor (the gcd)
  std::vector<Monomial> reduced;  // pulled / factor
  bool regular = false;           // some reduced coordinate is 1
};

struct ResolvedMap {
  RationalMapSpec map;
  MonomialIdeal base;
  GroupAction group;  // closure, coordinate permutations included
  BlowupTower tower;
  PrincipalizeResult principalization;  // selection trace for the base ideal
  std::vector<ResolvedLeaf> leaves;     // ascending chart id
};

// Eliminate the map's points of indeterminacy: principalize the base ideal
// equivariantly (orbit tags "m-<round>"), then on every leaf divide the
// pulled-back coordinates by their common factor. On each leaf the reduced
// map is regular — one coordinate is the constant 1 — exactly because the
// pulled-back base ideal is locally principal there; resolve checks that
// equivalence rather than assuming it. Throws NotInvariantError for a map
// that is not actually symmetric, TerminationGuardError when `max_steps`
// blowups do not suffice.
ResolvedMap resolve_map(const RationalMapSpec& map, int max_steps);

struct ResolutionCheck {
  bool ok = true;
  std::vector<std::string> witnesses;  // human-readable, one per defect
};

// Re-derive everything a ResolvedMap claims: pullbacks, factors, reduced
// coordinates, regularity flags, their equivalence with local principality
// of the pulled-back base ideal, and the symmetry of the whole leaf family.
// Collects witnesses instead of throwing, so tampered data can be reported.
ResolutionCheck verify_resolution(const ResolvedMap& resolved);

}  // namespace equiblow

#endif  // EQUIBLOW_RESOLVE_HPP
