#ifndef EQUIBLOW_GROUP_HPP
#define EQUIBLOW_GROUP_HPP

#include <map>
#include <optional>
#include <vector>

#include "equiblow/chart.hpp"
#include "equiblow/monomial.hpp"

namespace equiblow {

/// A symmetry of the setup: a permutation of the variables, optionally
/// paired with the permutation it induces on a collection of ideals and on
/// the coordinates of a monomial map. Permutations are stored as image
/// lists: perm[i] is where i goes (0-based).
struct GroupElement {
  std::vector<int> var_perm;
  std::optional<std::vector<int>> ideal_perm;
  std::optional<std::vector<int>> coord_perm;

  bool is_identity() const;
};

GroupElement compose(const GroupElement& g, const GroupElement& h);  // g after h
GroupElement inverse(const GroupElement& g);

/// A finite permutation group, closed under composition and inverse and
/// containing the identity. Elements are keyed by their variable
/// permutation; two elements with equal var_perm but conflicting
/// ideal/coordinate data make the action inconsistent.
class GroupAction {
 public:
  /// Close a generating set. Generators must either all carry ideal_perm or
  /// none (same for coord_perm). Throws InconsistentActionError on clashes.
  static GroupAction closure(std::vector<GroupElement> generators, int arity);
  static GroupAction trivial(int arity);

  int arity() const { return arity_; }
  /// Canonical order: ascending by var_perm image list (identity first).
  const std::vector<GroupElement>& elements() const { return elements_; }
  bool is_trivial() const { return elements_.size() == 1; }

 private:
  GroupAction() = default;
  int arity_ = 0;
  std::vector<GroupElement> elements_;
};

/// x_i -> x_{g(i)} on monomials: the image's exponent at g(i) is m's at i.
Monomial act(const GroupElement& g, const Monomial& m);
/// Permute every generator and re-canonicalize.
MonomialIdeal act_on_ideal(const GroupElement& g, const MonomialIdeal& ideal);
/// Image of a sorted variable-index set.
std::vector<int> act_on_index_set(const GroupElement& g, const std::vector<int>& vars);

/// For each group element (in canonical element order), the permutation
/// sigma with g . I_k = I_{sigma(k)}. Duplicate values are matched
/// order-preservingly inside each value class, which makes the assignment
/// canonical and cocycle-consistent. Claimed ideal_perms are checked against
/// the values. Throws NotInvariantError naming the offending element and
/// ideal index; cocycle violations throw as well.
std::vector<std::vector<int>> check_collection_invariant(
    const GroupAction& group, const std::vector<MonomialIdeal>& collection);

/// Transport a tower along a group element: the chart bijection phi with
/// phi(root) = root, phi(child(c, T, j)) = child(phi(c), g.T, g(j)), which
/// must exist for every chart; composite substitutions must commute with the
/// permutation. Throws EquivarianceBrokenError (naming the chart and, where
/// known, the step that created it) if the tower is not symmetric under g.
std::map<int, int> transport_tower(const GroupElement& g, const BlowupTower& tower);

}  // namespace equiblow

#endif  // EQUIBLOW_GROUP_HPP
