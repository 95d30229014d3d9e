#ifndef EQUIBLOW_CHART_HPP
#define EQUIBLOW_CHART_HPP

#include <optional>
#include <string>
#include <vector>

#include "equiblow/monomial.hpp"

namespace equiblow {

/// One affine chart of a blowup tower. A chart born as branch j of a center
/// T on its parent carries the substitution
///     x_j <- x_j,   x_i <- x_j * x_i  (i in T \ {j}),   x_k <- x_k otherwise,
/// mapping parent coordinates into this chart's coordinates. Variable j is
/// exceptional here; exceptional flags inherit monotonically from the parent.
struct Chart {
  int id = 0;
  std::optional<int> parent;
  /// substitution[v] = image of parent variable v in this chart's variables.
  /// Identity at the root.
  std::vector<Monomial> substitution;
  /// from_root[v] = image of root variable v (composite substitution).
  std::vector<Monomial> from_root;
  std::vector<bool> exceptional;
  std::vector<int> center;  // center of birth (parent variable indices, sorted); empty at root
  std::optional<int> branch;
  std::vector<int> children;
};

/// A blowup center: a coordinate subspace V(x_i : i in vars) of one chart.
struct Center {
  int chart_id = 0;
  std::vector<int> vars;  // sorted, distinct, size >= 2

  friend bool operator==(const Center& a, const Center& b) {
    return a.chart_id == b.chart_id && a.vars == b.vars;
  }
  friend bool operator<(const Center& a, const Center& b) {
    if (a.chart_id != b.chart_id) return a.chart_id < b.chart_id;
    return a.vars < b.vars;
  }
};

/// One step of a tower. The shape admits several centers (which must sit on
/// distinct charts); the engine schedules exactly one center per step and
/// ties an orbit's steps together through orbit_tag.
struct BlowupStep {
  std::vector<Center> centers;
  std::string orbit_tag;
};

/// A forest-of-charts model of an iterated blowup: a tree of charts rooted
/// at the ambient affine space, plus the ordered list of steps that built
/// it. Charts are append-only; ids are assigned in creation order.
class BlowupTower {
 public:
  static BlowupTower new_root(int arity, std::vector<std::string> variable_names);

  int arity() const { return arity_; }
  const std::vector<std::string>& variable_names() const { return names_; }
  const std::vector<Chart>& charts() const { return charts_; }
  const Chart& chart(int id) const;  // ChartNotFoundError
  bool is_leaf(int id) const;
  std::vector<int> leaves() const;  // ascending ids
  const std::vector<BlowupStep>& steps() const { return steps_; }
  int depth(int id) const;

  /// Blow up the coordinate subspace V(x_i : i in center) of a leaf chart.
  /// Creates one child per center variable (ascending), records a
  /// single-center step, and returns the new chart ids in branch order.
  std::vector<int> blow_up(int chart_id, std::vector<int> center,
                           std::string orbit_tag = {});

  /// Image of a root-level monomial in a chart (composite substitution).
  Monomial pull_monomial(int chart_id, const Monomial& at_root) const;
  /// Total transform: pull back every generator and re-minimalize.
  MonomialIdeal total_transform(int chart_id, const MonomialIdeal& at_root) const;

  /// Transport along the unique chain from an ancestor chart down to a
  /// descendant (or the chart itself).
  Monomial transport_monomial(int from_chart, int to_chart, const Monomial& m) const;
  MonomialIdeal transport_ideal(int from_chart, int to_chart,
                                const MonomialIdeal& ideal) const;

  /// Nearest ancestor-or-self of `chart_id` contained in `candidates`
  /// (which must hold one). Used to locate the carrier of per-leaf data.
  int nearest_carrier(int chart_id, const std::vector<int>& candidates) const;

  /// Graphviz rendering: one node per chart labeled "id:center:branch",
  /// edges parent -> child, deterministic order. Indices are one-based.
  std::string to_dot() const;

 private:
  BlowupTower() = default;
  int arity_ = 0;
  std::vector<std::string> names_;
  std::vector<Chart> charts_;
  std::vector<BlowupStep> steps_;
};

/// Apply a substitution (image of each input variable) to a monomial:
/// the product of substitution[v]^m[v].
Monomial apply_substitution(const std::vector<Monomial>& substitution,
                            const Monomial& m);

}  // namespace equiblow

#endif  // EQUIBLOW_CHART_HPP
