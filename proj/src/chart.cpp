#include "equiblow/chart.hpp"

#include <algorithm>
#include <sstream>

namespace equiblow {

Monomial apply_substitution(const std::vector<Monomial>& substitution,
                            const Monomial& m) {
  if (static_cast<int>(substitution.size()) != m.arity())
    throw ArityError("apply_substitution: arity mismatch");
  Monomial out = Monomial::unit(substitution.empty()
                                    ? m.arity()
                                    : substitution.front().arity());
  for (int v = 0; v < m.arity(); ++v)
    if (m[v] != 0) out = mul(out, pow(substitution[static_cast<size_t>(v)], m[v]));
  return out;
}

BlowupTower BlowupTower::new_root(int arity, std::vector<std::string> variable_names) {
  if (arity < 1) throw ArityError("tower arity must be at least 1");
  if (!variable_names.empty() &&
      static_cast<int>(variable_names.size()) != arity)
    throw ArityError("variable name count does not match arity");
  BlowupTower t;
  t.arity_ = arity;
  if (variable_names.empty()) {
    for (int i = 0; i < arity; ++i) t.names_.push_back("x" + std::to_string(i + 1));
  } else {
    t.names_ = std::move(variable_names);
  }
  Chart root;
  root.id = 0;
  for (int v = 0; v < arity; ++v) {
    std::vector<Exponent> e(static_cast<size_t>(arity), 0);
    e[static_cast<size_t>(v)] = 1;
    root.substitution.emplace_back(e);
  }
  root.from_root = root.substitution;
  root.exceptional.assign(static_cast<size_t>(arity), false);
  t.charts_.push_back(std::move(root));
  return t;
}

const Chart& BlowupTower::chart(int id) const {
  if (id < 0 || id >= static_cast<int>(charts_.size()))
    throw ChartNotFoundError("no chart with id " + std::to_string(id));
  return charts_[static_cast<size_t>(id)];
}

bool BlowupTower::is_leaf(int id) const { return chart(id).children.empty(); }

std::vector<int> BlowupTower::leaves() const {
  std::vector<int> out;
  for (const Chart& c : charts_)
    if (c.children.empty()) out.push_back(c.id);
  return out;
}

int BlowupTower::depth(int id) const {
  int d = 0;
  const Chart* c = &chart(id);
  while (c->parent) {
    c = &chart(*c->parent);
    ++d;
  }
  return d;
}

std::vector<int> BlowupTower::blow_up(int chart_id, std::vector<int> center,
                                      std::string orbit_tag) {
  const Chart& parent = chart(chart_id);
  if (!parent.children.empty())
    throw NotLeafError("chart " + std::to_string(chart_id) + " is not a leaf");
  std::sort(center.begin(), center.end());
  center.erase(std::unique(center.begin(), center.end()), center.end());
  if (center.size() < 2)
    throw InvalidCenterError("center must name at least two distinct variables");
  for (int v : center)
    if (v < 0 || v >= arity_)
      throw InvalidCenterError("center variable " + std::to_string(v + 1) +
                               " out of range");

  // Appending children may reallocate charts_, so the parent data the loop
  // needs is copied out first.
  const std::vector<bool> parent_exceptional = parent.exceptional;
  const std::vector<Monomial> parent_from_root = parent.from_root;

  std::vector<int> created;
  for (int j : center) {
    Chart child;
    child.id = static_cast<int>(charts_.size());
    child.parent = chart_id;
    child.center = center;
    child.branch = j;
    child.exceptional = parent_exceptional;
    child.exceptional[static_cast<size_t>(j)] = true;
    for (int v = 0; v < arity_; ++v) {
      std::vector<Exponent> e(static_cast<size_t>(arity_), 0);
      e[static_cast<size_t>(v)] = 1;
      const bool in_center = std::binary_search(center.begin(), center.end(), v);
      if (in_center && v != j) e[static_cast<size_t>(j)] += 1;  // x_v <- x_j x_v
      child.substitution.emplace_back(e);
    }
    child.from_root.reserve(static_cast<size_t>(arity_));
    for (int v = 0; v < arity_; ++v)
      child.from_root.push_back(
          apply_substitution(child.substitution, parent_from_root[static_cast<size_t>(v)]));
    created.push_back(child.id);
    charts_.push_back(std::move(child));
  }
  charts_[static_cast<size_t>(chart_id)].children = created;
  BlowupStep step;
  step.centers.push_back(Center{chart_id, center});
  step.orbit_tag = std::move(orbit_tag);
  steps_.push_back(std::move(step));
  return created;
}

Monomial BlowupTower::pull_monomial(int chart_id, const Monomial& at_root) const {
  if (at_root.arity() != arity_) throw ArityError("pull_monomial: arity mismatch");
  return apply_substitution(chart(chart_id).from_root, at_root);
}

MonomialIdeal BlowupTower::total_transform(int chart_id,
                                           const MonomialIdeal& at_root) const {
  std::vector<Monomial> gens;
  gens.reserve(at_root.generators().size());
  for (const Monomial& g : at_root.generators())
    gens.push_back(pull_monomial(chart_id, g));
  return minimalize(std::move(gens));
}

Monomial BlowupTower::transport_monomial(int from_chart, int to_chart,
                                         const Monomial& m) const {
  if (m.arity() != arity_) throw ArityError("transport_monomial: arity mismatch");
  // Collect the chain to_chart -> ... -> from_chart, then substitute top-down.
  std::vector<int> chain;
  int cur = to_chart;
  while (cur != from_chart) {
    const Chart& c = chart(cur);
    if (!c.parent)
      throw ChartNotFoundError("chart " + std::to_string(from_chart) +
                               " is not an ancestor of " + std::to_string(to_chart));
    chain.push_back(cur);
    cur = *c.parent;
  }
  Monomial out = m;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    out = apply_substitution(chart(*it).substitution, out);
  return out;
}

MonomialIdeal BlowupTower::transport_ideal(int from_chart, int to_chart,
                                           const MonomialIdeal& ideal) const {
  std::vector<Monomial> gens;
  gens.reserve(ideal.generators().size());
  for (const Monomial& g : ideal.generators())
    gens.push_back(transport_monomial(from_chart, to_chart, g));
  return minimalize(std::move(gens));
}

int BlowupTower::nearest_carrier(int chart_id,
                                 const std::vector<int>& candidates) const {
  int cur = chart_id;
  for (;;) {
    if (std::find(candidates.begin(), candidates.end(), cur) != candidates.end())
      return cur;
    const Chart& c = chart(cur);
    if (!c.parent)
      throw ChartNotFoundError("no carrier above chart " + std::to_string(chart_id));
    cur = *c.parent;
  }
}

std::string BlowupTower::to_dot() const {
  std::ostringstream out;
  out << "digraph tower {\n";
  for (const Chart& c : charts_) {
    out << "  c" << c.id << " [label=\"" << c.id << ":";
    if (!c.center.empty()) {
      out << "{";
      for (size_t i = 0; i < c.center.size(); ++i) {
        if (i) out << ",";
        out << c.center[i] + 1;
      }
      out << "}";
    }
    out << ":";
    if (c.branch) out << *c.branch + 1;
    out << "\"];\n";
  }
  for (const Chart& c : charts_)
    for (int child : c.children) out << "  c" << c.id << " -> c" << child << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace equiblow
