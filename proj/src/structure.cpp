#include "ucvrp/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ucvrp {

std::vector<int> ReducedTree::children_of_critical(VertexId z) const {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(critical_of.size()); ++c)
    if (critical_of[c] == z) out.push_back(c);
  return out;
}

ReducedTree height_reduce(const Instance& inst, const Hierarchy& h, const Params& p) {
  const int k = static_cast<int>(h.components.size());
  ReducedTree rt;
  rt.band_of.assign(k, 1);
  if (!inst.terminals().empty()) {
    Rational dmin = inst.dist(inst.terminals()[0]);
    for (VertexId t : inst.terminals()) dmin = min(dmin, inst.dist(t));
    if (dmin.is_zero()) throw std::invalid_argument("terminal at the depot: minimum distance is 0");
    rt.band_width = p.alpha * p.eps * dmin;
    for (int c = 0; c < k; ++c) rt.band_of[c] = static_cast<int>((inst.dist(h.components[c].root) / rt.band_width).floor_long()) + 1;
  }
  rt.max_band = k ? *std::max_element(rt.band_of.begin(), rt.band_of.end()) : 0;
  rt.within_band_limit = Rational(rt.max_band) <= p.h_eps;

  // maximal connected sets of same-band components
  std::vector<int> uf(k);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      if (rt.band_of[a] != rt.band_of[b]) continue;
      const Region &ca = h.components[a], &cb = h.components[b];
      bool touch = ca.root == cb.root || (ca.exit && *ca.exit == cb.root) || (cb.exit && *cb.exit == ca.root);
      if (touch) uf[find(a)] = find(b);
    }
  std::vector<VertexId> crit(k, kNoVertex);
  for (int c = 0; c < k; ++c) {
    int r = find(c);
    VertexId v = h.components[c].root;
    if (crit[r] == kNoVertex || inst.depth(v) < inst.depth(crit[r]) ||
        (inst.depth(v) == inst.depth(crit[r]) && v < crit[r]))
      crit[r] = v;
  }

  const int n = inst.size();
  std::vector<VertexId> parent = inst.parents();
  std::vector<Rational> weight = inst.weights();
  rt.origin.resize(n);
  std::iota(rt.origin.begin(), rt.origin.end(), 0);
  rt.critical_of.resize(k);
  rt.root_copy.resize(k);
  rt.attach_weight.resize(k);
  for (int c = 0; c < k; ++c) {
    VertexId z = crit[find(c)], r = h.components[c].root;
    rt.critical_of[c] = z;
    rt.attach_weight[c] = inst.dist(r) - inst.dist(z);
    if (r == z) {
      rt.root_copy[c] = r;
      continue;
    }
    auto copy = static_cast<VertexId>(parent.size());
    rt.root_copy[c] = copy;
    parent.push_back(z);
    weight.push_back(rt.attach_weight[c]);
    rt.origin.push_back(r);
  }
  for (VertexId v = 0; v < n; ++v) {
    if (v == inst.root()) continue;
    int c = h.component_of_edge[v];
    if (inst.parent(v) == h.components[c].root) parent[v] = rt.root_copy[c];
  }
  rt.tree = Instance(std::move(parent), std::move(weight), inst.demand_map());
  std::set<VertexId> cs(rt.critical_of.begin(), rt.critical_of.end());
  rt.critical_vertices.assign(cs.begin(), cs.end());
  return rt;
}

Solution map_back(const ReducedTree& rt, const Solution& sol) {
  auto rep = check_feasible(rt.tree, sol);
  if (!rep.feasible()) throw std::invalid_argument("map_back: infeasible solution: " + rep.violations[0].message);
  return sol;
}

// ---------------------------------------------------------------- value sets

std::vector<QPart> component_parts(const Instance& inst, const Hierarchy& h, int c, const Params& p) {
  const Region& comp = h.components[c];
  std::vector<QPart> parts;
  std::set<VertexId> placed;
  for (int s : h.cells_of_component(c)) {
    QPart part;
    part.cell = s;
    for (VertexId v : h.cells[s].vertices)
      if (inst.is_terminal(v) && h.cells[s].strictly_inside(v) && inst.demand(v) <= p.gamma_prime) {
        part.terminals.push_back(v);
        part.demand += inst.demand(v);
        placed.insert(v);
      }
    if (!part.terminals.empty()) parts.push_back(std::move(part));
  }
  for (VertexId v : comp.vertices)
    if (inst.is_terminal(v) && comp.strictly_inside(v) && !placed.count(v))
      parts.push_back(QPart{{v}, inst.demand(v), -1});
  return parts;
}

int ValueSets::index_of(const Rational& v) const {
  auto it = std::lower_bound(y.begin(), y.end(), v);
  return it != y.end() && *it == v ? static_cast<int>(it - y.begin()) : -1;
}

ValueSets build_value_sets(const Instance& inst, const Hierarchy& h, const Params& p, std::size_t cap) {
  ValueSets vs;
  const Rational one(1);
  std::set<Rational> base;
  for (int c = 0; c < static_cast<int>(h.components.size()); ++c) {
    vs.q_c.push_back(component_parts(inst, h, c, p));
    std::set<Rational> sums{Rational(0)};
    for (const QPart& q : vs.q_c.back()) {
      std::vector<Rational> add;
      for (const Rational& s : sums)
        if (s + q.demand <= one) add.push_back(s + q.demand);
      sums.insert(add.begin(), add.end());
      if (sums.size() > cap) throw CapExceeded("value set of component " + std::to_string(c) + " exceeds the cap");
    }
    std::vector<Rational> yc{p.alpha};
    for (const Rational& s : sums)
      if (s > p.alpha) yc.push_back(s);
    base.insert(yc.begin(), yc.end());
    vs.y_c.push_back(std::move(yc));
  }
  std::set<Rational> reach{Rational(0)};
  for (const Rational& v : base) {
    for (auto it = reach.begin(); it != reach.end(); ++it) {
      Rational s = *it + v;
      if (s > one) break;
      reach.insert(s);
      if (reach.size() > cap + 1) throw CapExceeded("value set Y exceeds the cap of " + std::to_string(cap));
    }
  }
  reach.erase(Rational(0));
  vs.y.assign(reach.begin(), reach.end());
  return vs;
}

// ---------------------------------------------------------------- rounding

RoundingResult adaptive_round(std::vector<Rational> demands, const Rational& beta) {
  if (beta.sign() <= 0 || !(Rational(1) / beta).is_integer())
    throw std::invalid_argument("1/beta must be a positive integer");
  if (demands.empty()) throw std::invalid_argument("no demands to round");
  const auto k = static_cast<std::size_t>((Rational(1) / beta).floor_long());
  RoundingResult r;
  if (demands.size() <= k) {
    r.rounded = demands;
    r.replaced = demands;
    return r;
  }
  std::sort(demands.begin(), demands.end());
  const std::size_t g = (demands.size() + k - 1) / k;
  std::vector<Rational> padded(k * g - demands.size(), Rational(0));
  padded.insert(padded.end(), demands.begin(), demands.end());
  for (std::size_t j = 0; j < k; ++j) r.groups.emplace_back(padded.begin() + j * g, padded.begin() + (j + 1) * g);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const Rational& top = r.groups[j].back();
    for (std::size_t i = 0; i < g; ++i) {
      r.rounded.push_back(top);
      r.replaced.push_back(r.groups[j + 1][i]);
    }
  }
  r.discarded = r.groups.back();
  return r;
}

}  // namespace ucvrp
